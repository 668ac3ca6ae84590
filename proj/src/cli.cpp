#include "gslab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "gslab/asymptotics.hpp"
#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"
#include "gslab/io.hpp"

#ifndef GSLAB_VERSION
#define GSLAB_VERSION "dev"
#endif

namespace gslab::cli {

namespace {

using io::Json;

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else io::write_file(path, text);
}

io::ResultRecord make_record(const io::RunConfig& cfg) {
  io::ResultRecord rec;
  rec.timestamp = io::utc_timestamp();
  rec.config = io::config_json(cfg);
  rec.diagnostics["version"] = GSLAB_VERSION;
  return rec;
}

Json num_or_null(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

int do_solve(const io::RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.params.validate();
  const io::Cache cache(cfg.cache_dir);
  const auto key = io::cache_key(cfg.params, cfg.shoot, GSLAB_VERSION);
  auto rec = make_record(cfg);
  std::optional<RadialProfile> profile;
  if (auto hit = cfg.use_cache ? cache.load(key) : std::nullopt; hit && hit->payload.contains("amplitude")) {
    rec.payload = hit->payload;
    rec.diagnostics = hit->diagnostics;
    rec.diagnostics["integrations"] = 0;
    rec.diagnostics["rhs_evaluations"] = 0;
    rec.diagnostics["cache_hit"] = true;
  } else {
    profile = find_ground_state(cfg.params, cfg.shoot);
    const auto sol = evaluate(*profile);
    rec.payload = io::solution_json(sol);
    const auto diag = io::solve_diagnostics_json(profile->diagnostics);
    for (const auto& [k, v] : diag.items()) rec.diagnostics[k] = v;
    rec.diagnostics["cache_hit"] = false;
    if (cfg.use_cache) {
      try {
        cache.store(key, rec);
      } catch (const std::exception& e) {
        err << "warning: cache store failed: " << e.what() << '\n';
      }
    }
  }
  rec.diagnostics["cache_key"] = io::Cache(cfg.cache_dir).path_for(key).filename().string();
  emit(cfg.output, io::serialize(rec), out);
  if (!cfg.plot_output.empty()) {
    if (!profile) profile = find_ground_state(cfg.params, cfg.shoot);
    std::ostringstream os;
    os.precision(17);
    os << "r,u,tail\n";
    const auto& g = profile->grid;
    for (std::size_t i = 0; i < g.size(); ++i)
      os << g.radii[i] << ',' << g.values[i] << ',' << profile->tail.value(g.radii[i]) << '\n';
    io::write_file(cfg.plot_output, os.str());
  }
  return 0;
}

SweepSpec sweep_spec(const io::RunConfig& cfg) {
  SweepSpec spec;
  spec.regime = cfg.regime;
  spec.N = cfg.params.N;
  spec.p = cfg.params.p;
  spec.q = cfg.params.q;
  spec.grid = cfg.grid;
  spec.shoot = cfg.shoot;
  spec.window = cfg.window;
  return spec;
}

void emit_report(const io::RunConfig& cfg, const ScalingReport& rep, io::ResultRecord rec, std::ostream& out) {
  rec.payload = io::report_json(rep);
  std::size_t ok = 0;
  for (const auto& pt : rep.grid) ok += pt.converged ? 1 : 0;
  rec.diagnostics["points"] = rep.grid.size();
  rec.diagnostics["converged"] = ok;
  emit(cfg.output, io::serialize(rec), out);
  if (!cfg.csv_output.empty()) io::write_file(cfg.csv_output, io::sweep_csv(rep));
  if (!cfg.plot_output.empty()) io::write_file(cfg.plot_output, io::plot_data(rep));
}

int do_sweep(const io::RunConfig& cfg, std::ostream& out) {
  const auto rep = sweep(sweep_spec(cfg), cfg.jobs);
  auto rec = make_record(cfg);
  rec.diagnostics["jobs"] = cfg.jobs;
  emit_report(cfg, rep, std::move(rec), out);
  return 0;
}

int do_fit(const io::RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw InvalidArgument("fit needs --input");
  const auto saved = io::parse(io::read_file(cfg.input));
  auto rep = io::report_from_json(saved.payload);
  refit(rep, cfg.window);
  emit_report(cfg, rep, make_record(cfg), out);
  return 0;
}

std::vector<SuiteCase> check_cases(const io::RunConfig& cfg, bool custom, bool family_given, bool eps_given) {
  if (!custom) return identity_suite();
  ProblemParams pp = cfg.params;
  if (!family_given) {
    const double ps = pp.p_star();
    if (eps_given) pp.family = Family::P_eps;
    else if (pp.p > ps) pp.family = Family::P_zero;
    else if (pp.p < ps) pp.family = Family::R_zero;
    else throw InvalidArgument("check at p = p* needs --eps");
    if (pp.family != Family::P_eps) pp.eps = 0.0;
  }
  pp.validate();
  std::ostringstream label;
  label << to_string(pp.family) << " N=" << pp.N << " p=" << pp.p << " q=" << pp.q << " eps=" << pp.eps;
  return {{label.str(), pp}};
}

int do_check(const io::RunConfig& cfg, bool custom, bool family_given, bool eps_given, std::ostream& out) {
  static const char* suites[] = {"all", "nehari", "pokhozhaev", "kappa", "limit", "constraint"};
  if (std::find(std::begin(suites), std::end(suites), cfg.suite) == std::end(suites))
    throw InvalidArgument("unknown suite '" + cfg.suite + "'");
  auto rec = make_record(cfg);
  Json cases = Json::array();
  bool all_ok = true;
  for (const auto& c : check_cases(cfg, custom, family_given, eps_given)) {
    const auto o = check_case(c, cfg.shoot);
    Json j;
    j["label"] = c.label;
    j["solved"] = o.solved;
    if (!o.solved) {
      j["error"] = o.error;
      all_ok = false;
    } else {
      const double worst = worst_residual(o, cfg.suite);
      j["amplitude"] = o.amplitude;
      j["nehari_residual"] = o.nehari;
      j["pokhozhaev_residual"] = o.pokhozhaev;
      j["kappa_residual_q"] = num_or_null(o.kappa_q);
      j["kappa_residual_p"] = num_or_null(o.kappa_p);
      j["limit_residual_first"] = num_or_null(o.limit_first);
      j["limit_residual_second"] = num_or_null(o.limit_second);
      j["constraint_residual"] = num_or_null(o.constraint);
      j["worst_residual"] = worst;
      const bool ok = worst < cfg.check_tolerance;
      j["pass"] = ok;
      all_ok = all_ok && ok;
    }
    cases.push_back(std::move(j));
  }
  rec.payload["suite"] = cfg.suite;
  rec.payload["tolerance"] = cfg.check_tolerance;
  rec.payload["cases"] = std::move(cases);
  rec.payload["pass"] = all_ok;
  emit(cfg.output, io::serialize(rec), out);
  return all_ok ? 0 : 1;
}

int do_emden(const io::RunConfig& cfg, std::ostream& out) {
  const int N = cfg.params.N;
  if (N < 3) throw InvalidArgument("emden needs N >= 3");
  const double ps = 2.0 * N / (N - 2.0);
  const auto routes = sobolev_routes(N);
  const double S = sobolev_constant(N);
  const EmdenFowlerProfile U{N, 1.0, EmdenFowlerProfile::Frame::U};
  double max_res = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
    max_res = std::max(max_res, std::abs(U.ode_residual(r)));
  }
  auto rec = make_record(cfg);
  auto& p = rec.payload;
  p["N"] = N;
  p["p_star"] = ps;
  p["S_star"] = S;
  p["S_star_dirichlet_route"] = routes.from_dirichlet;
  p["S_star_norm_route"] = routes.from_norm;
  p["Q_star"] = q_star(N);
  p["U1(0)"] = U.value(0.0);
  p["W1(0)"] = eval_W(N, 1.0, 0.0);
  p["U1_norm_pstar_pow"] = u_norm(N, 1.0, ps);
  p["W1_norm_pstar"] = std::pow(w_norm(N, 1.0, ps), 1.0 / ps);
  try {
    p["W1_L2_sq"] = w_norm(N, 1.0, 2.0);
  } catch (const DivergenceError&) {
    p["W1_L2_sq"] = nullptr;
  }
  p["U1_ode_residual_max"] = max_res;
  emit(cfg.output, io::serialize(rec), out);
  return 0;
}

void add_problem(CLI::App* sub, io::RunConfig& cfg, std::string& family) {
  sub->add_option("--N", cfg.params.N, "dimension")->capture_default_str();
  sub->add_option("--p", cfg.params.p, "lower exponent p")->capture_default_str();
  sub->add_option("--q", cfg.params.q, "upper exponent q")->capture_default_str();
  sub->add_option("--eps", cfg.params.eps, "epsilon")->capture_default_str();
  sub->add_option("--family", family, "P_eps, P_zero, R_zero or R_eps")
      ->check(CLI::IsMember({"P_eps", "P_zero", "R_zero", "R_eps"}))
      ->capture_default_str();
}

void add_tolerances(CLI::App* sub, io::RunConfig& cfg, double& r_max) {
  auto& s = cfg.shoot;
  sub->add_option("--amp-tol", s.amp_tol, "relative amplitude bracket width")->capture_default_str();
  sub->add_option("--rel-tol", s.step.rel_tol, "integrator relative tolerance")->capture_default_str();
  sub->add_option("--abs-tol", s.step.abs_tol, "integrator absolute tolerance")->capture_default_str();
  sub->add_option("--max-iterations", s.max_iterations, "bisection cap")->capture_default_str();
  sub->add_option("--r-max", r_max, "outer radius (default: per family)");
}

bool given(const CLI::App* app, const std::string& name) {
  const auto* opt = app->get_option_no_throw(name);
  return opt && opt->count() > 0;
}

}  // namespace

std::vector<SuiteCase> identity_suite() {
  const auto P = Family::P_eps;
  const auto c = [](int N, double p, double q, double eps, Family f) {
    std::ostringstream os;
    os << to_string(f) << " N=" << N << " p=" << p << " q=" << q << " eps=" << eps;
    return SuiteCase{os.str(), ProblemParams{N, p, q, eps, f}};
  };
  return {
      c(3, 4, 6, 1e-2, P),          c(3, 4, 6, 0, Family::R_zero), c(3, 4, 6, 1e-2, Family::R_eps),
      c(3, 6, 10, 1e-3, P),         c(3, 8, 12, 1e-3, P),          c(3, 8, 12, 0, Family::P_zero),
      c(4, 3, 5, 1e-2, P),          c(4, 4, 8, 1e-3, P),           c(4, 6, 9, 0, Family::P_zero),
      c(5, 3, 4, 1e-2, P),          c(5, 10.0 / 3.0, 6, 1e-3, P),  c(5, 4, 6, 1e-2, P),
      c(5, 4, 6, 0, Family::P_zero),
  };
}

CheckOutcome check_case(const SuiteCase& c, const ShootControls& ctrl) {
  CheckOutcome o;
  o.input = c;
  try {
    const auto& pp = c.params;
    const auto prof = find_ground_state(pp, ctrl);
    const auto sol = evaluate(prof);
    o.amplitude = prof.amplitude;
    o.nehari = sol.nehari_residual;
    o.pokhozhaev = sol.pokhozhaev_residual;
    const auto w = to_minimizer_frame(prof, sol.level_S);
    if (auto con = minimizer_constraint(w, pp)) o.constraint = *con - 1.0;
    if (pp.family == Family::P_eps && std::abs(pp.p - pp.p_star()) < 1e-12 * pp.p_star()) {
      const auto k = kappa_identities(w, pp);
      o.kappa_q = k.residual_q;
      o.kappa_p = k.residual_p;
    }
    if (pp.family == Family::P_zero || pp.family == Family::R_zero) {
      const auto l = limit_identities(w, pp);
      o.limit_first = l.first_residual;
      o.limit_second = l.second_residual;
    }
    o.solved = true;
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

double worst_residual(const CheckOutcome& o, const std::string& suite) {
  double w = 0.0;
  auto take = [&](const std::optional<double>& x) {
    if (x) w = std::max(w, std::abs(*x));
  };
  const bool all = suite == "all";
  if (all || suite == "nehari") take(o.nehari);
  if (all || suite == "pokhozhaev") take(o.pokhozhaev);
  if (all || suite == "kappa") {
    take(o.kappa_q);
    take(o.kappa_p);
  }
  if (all || suite == "limit") {
    take(o.limit_first);
    take(o.limit_second);
  }
  if (all || suite == "constraint") take(o.constraint);
  return w;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial ground states of the double-power scalar field equation"};
  app.set_version_flag("--version", GSLAB_VERSION);
  app.set_config("--config", "", "key = value file; [solve], [sweep], ... sections per command");
  app.require_subcommand(1);

  io::RunConfig cfg;
  cfg.cache_dir = io::default_cache_dir();
  std::string family = "P_eps", regime = "critical", cache_dir = cfg.cache_dir.string();
  double r_max = 0.0, x_min = 0.0, x_max = 0.0;
  bool no_cache = false, p_critical = false;

  auto* solve = app.add_subcommand("solve", "shoot one ground state and report its functionals");
  add_problem(solve, cfg, family);
  add_tolerances(solve, cfg, r_max);
  solve->add_option("-o,--output", cfg.output, "record file (default stdout)");
  solve->add_option("--emit-plot-data", cfg.plot_output, "write r,u,tail rows");
  solve->add_option("--cache-dir", cache_dir, "cache directory (env GSLAB_CACHE_DIR)");
  solve->add_flag("--no-cache", no_cache, "neither read nor write the cache");

  auto* sw = app.add_subcommand("sweep", "eps- or delta-sweep with exponent fits");
  sw->add_option("--regime", regime, "subcritical, critical, supercritical, delta-supercritical, p-up-subcritical")
      ->check(CLI::IsMember({"subcritical", "critical", "supercritical", "delta-supercritical", "p-up-subcritical"}))
      ->capture_default_str();
  sw->add_option("--N", cfg.params.N, "dimension")->capture_default_str();
  sw->add_option("--p", cfg.params.p, "lower exponent p")->capture_default_str();
  sw->add_option("--q", cfg.params.q, "upper exponent q")->capture_default_str();
  sw->add_flag("--p-critical", p_critical, "set p = 2N/(N-2)");
  sw->add_option("--start", cfg.grid.start, "largest sweep value")->capture_default_str();
  sw->add_option("--stop", cfg.grid.stop, "smallest sweep value")->capture_default_str();
  sw->add_option("--points", cfg.grid.points, "grid points")->capture_default_str();
  sw->add_option("--jobs", cfg.jobs, "worker threads (0: runtime default)")->capture_default_str();
  sw->add_option("--csv", cfg.csv_output, "write the grid as CSV");
  sw->add_option("-o,--output", cfg.output, "record file (default stdout)");
  sw->add_option("--emit-plot-data", cfg.plot_output, "write observable,x,y,fit rows");
  add_tolerances(sw, cfg, r_max);

  auto* fit = app.add_subcommand("fit", "re-fit a saved sweep record");
  fit->add_option("--input", cfg.input, "sweep record")->required();
  fit->add_option("--csv", cfg.csv_output, "write the grid as CSV");
  fit->add_option("-o,--output", cfg.output, "record file (default stdout)");
  fit->add_option("--emit-plot-data", cfg.plot_output, "write observable,x,y,fit rows");

  for (auto* sub : {sw, fit}) {
    sub->add_option("--drop-largest", cfg.window.drop_largest, "largest grid values left out of fits")
        ->capture_default_str();
    sub->add_option("--residual-max", cfg.window.residual_max, "identity residual cut for fit points")
        ->capture_default_str();
    sub->add_option("--x-min", x_min, "fit window lower bound");
    sub->add_option("--x-max", x_max, "fit window upper bound");
  }

  auto* check = app.add_subcommand("check", "identity suite; exits 1 on any residual breach");
  add_problem(check, cfg, family);
  add_tolerances(check, cfg, r_max);
  check->add_option("--suite", cfg.suite, "all, nehari, pokhozhaev, kappa, limit, constraint")->capture_default_str();
  check->add_option("--tolerance", cfg.check_tolerance, "largest accepted relative residual")->capture_default_str();
  check->add_option("-o,--output", cfg.output, "record file (default stdout)");

  auto* emden = app.add_subcommand("emden", "Sobolev constant, Q* and reference norms");
  emden->add_option("--N", cfg.params.N, "dimension")->capture_default_str();
  emden->add_option("-o,--output", cfg.output, "record file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << GSLAB_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  auto* active = app.get_subcommands().front();
  try {
    cfg.command = io::command_from_string(active->get_name());
    cfg.params.family = family_from_string(family);
    cfg.regime = regime_from_string(regime);
    cfg.cache_dir = cache_dir;
    cfg.use_cache = !no_cache;
    if (r_max > 0.0) cfg.shoot.r_max = r_max;
    if (given(active, "--x-min")) cfg.window.x_min = x_min;
    if (given(active, "--x-max")) cfg.window.x_max = x_max;
    if (cfg.command == io::Command::Sweep && (p_critical || cfg.regime == Regime::Critical)) {
      if (given(active, "--p") && std::abs(cfg.params.p - cfg.params.p_star()) > 1e-12)
        throw InvalidArgument("--p conflicts with the critical exponent");
      cfg.params.p = cfg.params.p_star();
    }
    cfg.validate();
    switch (cfg.command) {
      case io::Command::Solve:
        return do_solve(cfg, out, err);
      case io::Command::Sweep:
        return do_sweep(cfg, out);
      case io::Command::Fit:
        return do_fit(cfg, out);
      case io::Command::Check:
        return do_check(cfg, given(active, "--N") || given(active, "--p") || given(active, "--q"),
                        given(active, "--family"), given(active, "--eps"), out);
      case io::Command::Emden:
        return do_emden(cfg, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace gslab::cli
