#include "gslab/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "gslab/errors.hpp"

namespace gslab::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json num(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

double get_num(const Json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + key, "missing");
  if (it->is_null()) return kNaN;
  if (!it->is_number()) throw ParseError(where + key, "expected a number");
  return it->get<double>();
}

void check_finite(const Json& j, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, path.empty() ? k : path + "." + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], path + "[" + std::to_string(i) + "]");
  } else if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw InvalidArgument("non-finite number in field '" + path + "'");
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json fit_json(const std::optional<FitResult>& f) {
  if (!f) return nullptr;
  return Json{{"intercept", f->intercept}, {"exponent", f->exponent}, {"log_power", f->log_power},
              {"r2", f->r2},           {"rms_residual", f->rms_residual}, {"x_min", f->x_min},
              {"x_max", f->x_max},     {"points", f->points},       {"with_log", f->with_log}};
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Solve:
      return "solve";
    case Command::Sweep:
      return "sweep";
    case Command::Fit:
      return "fit";
    case Command::Check:
      return "check";
    case Command::Emden:
      return "emden";
  }
  return "?";
}

Command command_from_string(std::string_view s) {
  for (auto c : {Command::Solve, Command::Sweep, Command::Fit, Command::Check, Command::Emden})
    if (s == to_string(c)) return c;
  throw InvalidArgument("unknown command '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  const std::pair<const char*, double> tols[] = {
      {"amp_tol", shoot.amp_tol},           {"rel_tol", shoot.step.rel_tol},
      {"abs_tol", shoot.step.abs_tol},      {"min_step", shoot.step.min_step},
      {"event_tol", shoot.step.event_tol},  {"converge_rel", shoot.converge_rel},
      {"reliable_rel", shoot.reliable_rel}, {"residual_max", window.residual_max},
      {"check_tolerance", check_tolerance}, {"max_tail_mismatch", shoot.max_tail_mismatch},
  };
  for (const auto& [name, v] : tols)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
  if (shoot.r_max && !(*shoot.r_max > 0.0)) throw InvalidArgument("r_max must be positive");
  if (!(grid.start > 0.0) || !(grid.stop > 0.0)) throw InvalidArgument("grid bounds must be positive");
  if (grid.points < 2) throw InvalidArgument("grid needs at least 2 points");
  const double ratio = grid.ratio();
  if (!(ratio > 1.0) || ratio > 4.0) throw InvalidArgument("grid ratio must lie in (1, 4]");
  if (jobs < 0) throw InvalidArgument("jobs must be non-negative");
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["command"] = to_string(cfg.command);
  switch (cfg.command) {
    case Command::Solve:
    case Command::Check:
      j["family"] = to_string(cfg.params.family);
      j["N"] = cfg.params.N;
      j["p"] = cfg.params.p;
      j["q"] = cfg.params.q;
      j["eps"] = cfg.params.eps;
      if (cfg.command == Command::Check) {
        j["suite"] = cfg.suite;
        j["tolerance"] = cfg.check_tolerance;
      }
      break;
    case Command::Sweep:
      j["regime"] = to_string(cfg.regime);
      j["N"] = cfg.params.N;
      j["p"] = cfg.params.p;
      j["q"] = cfg.params.q;
      j["grid"] = {{"start", cfg.grid.start}, {"stop", cfg.grid.stop}, {"points", cfg.grid.points}};
      break;
    case Command::Fit:
      j["input"] = cfg.input;
      break;
    case Command::Emden:
      j["N"] = cfg.params.N;
      break;
  }
  if (cfg.command == Command::Sweep || cfg.command == Command::Fit) {
    j["window"] = {{"drop_largest", cfg.window.drop_largest},
                   {"residual_max", cfg.window.residual_max},
                   {"x_min", cfg.window.x_min ? Json(*cfg.window.x_min) : Json(nullptr)},
                   {"x_max", cfg.window.x_max ? Json(*cfg.window.x_max) : Json(nullptr)}};
  }
  if (cfg.command != Command::Emden && cfg.command != Command::Fit) {
    const auto& s = cfg.shoot;
    j["tolerances"] = {{"amp_tol", s.amp_tol},
                       {"rel_tol", s.step.rel_tol},
                       {"abs_tol", s.step.abs_tol},
                       {"min_step", s.step.min_step},
                       {"event_tol", s.step.event_tol},
                       {"converge_rel", s.converge_rel},
                       {"reliable_rel", s.reliable_rel},
                       {"max_tail_mismatch", s.max_tail_mismatch},
                       {"max_iterations", s.max_iterations},
                       {"r_max", s.r_max ? Json(*s.r_max) : Json(nullptr)}};
  }
  return j;
}

std::string serialize(const ResultRecord& rec) {
  Json j;
  j["schema_version"] = rec.schema_version;
  j["timestamp"] = rec.timestamp;
  j["config"] = rec.config;
  j["payload"] = rec.payload;
  j["diagnostics"] = rec.diagnostics;
  check_finite(j, "");
  return j.dump(2) + "\n";
}

ResultRecord parse(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!j.is_object()) throw ParseError("<document>", "expected an object");
  ResultRecord rec;
  auto field = [&](const char* key) -> const Json& {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(key, "missing");
    return *it;
  };
  const auto& ver = field("schema_version");
  if (!ver.is_string()) throw ParseError("schema_version", "expected a string");
  if (ver.get<std::string>() != kSchemaVersion)
    throw ParseError("schema_version", "unsupported version '" + ver.get<std::string>() + "'");
  rec.schema_version = ver.get<std::string>();
  const auto& ts = field("timestamp");
  if (!ts.is_string()) throw ParseError("timestamp", "expected a string");
  rec.timestamp = ts.get<std::string>();
  for (const char* key : {"config", "payload", "diagnostics"})
    if (!field(key).is_object()) throw ParseError(key, "expected an object");
  rec.config = field("config");
  rec.payload = field("payload");
  rec.diagnostics = field("diagnostics");
  for (const auto& [k, v] : j.items())
    if (k != "schema_version" && k != "timestamp" && k != "config" && k != "payload" && k != "diagnostics")
      throw ParseError(k, "unknown field");
  return rec;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json solution_json(const GroundStateSolution& sol) {
  const auto& u = sol.profile;
  Json j;
  if (u.params) {
    j["family"] = to_string(u.params->family);
    j["N"] = u.params->N;
    j["p"] = u.params->p;
    j["q"] = u.params->q;
    j["eps"] = u.params->eps;
  }
  j["amplitude"] = u.amplitude;
  j["level_S"] = num(sol.level_S);
  j["energy"] = num(sol.energy);
  j["norm_L2_sq"] = num(sol.norm_L2_sq);
  j["norm_Lp_p"] = num(sol.norm_Lp_p);
  j["norm_Lq_q"] = num(sol.norm_Lq_q);
  j["dirichlet_sq"] = num(sol.dirichlet_sq);
  j["nehari_residual"] = num(sol.nehari_residual);
  j["pokhozhaev_residual"] = num(sol.pokhozhaev_residual);
  j["tail"] = {{"kind", to_string(u.tail.kind)},
               {"rate_or_power", u.tail.rate_or_power},
               {"prefactor", u.tail.prefactor},
               {"match_radius", u.tail.match_radius}};
  j["grid_points"] = u.grid.size();
  j["outer_radius"] = u.outer_radius();
  return j;
}

Json solve_diagnostics_json(const SolveDiagnostics& d) {
  return Json{{"iterations", d.iterations},
              {"integrations", d.integrations},
              {"rhs_evaluations", d.rhs_evaluations},
              {"iteration_cap_hit", d.iteration_cap_hit},
              {"r_max", d.r_max},
              {"bracket_lo", d.bracket_lo},
              {"bracket_hi", d.bracket_hi},
              {"reliable_radius", d.reliable_radius},
              {"tail_slope_mismatch", d.tail_slope_mismatch},
              {"tail_residual_2x", d.tail_residual_2x}};
}

Json report_json(const ScalingReport& rep) {
  Json j;
  j["regime"] = to_string(rep.regime);
  j["N"] = rep.N;
  j["p"] = rep.p;
  j["q"] = rep.q;
  j["reference_amplitude"] = num(rep.reference_amplitude);
  j["reference_level"] = num(rep.reference_level);
  j["fitted_exponent"] = num(rep.fitted_exponent);
  j["fitted_log_power"] = num(rep.fitted_log_power);
  j["predicted_exponent"] = num(rep.predicted_exponent);
  j["predicted_log_power"] = num(rep.predicted_log_power);
  j["fit_r2"] = num(rep.fit_r2);
  j["window"] = {num(rep.window_min), num(rep.window_max)};
  Json fits = Json::array();
  for (const auto& f : rep.fits) {
    Json jf;
    jf["name"] = f.name;
    if (f.predicted)
      jf["predicted"] = {{"power", f.predicted->power},
                         {"log_power", f.predicted->log_power},
                         {"asserted", f.predicted->asserted}};
    else
      jf["predicted"] = nullptr;
    jf["pure"] = fit_json(f.pure);
    jf["with_log"] = fit_json(f.with_log);
    jf["tied_log"] = fit_json(f.tied_log);
    jf["error"] = f.error;
    fits.push_back(std::move(jf));
  }
  j["fits"] = std::move(fits);
  Json grid = Json::array();
  for (const auto& pt : rep.grid) {
    grid.push_back(Json{{"x", pt.x},
                        {"converged", pt.converged},
                        {"error", pt.error},
                        {"amplitude", num(pt.amplitude)},
                        {"S", num(pt.S)},
                        {"sigma", num(pt.sigma)},
                        {"lambda", num(pt.lambda)},
                        {"dist_D1", num(pt.dist_D1)},
                        {"dist_Lp", num(pt.dist_Lp)},
                        {"v_q_norm", num(pt.v_q_norm)},
                        {"v_L2_sq", num(pt.v_L2_sq)},
                        {"kappa_residual", num(pt.kappa_residual)},
                        {"important_residual", num(pt.important_residual)},
                        {"nehari_residual", num(pt.nehari_residual)},
                        {"pokhozhaev_residual", num(pt.pokhozhaev_residual)},
                        {"eps_L2", num(pt.eps_L2)},
                        {"amplitude_gap", num(pt.amplitude_gap)},
                        {"scaled_amplitude", num(pt.scaled_amplitude)},
                        {"scaled_gap", num(pt.scaled_gap)},
                        {"integrations", pt.integrations},
                        {"iterations", pt.iterations}});
  }
  j["grid"] = std::move(grid);
  return j;
}

ScalingReport report_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("report", "expected an object");
  ScalingReport rep;
  const auto reg = j.find("regime");
  if (reg == j.end() || !reg->is_string()) throw ParseError("report.regime", "missing or not a string");
  try {
    rep.regime = regime_from_string(reg->get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ParseError("report.regime", e.what());
  }
  const auto n = j.find("N");
  if (n == j.end() || !n->is_number_integer()) throw ParseError("report.N", "missing or not an integer");
  rep.N = n->get<int>();
  rep.p = get_num(j, "p", "report.");
  rep.q = get_num(j, "q", "report.");
  rep.reference_amplitude = get_num(j, "reference_amplitude", "report.");
  rep.reference_level = get_num(j, "reference_level", "report.");
  const auto grid = j.find("grid");
  if (grid == j.end() || !grid->is_array()) throw ParseError("report.grid", "missing or not an array");
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto& g = (*grid)[i];
    const std::string where = "report.grid[" + std::to_string(i) + "].";
    if (!g.is_object()) throw ParseError(where, "expected an object");
    SweepPoint pt;
    pt.x = get_num(g, "x", where);
    const auto c = g.find("converged");
    if (c == g.end() || !c->is_boolean()) throw ParseError(where + "converged", "missing or not a boolean");
    pt.converged = c->get<bool>();
    if (auto e = g.find("error"); e != g.end() && e->is_string()) pt.error = e->get<std::string>();
    pt.amplitude = get_num(g, "amplitude", where);
    pt.S = get_num(g, "S", where);
    pt.sigma = get_num(g, "sigma", where);
    pt.lambda = get_num(g, "lambda", where);
    pt.dist_D1 = get_num(g, "dist_D1", where);
    pt.dist_Lp = get_num(g, "dist_Lp", where);
    pt.v_q_norm = get_num(g, "v_q_norm", where);
    pt.v_L2_sq = get_num(g, "v_L2_sq", where);
    pt.kappa_residual = get_num(g, "kappa_residual", where);
    pt.important_residual = get_num(g, "important_residual", where);
    pt.nehari_residual = get_num(g, "nehari_residual", where);
    pt.pokhozhaev_residual = get_num(g, "pokhozhaev_residual", where);
    pt.eps_L2 = get_num(g, "eps_L2", where);
    pt.amplitude_gap = get_num(g, "amplitude_gap", where);
    pt.scaled_amplitude = get_num(g, "scaled_amplitude", where);
    pt.scaled_gap = get_num(g, "scaled_gap", where);
    pt.integrations = static_cast<std::size_t>(get_num(g, "integrations", where));
    pt.iterations = static_cast<std::size_t>(get_num(g, "iterations", where));
    rep.grid.push_back(std::move(pt));
  }
  return rep;
}

std::string sweep_csv(const ScalingReport& rep) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& pt : rep.grid) {
    os << fmt(pt.x) << ',' << fmt(pt.converged ? pt.amplitude : kNaN) << ',' << fmt(pt.converged ? pt.S : kNaN)
       << ',' << fmt(pt.sigma) << ',' << fmt(pt.lambda) << ',' << fmt(pt.dist_D1) << ','
       << fmt(pt.converged ? pt.nehari_residual : kNaN) << ',' << fmt(pt.converged ? pt.pokhozhaev_residual : kNaN)
       << ',' << (pt.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string plot_data(const ScalingReport& rep) {
  std::ostringstream os;
  os << "observable,x,y,fit\n";
  for (const auto& f : rep.fits) {
    const FitResult* best = f.with_log ? &*f.with_log : (f.pure ? &*f.pure : nullptr);
    if (!best) continue;
    double SweepPoint::*field = nullptr;
    if (f.name == "amplitude") field = &SweepPoint::amplitude;
    else if (f.name == "lambda") field = &SweepPoint::lambda;
    else if (f.name == "sigma") field = &SweepPoint::sigma;
    else if (f.name == "dist_D1") field = &SweepPoint::dist_D1;
    else if (f.name == "amplitude_gap") field = &SweepPoint::amplitude_gap;
    else if (f.name == "eps_L2") field = &SweepPoint::eps_L2;
    else if (f.name == "scaled_gap") field = &SweepPoint::scaled_gap;
    else continue;
    for (const auto& pt : rep.grid) {
      if (!pt.converged || pt.x < best->x_min || pt.x > best->x_max) continue;
      const double lx = std::log(pt.x);
      double ly = best->intercept + best->exponent * lx;
      if (best->with_log && pt.x < 1.0) ly += best->log_power * std::log(std::log(1.0 / pt.x));
      os << f.name << ',' << fmt(pt.x) << ',' << fmt(pt.*field) << ',' << fmt(std::exp(ly)) << '\n';
    }
  }
  return os.str();
}

std::uint64_t cache_key(const ProblemParams& params, const ShootControls& ctrl, std::string_view version) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s|%d|%a|%a|%a|%a|%a|%a|%a|%a|%a|%a|%a|%zu|%zu|%a|%s",
                std::string(to_string(params.family)).c_str(), params.N, params.p, params.q, params.eps,
                ctrl.amp_tol, ctrl.converge_rel, ctrl.reliable_rel, ctrl.step.rel_tol, ctrl.step.abs_tol,
                ctrl.step.min_step, ctrl.step.event_tol, ctrl.max_tail_mismatch, ctrl.max_iterations,
                ctrl.max_bracket_steps, ctrl.r_max.value_or(0.0), std::string(version).c_str());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* c = buf; *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("GSLAB_CACHE_DIR"); env && *env) return env;
  return ".gslab_cache";
}

std::filesystem::path Cache::path_for(std::uint64_t key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(key));
  return dir_ / name;
}

std::optional<ResultRecord> Cache::load(std::uint64_t key) const {
  const auto path = path_for(key);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  try {
    return parse(read_file(path));
  } catch (const Error&) {
    // A corrupt entry is a miss; it is overwritten by the next store.
    return std::nullopt;
  }
}

void Cache::store(std::uint64_t key, const ResultRecord& rec) const {
  std::filesystem::create_directories(dir_);
  const auto path = path_for(key);
  auto tmp = path;
  tmp += ".tmp";
  write_file(tmp, serialize(rec));
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidArgument("write to '" + path.string() + "' failed");
}

}  // namespace gslab::io
