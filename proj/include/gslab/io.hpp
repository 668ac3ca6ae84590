#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gslab/asymptotics.hpp"
#include "gslab/functionals.hpp"
#include "gslab/params.hpp"
#include "gslab/shooting.hpp"

namespace gslab::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";
inline constexpr std::string_view kCsvHeader = "eps,amplitude,S,sigma,lambda,dist_D1,nehari_res,pokh_res,converged_flag";

enum class Command { Solve, Sweep, Fit, Check, Emden };

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

struct RunConfig {
  Command command = Command::Solve;
  ProblemParams params;
  Regime regime = Regime::Critical;
  GridSpec grid;
  FitWindow window;
  ShootControls shoot;
  std::string output;
  std::string csv_output;
  std::string plot_output;
  std::string input;
  std::string suite = "all";
  double check_tolerance = 1e-6;
  std::filesystem::path cache_dir;
  bool use_cache = true;
  int jobs = 0;

  /// Throws InvalidArgument on non-positive tolerances or a grid ratio
  /// outside (1, 4].
  void validate() const;
};

/// Echo of the settings that determine a run's payload.
Json config_json(const RunConfig& cfg);

struct ResultRecord {
  std::string schema_version{kSchemaVersion};
  std::string timestamp;
  Json config = Json::object();
  Json payload = Json::object();
  Json diagnostics = Json::object();
};

/// Indented JSON text. Non-applicable numbers are written as null;
/// throws InvalidArgument on any other non-finite number.
std::string serialize(const ResultRecord& rec);

/// Throws ParseError naming the first offending field.
ResultRecord parse(std::string_view text);

std::string utc_timestamp();

Json solution_json(const GroundStateSolution& sol);
Json solve_diagnostics_json(const SolveDiagnostics& d);

Json report_json(const ScalingReport& rep);
/// Grid points and metadata of a saved report; fits are recomputed by refit().
ScalingReport report_from_json(const Json& j);

/// One row per grid point, header kCsvHeader, "nan" for non-applicable cells.
std::string sweep_csv(const ScalingReport& rep);

/// "name,x,y,fit" rows for every fitted observable.
std::string plot_data(const ScalingReport& rep);

/// FNV-1a over family, N, p, q, ε, every shooting tolerance and the version tag.
std::uint64_t cache_key(const ProblemParams& params, const ShootControls& ctrl, std::string_view version);

/// $GSLAB_CACHE_DIR, else ./.gslab_cache.
std::filesystem::path default_cache_dir();

class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<ResultRecord> load(std::uint64_t key) const;
  void store(std::uint64_t key, const ResultRecord& rec) const;
  std::filesystem::path path_for(std::uint64_t key) const;

 private:
  std::filesystem::path dir_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace gslab::io
