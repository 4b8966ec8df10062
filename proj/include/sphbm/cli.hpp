#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace sphbm {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitConfigError = 64;
inline constexpr int kExitNumericalFailure = 65;

/// Everything a command needs. Field names double as the keys accepted in --config files.
struct RunConfig {
  std::string command;
  int grid_level = 3;
  std::string function = "builtin:constant";
  /// bm-scan: body arguments; every pair i < j is scanned. area-measure: the first entry.
  std::vector<std::string> bodies;
  /// bm-scan: optional JSON file holding [[body, body], ...].
  std::string bodies_file;
  /// Explicit t values, or a single step s meaning s, 2s, ... < 1.
  std::vector<double> t_grid = {0.25};
  std::string form = "min";
  bool case2 = false;
  std::string h = "builtin:constant";
  std::string phi = "builtin:linear";
  int k = 20;
  int samples = 20000;
  std::uint64_t seed = 7;
  std::string planar_k0;
  std::string planar_k1;
  std::string f2d = R"({"type":"constant","c":1})";
  std::string out_dir = "sphbm_out";
  std::string emit_witness;
  /// When set, the command's main JSON result is also written to this path.
  std::string out_file;
  bool scan_only = false;
  bool serial = false;

  nlohmann::json to_json() const;
  /// Strict: unknown keys and ill-typed values throw InvalidArgument.
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

/// Default grid level: SPHBM_GRID_LEVEL when set, else 3.
int default_grid_level();

/// Executes the command, writes its artifacts and a manifest under out_dir, returns the exit code.
int run(const RunConfig& config, std::ostream& log);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& data);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Body argument: builtin:<name>, a JSON file, or inline JSON.
nlohmann::json body_arg_json(const std::string& arg);

}  // namespace sphbm
