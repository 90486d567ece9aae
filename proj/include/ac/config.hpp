#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ac/harness.hpp"

namespace ac {

/// Flat key-value config file with [section] headers. Values are numbers,
/// quoted or bare strings, booleans, or bracketed number arrays. Keys are
/// addressed as "section.key". Unknown keys fail validation by name.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key,
                                const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;  // key -> raw value text
};

/// Fully validated run configuration: every module precondition is checked
/// before any run starts.
struct RunConfig {
  RunSetup setup;          // scheme + space
  InitialCondition ic;
  double T = 1.0;
  std::string grid_kind = "uniform";  // uniform | random | adaptive
  std::vector<double> taus;           // ladder for converge/mbp/energy; taus[0] for simulate
  double tau_ref = 0.0;
  double r_max = 2.4;
  AdaptiveParams adaptive;
  bool benchmark = true;  // adaptive simulate runs the three-way comparison
  uint64_t seed = 1;
  std::string out_dir = "out";
  std::vector<double> snapshot_times;
  bool first_step_constraint = false;
  bool kappa_auto = true;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_kv(const KeyValueFile& kv);

  /// The documented defaults, serialized in config-file syntax.
  static std::string defaults_text();
};

}  // namespace ac
