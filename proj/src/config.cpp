#include "ac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ac/errors.hpp"

namespace ac {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double parse_number(const std::string& key, const std::string& raw) {
  char* end = nullptr;
  const std::string v = strip_quotes(raw);
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError(key + ": expected a number, got '" + raw + "'");
  }
  return x;
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    kv.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

double KeyValueFile::get_number(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return parse_number(key, it->second);
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  const double x = get_number(key, fallback);
  return static_cast<int>(x);
}

uint64_t KeyValueFile::get_u64(const std::string& key, uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string v = strip_quotes(it->second);
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError(key + ": expected an unsigned integer, got '" + it->second + "'");
  }
  return x;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string v = strip_quotes(it->second);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return strip_quotes(it->second);
}

std::vector<double> KeyValueFile::get_array(const std::string& key,
                                            const std::vector<double>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::string v = trim(it->second);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw ConfigError(key + ": expected [a, b, ...], got '" + it->second + "'");
  }
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number(key, item));
  }
  return out;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_kv(KeyValueFile::parse_file(path));
}

RunConfig RunConfig::from_kv(const KeyValueFile& kv) {
  static const std::set<std::string> known = {
      "model.potential", "model.theta", "model.theta_c", "model.eps2", "model.kappa",
      "model.clamp_to_beta",
      "scheme.variant", "scheme.stabilizer", "scheme.ratio_policy", "scheme.delta",
      "scheme.eta",
      "space.L", "space.M",
      "time.T", "time.grid", "time.taus", "time.tau_ref", "time.r_max", "time.tau_min",
      "time.tau_max", "time.alpha", "time.first_step_constraint",
      "ic.kind", "ic.amplitude", "ic.lo", "ic.hi",
      "run.seed", "run.out", "run.snapshot_times", "run.benchmark",
  };
  for (const auto& [key, value] : kv.entries()) {
    if (!known.count(key)) throw ConfigError(key + ": unknown key");
    (void)value;
  }

  RunConfig rc;

  // model
  const std::string pot = kv.get_string("model.potential", "double-well");
  if (pot == "double-well") {
    rc.setup.scheme.potential = Potential::double_well();
  } else if (pot == "flory-huggins") {
    const double theta = kv.get_number("model.theta", 0.8);
    const double theta_c = kv.get_number("model.theta_c", 1.6);
    if (!(theta_c > theta && theta > 0.0)) {
      throw ConfigError("model.theta: flory-huggins requires theta_c > theta > 0");
    }
    rc.setup.scheme.potential = Potential::flory_huggins(theta, theta_c);
  } else {
    throw ConfigError("model.potential: expected double-well or flory-huggins");
  }
  rc.setup.scheme.eps2 = kv.get_number("model.eps2", 0.01);
  if (!(rc.setup.scheme.eps2 > 0.0)) throw ConfigError("model.eps2: must be positive");
  const std::string kappa = kv.get_string("model.kappa", "auto");
  if (kappa == "auto") {
    rc.kappa_auto = true;
    rc.setup.scheme.kappa = rc.setup.scheme.potential.kappa_default();
  } else {
    rc.kappa_auto = false;
    rc.setup.scheme.kappa = kv.get_number("model.kappa", 0.0);
    if (!(rc.setup.scheme.kappa >= 0.0)) throw ConfigError("model.kappa: must be >= 0");
  }
  rc.setup.scheme.clamp_to_beta = kv.get_bool("model.clamp_to_beta", false);

  // scheme
  const std::string variant = kv.get_string("scheme.variant", "sesav1");
  if (variant == "sesav1") {
    rc.setup.scheme.variant = SchemeVariant::Sesav1;
  } else if (variant == "sesav2") {
    rc.setup.scheme.variant = SchemeVariant::Sesav2;
  } else if (variant == "sesav3") {
    rc.setup.scheme.variant = SchemeVariant::Sesav3;
  } else {
    throw ConfigError("scheme.variant: expected sesav1, sesav2 or sesav3");
  }
  const std::string stab = kv.get_string("scheme.stabilizer", "hermite");
  if (stab == "hermite") {
    rc.setup.scheme.stabilizer.kind = AuxKind::HermiteCutoff;
  } else if (stab == "identity") {
    rc.setup.scheme.stabilizer.kind = AuxKind::Identity;
  } else {
    throw ConfigError("scheme.stabilizer: expected hermite or identity");
  }
  const std::string policy = kv.get_string("scheme.ratio_policy", "energy");
  if (policy == "energy") {
    rc.setup.scheme.ratio_policy.mode = RatioMode::Energy;
  } else if (policy == "mbp") {
    rc.setup.scheme.ratio_policy.mode = RatioMode::Mbp;
  } else if (policy == "permissive") {
    rc.setup.scheme.ratio_policy.mode = RatioMode::Permissive;
  } else {
    throw ConfigError("scheme.ratio_policy: expected energy, mbp or permissive");
  }
  const double delta = kv.get_number("scheme.delta", 1e-3);
  if (!(delta > 0.0 && delta < 4.864)) throw ConfigError("scheme.delta: must be in (0, 4.864)");
  rc.setup.scheme.ratio_policy.delta = delta;
  rc.setup.scheme.ratio_policy.r_max_energy = 4.864 - delta;

  // space
  rc.setup.space.L = kv.get_number("space.L", 1.0);
  rc.setup.space.M = kv.get_int("space.M", 128);
  if (!(rc.setup.space.L > 0.0)) throw ConfigError("space.L: must be positive");
  if (rc.setup.space.M < 2) throw ConfigError("space.M: must be >= 2");

  // time
  rc.T = kv.get_number("time.T", 1.0);
  if (!(rc.T > 0.0)) throw ConfigError("time.T: must be positive");
  rc.grid_kind = kv.get_string("time.grid", "uniform");
  if (rc.grid_kind != "uniform" && rc.grid_kind != "random" && rc.grid_kind != "adaptive") {
    throw ConfigError("time.grid: expected uniform, random or adaptive");
  }
  rc.taus = kv.get_array("time.taus", {});
  for (double tau : rc.taus) {
    if (!(tau > 0.0)) throw ConfigError("time.taus: entries must be positive");
  }
  rc.tau_ref = kv.get_number("time.tau_ref", 0.0);
  rc.r_max = kv.get_number("time.r_max", 2.4);
  if (!(rc.r_max > 1.0)) throw ConfigError("time.r_max: must exceed 1");
  rc.adaptive.tau_min = kv.get_number("time.tau_min", 0.04);
  rc.adaptive.tau_max = kv.get_number("time.tau_max", 0.4);
  rc.adaptive.alpha = kv.get_number("time.alpha", 1e8);
  rc.adaptive.r_max = rc.r_max;
  if (rc.grid_kind == "adaptive") {
    if (!(rc.adaptive.tau_min > 0.0 && rc.adaptive.tau_min <= rc.adaptive.tau_max)) {
      throw ConfigError("time.tau_min: need 0 < tau_min <= tau_max");
    }
    if (!(rc.adaptive.alpha >= 0.0)) throw ConfigError("time.alpha: must be >= 0");
  }
  rc.first_step_constraint = kv.get_bool("time.first_step_constraint", false);

  // initial condition
  const std::string ic = kv.get_string("ic.kind", "smooth-sine");
  if (ic == "smooth-sine") {
    rc.ic = InitialCondition::smooth_sine(kv.get_number("ic.amplitude", 0.1));
  } else if (ic == "random-uniform") {
    const double lo = kv.get_number("ic.lo", -0.8);
    const double hi = kv.get_number("ic.hi", 0.8);
    if (!(lo < hi)) throw ConfigError("ic.lo: need lo < hi");
    const double beta = rc.setup.scheme.potential.beta();
    if (lo < -beta || hi > beta) {
      throw ConfigError("ic.lo: random bounds must lie within [-beta, beta]");
    }
    rc.ic = InitialCondition::random_uniform(lo, hi, 0);  // seed bound below
  } else {
    throw ConfigError("ic.kind: expected smooth-sine or random-uniform");
  }
  const double amp = kv.get_number("ic.amplitude", 0.1);
  if (ic == "smooth-sine" && std::abs(amp) > rc.setup.scheme.potential.beta()) {
    throw ConfigError("ic.amplitude: must lie within [-beta, beta]");
  }

  // run
  rc.seed = kv.get_u64("run.seed", 1);
  rc.ic.seed = rc.seed;
  rc.out_dir = kv.get_string("run.out", "out");
  rc.snapshot_times = kv.get_array("run.snapshot_times", {});
  rc.benchmark = kv.get_bool("run.benchmark", true);

  // eta: auto = eta*(r_max_used); the trace diagnostic parameter
  const std::string eta = kv.get_string("scheme.eta", "auto");
  if (eta == "auto") {
    const double cap = rc.grid_kind == "uniform" ? 1.0 : rc.r_max;
    rc.setup.scheme.eta = eta_star(cap);
  } else {
    const double e = kv.get_number("scheme.eta", 0.5);
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("scheme.eta: must lie in (0,1)");
    rc.setup.scheme.eta = e;
  }

  return rc;
}

std::string RunConfig::defaults_text() {
  return R"([model]
potential = "double-well"   # double-well | flory-huggins
theta = 0.8                 # flory-huggins entropy coefficient
theta_c = 1.6               # flory-huggins critical coefficient
eps2 = 0.01                 # interface parameter eps^2
kappa = "auto"              # stabilization constant; auto = sup |f'| on [-beta, beta]
clamp_to_beta = false       # opt-in clamp of nonlinear evaluations (logarithmic potential)

[scheme]
variant = "sesav1"          # sesav1 | sesav2 | sesav3
stabilizer = "hermite"      # hermite | identity
ratio_policy = "energy"     # energy | mbp | permissive
delta = 0.001               # energy ratio bound is 4.864 - delta
eta = "auto"                # recombination diagnostic parameter; auto = 2 r^2/(1+r)^2

[space]
L = 1.0                     # domain edge length
M = 128                     # grid points per dimension

[time]
T = 1.0                     # horizon
grid = "uniform"            # uniform | random | adaptive
taus = []                   # stepsize ladder (converge/mbp/energy) or [tau] for simulate
tau_ref = 0.0               # reference stepsize for convergence studies
r_max = 2.4                 # ratio cap for random/adaptive grids
tau_min = 0.04              # adaptive controller floor
tau_max = 0.4               # adaptive controller ceiling
alpha = 1e8                 # adaptive controller energy weight
first_step_constraint = false  # shrink tau_1 to tau^(4/3) in convergence studies

[ic]
kind = "smooth-sine"        # smooth-sine | random-uniform
amplitude = 0.1             # smooth-sine amplitude
lo = -0.8                   # random-uniform bounds
hi = 0.8

[run]
seed = 1
out = "out"
snapshot_times = []         # times at which to dump CSV/PGM snapshots
benchmark = true            # adaptive simulate compares against both uniform runs
)";
}

}  // namespace ac
