#include "slsito/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "slsito/csv.hpp"
#include "slsito/error.hpp"

namespace slsito::harness {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::Simulate, "simulate"},   {ExperimentKind::LocalTime, "localtime"},
    {ExperimentKind::Isometry, "isometry"},   {ExperimentKind::Parts, "parts"},
    {ExperimentKind::ItoSmooth, "ito-smooth"}, {ExperimentKind::Ito2D, "ito-2d"},
    {ExperimentKind::ItoSplit, "ito-split"},   {ExperimentKind::Corollary, "corollary"},
    {ExperimentKind::Ito1D, "ito-1d"},         {ExperimentKind::Curve1D, "curve-1d"},
    {ExperimentKind::Convergence, "convergence"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value) {
  throw ConfigurationError("invalid value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) bad(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad(key, v);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v);
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

bool is_surface_kind(ExperimentKind k) {
  return k == ExperimentKind::LocalTime || k == ExperimentKind::Simulate;
}

}  // namespace

const char* kind_name(ExperimentKind k) noexcept {
  for (const auto& kn : kKinds) {
    if (kn.kind == k) return kn.name;
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& kn : kKinds) {
    if (name == kn.name) return kn.kind;
  }
  throw ConfigurationError("unknown experiment kind: " + name);
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "kind",     "target",  "function",    "coordinate",      "estimator",     "seed",     "paths",
      "steps",    "horizon", "eps_scale",   "level_count",     "spacings",      "x1_start", "x2_start",
      "mu1",      "mu2",     "sigma1",      "sigma2",          "rho",           "threads",  "z_threshold",
      "decay_threshold",     "max_exclusion", "out"};
  return k;
}

void ExperimentConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "kind") {
    kind = parse_kind(v);
  } else if (key == "target") {
    target = parse_kind(v);
  } else if (key == "function") {
    if (v.empty()) bad(key, v);
    function = v;
  } else if (key == "coordinate") {
    if (v == "x1" || v == "1") {
      coordinate = sim::Coord::X1;
    } else if (v == "x2" || v == "2") {
      coordinate = sim::Coord::X2;
    } else {
      bad(key, v);
    }
  } else if (key == "estimator") {
    if (v != "occupation" && v != "tanaka") bad(key, v);
    estimator = v;
  } else if (key == "seed") {
    seed = parse_u64(key, v);
  } else if (key == "paths") {
    paths = parse_u64(key, v);
  } else if (key == "steps") {
    std::vector<std::size_t> s;
    for (const auto& item : split_list(v)) s.push_back(parse_u64(key, item));
    steps = std::move(s);
  } else if (key == "horizon") {
    horizon = parse_double(key, v);
  } else if (key == "eps_scale") {
    eps_scale = parse_double(key, v);
  } else if (key == "level_count") {
    level_count = parse_u64(key, v);
  } else if (key == "spacings") {
    std::vector<double> s;
    for (const auto& item : split_list(v)) s.push_back(parse_double(key, item));
    spacings = std::move(s);
  } else if (key == "x1_start") {
    diffusion.start[0] = parse_double(key, v);
  } else if (key == "x2_start") {
    diffusion.start[1] = parse_double(key, v);
  } else if (key == "mu1") {
    diffusion.drift[0] = parse_double(key, v);
  } else if (key == "mu2") {
    diffusion.drift[1] = parse_double(key, v);
  } else if (key == "sigma1") {
    diffusion.vol[0] = parse_double(key, v);
  } else if (key == "sigma2") {
    diffusion.vol[1] = parse_double(key, v);
  } else if (key == "rho") {
    diffusion.correlation = parse_double(key, v);
  } else if (key == "threads") {
    threads = parse_u64(key, v);
  } else if (key == "z_threshold") {
    z_threshold = parse_double(key, v);
  } else if (key == "decay_threshold") {
    decay_threshold = parse_double(key, v);
  } else if (key == "max_exclusion") {
    max_exclusion = parse_double(key, v);
  } else if (key == "out") {
    out_dir = v;
  } else {
    throw ConfigurationError("unknown configuration key: " + key);
  }
}

std::string ExperimentConfig::get(const std::string& key) const {
  if (key == "kind") return kind_name(kind);
  if (key == "target") return kind_name(target);
  if (key == "function") return function;
  if (key == "coordinate") return coordinate == sim::Coord::X1 ? "x1" : "x2";
  if (key == "estimator") return estimator;
  if (key == "seed") return std::to_string(seed);
  if (key == "paths") return std::to_string(resolved_paths());
  if (key == "steps") return join(steps, [](std::size_t s) { return std::to_string(s); });
  if (key == "horizon") return csv::number(horizon);
  if (key == "eps_scale") return csv::number(eps_scale);
  if (key == "level_count") return std::to_string(level_count);
  if (key == "spacings") return join(spacings, [](double s) { return csv::number(s); });
  if (key == "x1_start") return csv::number(diffusion.start[0]);
  if (key == "x2_start") return csv::number(diffusion.start[1]);
  if (key == "mu1") return csv::number(diffusion.drift[0]);
  if (key == "mu2") return csv::number(diffusion.drift[1]);
  if (key == "sigma1") return csv::number(diffusion.vol[0]);
  if (key == "sigma2") return csv::number(diffusion.vol[1]);
  if (key == "rho") return csv::number(diffusion.correlation);
  if (key == "threads") return std::to_string(threads);
  if (key == "z_threshold") return csv::number(z_threshold);
  if (key == "decay_threshold") return csv::number(resolved_decay_threshold());
  if (key == "max_exclusion") return csv::number(max_exclusion);
  if (key == "out") return out_dir;
  throw ConfigurationError("unknown configuration key: " + key);
}

void ExperimentConfig::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("line " + std::to_string(lineno) + ": expected key=value");
    }
    set(t.substr(0, eq), t.substr(eq + 1));
  }
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file " + path);
  load(in);
}

std::string ExperimentConfig::dump() const {
  std::string out;
  for (const auto& k : keys()) out += k + "=" + get(k) + "\n";
  return out;
}

std::size_t ExperimentConfig::resolved_paths() const {
  if (paths != 0) return paths;
  const ExperimentKind k = kind == ExperimentKind::Convergence ? target : kind;
  return is_surface_kind(k) ? 1000 : 10000;
}

double ExperimentConfig::resolved_decay_threshold() const {
  if (decay_threshold > 0.0) return decay_threshold;
  const bool kink = function == "MOVING_KINK" || function == "RAMP_CURVE" || function == "ABS_CURVE";
  return kink ? 1.1 : 1.3;
}

std::size_t ExperimentConfig::level_total() const {
  const ExperimentKind k = kind == ExperimentKind::Convergence ? target : kind;
  return k == ExperimentKind::Parts ? spacings.size() : steps.size();
}

void ExperimentConfig::validate() const {
  if (target == ExperimentKind::Convergence) throw ConfigurationError("target cannot be convergence");
  if (steps.empty()) throw ConfigurationError("steps: at least one refinement level required");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] == 0) throw ConfigurationError("steps: levels must be positive");
    if (i > 0 && steps[i] <= steps[i - 1]) throw ConfigurationError("steps: levels must be strictly increasing");
  }
  if (spacings.empty()) throw ConfigurationError("spacings: at least one level required");
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    if (!(spacings[i] > 0.0)) throw ConfigurationError("spacings: values must be positive");
    if (i > 0 && spacings[i] >= spacings[i - 1]) throw ConfigurationError("spacings: values must decrease");
  }
  if (resolved_paths() < 2) throw ConfigurationError("paths: ensemble needs at least two paths");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigurationError("horizon must be positive");
  if (!(eps_scale > 0.0) || !std::isfinite(eps_scale)) throw ConfigurationError("eps_scale must be positive");
  if (level_count < 2) throw ConfigurationError("level_count must be at least 2");
  if (!(max_exclusion >= 0.0 && max_exclusion <= 1.0)) throw ConfigurationError("max_exclusion must be in [0,1]");
  try {
    diffusion.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigurationError(e.what());
  }
}

}  // namespace slsito::harness
