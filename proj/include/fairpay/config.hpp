#pragma once

#include <yaml-cpp/yaml.h>

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairpay/harness.hpp"

namespace fairpay {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A settable run-config field: its name, help text, and how to parse it.
struct ConfigKey {
  std::string_view name;
  std::string_view help;
  void (*apply)(RunConfig&, const YAML::Node&);
};

namespace detail {

inline double as_real(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected a real number");
  return n.as<double>();
}

inline std::size_t as_count(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected a nonnegative integer");
  const long long v = n.as<long long>();
  if (v < 0) throw ConfigError("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline std::string as_word(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected a string");
  return n.as<std::string>();
}

inline bool as_flag(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected true or false");
  return n.as<bool>();
}

inline std::vector<double> as_reals(const YAML::Node& n) {
  if (!n.IsSequence()) throw ConfigError("expected a list of real numbers");
  std::vector<double> out;
  for (const auto& item : n) out.push_back(as_real(item));
  return out;
}

inline std::vector<std::size_t> as_counts(const YAML::Node& n) {
  if (!n.IsSequence()) throw ConfigError("expected a list of integers");
  std::vector<std::size_t> out;
  for (const auto& item : n) out.push_back(as_count(item));
  return out;
}

template <typename E>
E as_enum(const YAML::Node& n, const std::map<std::string, E>& names) {
  const std::string word = as_word(n);
  const auto it = names.find(word);
  if (it == names.end()) {
    std::string known;
    for (const auto& [k, v] : names) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown value '" + word + "' (expected one of: " + known + ")");
  }
  return it->second;
}

}  // namespace detail

inline const std::vector<ConfigKey>& config_keys() {
  using namespace detail;
  static const std::vector<ConfigKey> keys = {
      {"scheme", "zero | peaked_uniform | two_arm | play_all | fair_payments",
       [](RunConfig& c, const YAML::Node& n) {
         c.scheme = as_enum<SchemeKind>(n, {{"zero", SchemeKind::kZero},
                                            {"peaked_uniform", SchemeKind::kPeakedUniform},
                                            {"two_arm", SchemeKind::kTwoArm},
                                            {"play_all", SchemeKind::kPlayAll},
                                            {"fair_payments", SchemeKind::kFairPayments}});
       }},
      {"delta", "failure probability in (0,1)", [](RunConfig& c, const YAML::Node& n) { c.delta = as_real(n); }},
      {"lambda", "ridge regularizer", [](RunConfig& c, const YAML::Node& n) { c.lambda = as_real(n); }},
      {"m", "noise-scale bound of the ridge width", [](RunConfig& c, const YAML::Node& n) { c.noise_scale = as_real(n); }},
      {"width", "classic interval half-width: lemma | confidence_width",
       [](RunConfig& c, const YAML::Node& n) {
         c.width = as_enum<ClassicWidth>(n, {{"lemma", ClassicWidth::kLemmaHalfWidth},
                                             {"confidence_width", ClassicWidth::kConfidenceWidth}});
       }},
      {"instance", "classic | linear | one_hot | near_tie | equal_means | contextual_adversary",
       [](RunConfig& c, const YAML::Node& n) {
         c.instance = as_enum<InstanceKind>(n, {{"classic", InstanceKind::kClassic},
                                                {"linear", InstanceKind::kLinear},
                                                {"one_hot", InstanceKind::kOneHot},
                                                {"near_tie", InstanceKind::kNearTie},
                                                {"equal_means", InstanceKind::kEqualMeans},
                                                {"contextual_adversary", InstanceKind::kContextualAdversary}});
       }},
      {"arm_model", "classic reward law: bernoulli | point_mass | two_point",
       [](RunConfig& c, const YAML::Node& n) {
         c.arm_model = as_enum<ArmModelKind>(n, {{"bernoulli", ArmModelKind::kBernoulli},
                                                 {"point_mass", ArmModelKind::kPointMass},
                                                 {"two_point", ArmModelKind::kTwoPoint}});
       }},
      {"means", "classic arm means, e.g. [0.9, 0.1]", [](RunConfig& c, const YAML::Node& n) { c.means = as_reals(n); }},
      {"k", "arm count for generated families", [](RunConfig& c, const YAML::Node& n) { c.k = as_count(n); }},
      {"d", "context dimension", [](RunConfig& c, const YAML::Node& n) { c.d = as_count(n); }},
      {"c", "near-tie margin", [](RunConfig& c, const YAML::Node& n) { c.c = as_real(n); }},
      {"epsilon", "two-point / family noise spread", [](RunConfig& c, const YAML::Node& n) { c.epsilon = as_real(n); }},
      {"eta", "contextual adversary parameter", [](RunConfig& c, const YAML::Node& n) { c.eta = as_real(n); }},
      {"one_hot_arm", "rewarded arm of the one-hot instance (1-based)",
       [](RunConfig& c, const YAML::Node& n) { c.one_hot_arm = as_count(n); }},
      {"theta", "linear coefficients, k*d entries row-major", [](RunConfig& c, const YAML::Node& n) { c.theta = as_reals(n); }},
      {"noise_halfwidth", "linear uniform noise halfwidth",
       [](RunConfig& c, const YAML::Node& n) { c.noise_halfwidth = as_real(n); }},
      {"estimator", "linear agent estimator: auto | ols | ridge",
       [](RunConfig& c, const YAML::Node& n) {
         c.estimator = as_enum<EstimatorChoice>(
             n, {{"auto", EstimatorChoice::kAuto}, {"ols", EstimatorChoice::kOls}, {"ridge", EstimatorChoice::kRidge}});
       }},
      {"T", "horizon", [](RunConfig& c, const YAML::Node& n) { c.horizon = as_count(n); }},
      {"seed", "master seed", [](RunConfig& c, const YAML::Node& n) { c.seed = as_count(n); }},
      {"seeds", "number of seeds in a sweep", [](RunConfig& c, const YAML::Node& n) { c.seeds = as_count(n); }},
      {"horizons", "sweep horizons, e.g. [1000, 4000]", [](RunConfig& c, const YAML::Node& n) { c.horizons = as_counts(n); }},
      {"trials", "probe trial count", [](RunConfig& c, const YAML::Node& n) { c.trials = as_count(n); }},
      {"tol_p", "audit probability tolerance", [](RunConfig& c, const YAML::Node& n) { c.tolerance.probability = as_real(n); }},
      {"tol_f", "audit reward tolerance", [](RunConfig& c, const YAML::Node& n) { c.tolerance.value = as_real(n); }},
      {"count_warm_start", "count warm-start rounds as unfair rounds",
       [](RunConfig& c, const YAML::Node& n) { c.count_warm_start = as_flag(n); }},
      {"output", "output path", [](RunConfig& c, const YAML::Node& n) { c.output = as_word(n); }},
  };
  return keys;
}

/// Sets one field from a parsed YAML value. Unknown keys are errors.
inline void apply_setting(RunConfig& cfg, const std::string& key, const YAML::Node& value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      try {
        k.apply(cfg, value);
      } catch (const YAML::Exception& e) {
        throw ConfigError("key '" + key + "': " + e.msg);
      } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
      }
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

/// Same as above for a value given as text (command-line flags).
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& text) {
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("key '" + key + "': " + e.msg);
  }
  apply_setting(cfg, key, node);
}

/// Parses a flat YAML mapping of config keys.
inline RunConfig parse_config(const std::string& text, RunConfig cfg = {}) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.msg);
  }
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("config must be a flat key-value mapping");
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    if (entry.second.IsMap()) throw ConfigError("key '" + key + "': nested mappings are not allowed");
    apply_setting(cfg, key, entry.second);
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, std::move(cfg));
}

}  // namespace fairpay
