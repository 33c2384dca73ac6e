#pragma once

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairpay/adversary.hpp"
#include "fairpay/agent.hpp"
#include "fairpay/audit.hpp"
#include "fairpay/confidence.hpp"
#include "fairpay/core.hpp"
#include "fairpay/payment.hpp"
#include "fairpay/random.hpp"
#include "fairpay/schemes.hpp"

namespace fairpay {

enum class SchemeKind { kZero, kPeakedUniform, kTwoArm, kPlayAll, kFairPayments };
enum class InstanceKind { kClassic, kLinear, kOneHot, kNearTie, kEqualMeans, kContextualAdversary };
enum class ArmModelKind { kPointMass, kBernoulli, kTwoPoint };
enum class EstimatorChoice { kAuto, kOls, kRidge };

inline const char* to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::kZero: return "zero";
    case SchemeKind::kPeakedUniform: return "peaked_uniform";
    case SchemeKind::kTwoArm: return "two_arm";
    case SchemeKind::kPlayAll: return "play_all";
    case SchemeKind::kFairPayments: return "fair_payments";
  }
  return "?";
}

inline const char* to_string(InstanceKind i) {
  switch (i) {
    case InstanceKind::kClassic: return "classic";
    case InstanceKind::kLinear: return "linear";
    case InstanceKind::kOneHot: return "one_hot";
    case InstanceKind::kNearTie: return "near_tie";
    case InstanceKind::kEqualMeans: return "equal_means";
    case InstanceKind::kContextualAdversary: return "contextual_adversary";
  }
  return "?";
}

/// Everything needed to reproduce one run (or a sweep of runs).
struct RunConfig {
  SchemeKind scheme = SchemeKind::kZero;
  double delta = 0.05;
  double lambda = 1.0;
  /// Noise-scale bound m of the ridge width.
  double noise_scale = 1.0;
  ClassicWidth width = ClassicWidth::kLemmaHalfWidth;

  InstanceKind instance = InstanceKind::kClassic;
  ArmModelKind arm_model = ArmModelKind::kBernoulli;
  std::vector<double> means;
  std::size_t k = 0;
  std::size_t d = 1;
  double c = 0.3;
  double epsilon = 0.05;
  double eta = 0.1;
  std::size_t one_hot_arm = 1;
  /// Linear coefficients, k rows of d entries, row-major.
  std::vector<double> theta;
  double noise_halfwidth = 0.1;
  EstimatorChoice estimator = EstimatorChoice::kAuto;

  std::size_t horizon = 1000;
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::vector<std::size_t> horizons;
  std::size_t trials = 100;

  AuditTolerance tolerance;
  bool count_warm_start = false;
  std::string output;
};

/// Arm count implied by the config.
inline std::size_t arm_count(const RunConfig& cfg) {
  if (cfg.instance == InstanceKind::kClassic && !cfg.means.empty()) return cfg.means.size();
  if (cfg.instance == InstanceKind::kLinear && cfg.k == 0 && cfg.d > 0) return cfg.theta.size() / cfg.d;
  return cfg.k;
}

inline void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) fail("delta must lie in (0,1)");
  if (cfg.horizon < 1) fail("T must be at least 1");
  if (cfg.seeds < 1) fail("seeds must be at least 1");
  const std::size_t k = arm_count(cfg);
  if (k < 2) fail("need at least two arms");
  if (cfg.scheme == SchemeKind::kTwoArm && k != 2) fail("two_arm scheme needs k = 2");
  if (cfg.instance == InstanceKind::kLinear) {
    if (cfg.d < 1) fail("d must be positive");
    if (cfg.theta.size() != k * cfg.d) fail("theta needs k*d entries");
  }
  if (cfg.instance == InstanceKind::kOneHot && (cfg.one_hot_arm < 1 || cfg.one_hot_arm > k)) {
    fail("one_hot_arm must lie in [1, k]");
  }
  if (cfg.instance == InstanceKind::kContextualAdversary && cfg.scheme == SchemeKind::kFairPayments) {
    fail("fair_payments reads contexts that the adaptive adversary only picks afterwards");
  }
  if (cfg.tolerance.probability < 0.0 || cfg.tolerance.value < 0.0) fail("tolerances must be nonnegative");
}

inline BanditInstance build_instance(const RunConfig& cfg) {
  validate(cfg);
  const std::size_t k = arm_count(cfg);
  switch (cfg.instance) {
    case InstanceKind::kClassic: {
      std::vector<RewardModel> models;
      for (double mu : cfg.means) {
        switch (cfg.arm_model) {
          case ArmModelKind::kPointMass: models.push_back(RewardModel::point_mass(mu)); break;
          case ArmModelKind::kBernoulli: models.push_back(RewardModel::bernoulli(mu)); break;
          case ArmModelKind::kTwoPoint: models.push_back(RewardModel::two_point(mu, cfg.epsilon)); break;
        }
      }
      return ClassicInstance(std::move(models));
    }
    case InstanceKind::kLinear: {
      std::vector<Eigen::VectorXd> theta;
      std::vector<RewardModel> noise;
      for (std::size_t i = 0; i < k; ++i) {
        Eigen::VectorXd row(static_cast<Eigen::Index>(cfg.d));
        for (std::size_t j = 0; j < cfg.d; ++j) row[static_cast<Eigen::Index>(j)] = cfg.theta[i * cfg.d + j];
        theta.push_back(std::move(row));
        noise.push_back(RewardModel::uniform_interval(0.5, cfg.noise_halfwidth));
      }
      return LinearInstance(std::move(theta), std::move(noise), IidContexts{});
    }
    case InstanceKind::kOneHot:
      return one_hot_instances(k).at(cfg.one_hot_arm - 1);
    case InstanceKind::kNearTie:
      return near_tie_instance(k, cfg.c, cfg.epsilon);
    case InstanceKind::kEqualMeans:
      return equal_means_instance(k, cfg.epsilon);
    case InstanceKind::kContextualAdversary:
      return contextual_adversary_instance(k, cfg.eta, cfg.epsilon);
  }
  throw std::logic_error("unknown instance kind");
}

/// One round of the trace, warm-start pulls included (t = 0).
struct TraceRow {
  std::size_t t = 0;
  std::string scheme;
  std::optional<ArmId> incentivized;
  ArmId chosen;
  PaymentVector payment;
  double reward = 0.0;
  std::vector<double> pi;
  std::vector<double> true_values;
  bool fair = true;
  double cost_expected = 0.0;
  double cost_realized = 0.0;
  double regret_increment = 0.0;
  std::optional<std::size_t> chain_size;
  std::optional<double> x_width;
  std::string mode;

  [[nodiscard]] bool warm_start() const { return mode == "warm_start"; }
};

struct RunResult {
  std::string scheme;
  std::string instance;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::vector<TraceRow> rows;

  std::size_t unfair_rounds = 0;  // g_observed
  double cost = 0.0;
  double expected_cost = 0.0;
  double regret = 0.0;
  std::size_t find_chained_calls = 0;
  std::vector<std::size_t> chain_anomalies;
  std::size_t clip_events = 0;
};

/// Thrown when a module fails mid-run; carries the round index.
class RunError : public std::runtime_error {
 public:
  RunError(std::size_t t, const std::string& what)
      : std::runtime_error("round " + std::to_string(t) + ": " + what), round_(t) {}
  [[nodiscard]] std::size_t round() const { return round_; }

 private:
  std::size_t round_;
};

namespace detail {

struct SchemeStep {
  PaymentDistribution dist;
  std::optional<std::size_t> chain_size;
  std::optional<double> width;
  std::string mode;
};

/// Binds one payment scheme's state to the round protocol.
class SchemeDriver {
 public:
  SchemeDriver(const RunConfig& cfg, std::size_t k, bool linear)
      : cfg_(cfg), k_(k), play_all_(k) {
    if (cfg.scheme == SchemeKind::kFairPayments && linear) {
      rule_ = LinearWidthRule{cfg.lambda, cfg.noise_scale};
    } else {
      rule_ = ClassicWidthRule{cfg.width};
    }
  }

  [[nodiscard]] bool full_information() const { return cfg_.scheme == SchemeKind::kFairPayments; }

  SchemeStep step(std::size_t t, const AgentState& agent, std::span<const Context> contexts,
                  const PublicHistory& history) {
    switch (cfg_.scheme) {
      case SchemeKind::kZero:
        return {zero_scheme_step(k_), std::nullopt, std::nullopt, "zero"};
      case SchemeKind::kPeakedUniform:
        return {peaked_uniform_step(k_), std::nullopt, std::nullopt, "peaked_uniform"};
      case SchemeKind::kTwoArm:
        return {two_arm_step(two_arm_, cfg_.delta, t, history.counts()), std::nullopt, std::nullopt,
                two_arm_.active ? "two_arm" : "two_arm_inactive"};
      case SchemeKind::kPlayAll:
        if (play_all_.mode == PlayAllState::Mode::kChainedFair) {
          auto dist = chained_fair_step(play_all_, cfg_.delta, t, history.counts());
          return {std::move(dist), play_all_.active.size(), play_all_.x, "chained_fair"};
        } else {
          auto dist = find_chained_step(play_all_);
          return {std::move(dist), play_all_.active.size(), play_all_.x, "find_chained"};
        }
      case SchemeKind::kFairPayments: {
        auto round = fair_payments_step(agent, cfg_.delta, t, rule_, contexts);
        return {std::move(round.payments), round.chain.size(), round.max_width, "fair_payments"};
      }
    }
    throw std::logic_error("unknown scheme");
  }

  void observe(std::size_t t, const PaymentDistribution::Outcome& realized, ArmId chosen) {
    switch (cfg_.scheme) {
      case SchemeKind::kTwoArm:
        two_arm_observe(two_arm_, realized.payments, chosen);
        break;
      case SchemeKind::kPlayAll:
        if (play_all_.mode == PlayAllState::Mode::kChainedFair) {
          playall_observe(play_all_, realized.target.value(), chosen);
        } else {
          find_chained_observe(play_all_, chosen, t);
        }
        break;
      default:
        break;
    }
  }

  [[nodiscard]] const PlayAllState& play_all() const { return play_all_; }

 private:
  RunConfig cfg_;
  std::size_t k_;
  WidthRule rule_;
  TwoArmState two_arm_;
  PlayAllState play_all_;
};

inline Estimator resolve_estimator(const RunConfig& cfg) {
  switch (cfg.estimator) {
    case EstimatorChoice::kOls: return Estimator::kOls;
    case EstimatorChoice::kRidge: return Estimator::kRidge;
    case EstimatorChoice::kAuto: break;
  }
  return cfg.scheme == SchemeKind::kFairPayments ? Estimator::kRidge : Estimator::kOls;
}

inline void tally(RunResult& result, const TraceRow& row, bool count_warm_start) {
  if (!row.fair && (count_warm_start || !row.warm_start())) ++result.unfair_rounds;
  result.cost += row.cost_realized;
  result.expected_cost += row.cost_expected;
  result.regret += row.regret_increment;
}

}  // namespace detail

/// Plays warm start then T rounds on the given instance:
/// scheme step, contexts, exact audit, payment draw, agent choice, reward,
/// agent update, scheme observe.
inline RunResult run(const BanditInstance& instance, const RunConfig& cfg) {
  validate(cfg);
  const std::size_t k = arms(instance);
  if (k != arm_count(cfg)) throw std::invalid_argument("instance arm count differs from config");
  const RandomSource master(cfg.seed);
  Environment env(instance, master);
  RandomSource agent_rng = stream(master, Stream::kAgent);
  RandomSource scheme_rng = stream(master, Stream::kScheme);
  const auto* linear = std::get_if<LinearInstance>(&instance);

  RunResult result;
  result.scheme = to_string(cfg.scheme);
  result.instance = to_string(cfg.instance);
  result.seed = cfg.seed;
  result.horizon = cfg.horizon;
  result.rows.reserve(cfg.horizon + k * (linear ? linear->dimension() : 1));

  const Estimator estimator = detail::resolve_estimator(cfg);
  WarmStart ws = warm_start(env, estimator, cfg.lambda);
  AgentState& agent = ws.state;
  PublicHistory history(k);

  for (const auto& pull : ws.pulls) {
    history.record_warm_start(pull.arm);
    TraceRow row;
    row.t = 0;
    row.scheme = result.scheme;
    row.chosen = pull.arm;
    row.payment = PaymentVector::zeros(k);
    row.reward = pull.reward;
    row.pi.assign(k, 0.0);
    row.pi[pull.arm.index()] = 1.0;
    if (pull.context) {
      row.true_values = env.true_values(Contexts(k, *pull.context));
    } else {
      row.true_values = env.true_values({});
    }
    const auto verdict = audit_round(row.pi, row.true_values, cfg.tolerance);
    row.fair = verdict.fair;
    row.regret_increment = regret_increment(row.pi, row.true_values);
    row.mode = "warm_start";
    detail::tally(result, row, cfg.count_warm_start);
    result.rows.push_back(std::move(row));
  }

  detail::SchemeDriver scheme(cfg, k, linear != nullptr);

  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    try {
      Contexts contexts;
      if (linear && !linear->adaptive()) contexts = env.draw_contexts(t);

      auto step = scheme.step(t, agent, contexts, history);

      if (linear && linear->adaptive()) {
        const auto theta_hat = coefficient_estimates(agent);
        const auto& adversary = std::get<AdaptiveContexts>(linear->contexts()).adversary;
        contexts = adversary->contexts(PublishedRound{t, step.dist, theta_hat});
      }
      if (linear) linear->check_contexts(contexts);

      const auto mu_hat = estimates(agent, contexts);
      TraceRow row;
      row.t = t;
      row.scheme = result.scheme;
      row.true_values = env.true_values(contexts);
      row.pi = selection_distribution(step.dist, mu_hat);
      const auto verdict = audit_round(row.pi, row.true_values, cfg.tolerance);
      row.fair = verdict.fair;
      row.regret_increment = regret_increment(row.pi, row.true_values);

      const auto& outcome = step.dist.support()[step.dist.sample_index(scheme_rng)];
      const ArmId chosen = choose(mu_hat, outcome.payments, agent_rng);
      const double reward = linear ? env.pull(chosen, &contexts[chosen.index()]) : env.pull(chosen);
      if (linear) {
        agent.update(chosen, contexts[chosen.index()], reward);
      } else {
        agent.update(chosen, reward);
      }
      scheme.observe(t, outcome, chosen);
      history.record(outcome.payments, chosen);

      const auto cost = cost_accounting(step.dist, mu_hat, outcome.payments, chosen);
      row.cost_expected = cost.expected;
      row.cost_realized = cost.realized;
      row.incentivized = outcome.target;
      row.chosen = chosen;
      row.payment = outcome.payments;
      row.reward = reward;
      row.chain_size = step.chain_size;
      row.x_width = step.width;
      row.mode = step.mode;
      detail::tally(result, row, cfg.count_warm_start);
      result.rows.push_back(std::move(row));
    } catch (const RunError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(t, e.what());
    }
  }

  result.find_chained_calls = scheme.play_all().find_chained_calls;
  result.chain_anomalies = scheme.play_all().anomalies;
  result.clip_events = env.clip_events();
  return result;
}

inline RunResult run(const RunConfig& cfg) { return run(build_instance(cfg), cfg); }

// ---------------------------------------------------------------------------
// Trace files

inline constexpr const char* kTraceHeader =
    "t,scheme,incentivized,chosen,payment_realized,reward,fair,cost_exp,cost_real,regret_inc,chain_size,x_width,mode";

inline std::string format_real(double v) { return fmt::format("{:.12g}", v); }

inline std::string format_payment(const PaymentVector& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ';';
    out += format_real(p.at(i));
  }
  return out;
}

inline void write_trace(const RunResult& result, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.t << ',' << r.scheme << ',' << (r.incentivized ? std::to_string(r.incentivized->label()) : "")
        << ',' << r.chosen.label() << ',' << format_payment(r.payment) << ',' << format_real(r.reward) << ','
        << (r.fair ? 1 : 0) << ',' << format_real(r.cost_expected) << ',' << format_real(r.cost_realized) << ','
        << format_real(r.regret_increment) << ',' << (r.chain_size ? std::to_string(*r.chain_size) : "") << ','
        << (r.x_width ? format_real(*r.x_width) : "") << ',' << r.mode << '\n';
  }
}

inline void write_trace(const RunResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  write_trace(result, out);
  if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

/// A trace row as read back from CSV.
struct TraceRecord {
  std::size_t t = 0;
  std::string scheme;
  std::optional<std::size_t> incentivized;
  std::size_t chosen = 0;
  std::vector<double> payment;
  double reward = 0.0;
  bool fair = true;
  double cost_expected = 0.0;
  double cost_realized = 0.0;
  double regret_increment = 0.0;
  std::optional<std::size_t> chain_size;
  std::optional<double> x_width;
  std::string mode;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

inline std::size_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline std::vector<TraceRecord> read_trace(std::istream& in, const std::string& name = "<stream>") {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error(name + ": missing or unexpected trace header");
  }
  std::vector<TraceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto f = detail::split(line, ',');
      if (f.size() != 13) throw std::invalid_argument("expected 13 fields");
      TraceRecord r;
      r.t = detail::parse_count(f[0]);
      r.scheme = f[1];
      if (!f[2].empty()) r.incentivized = detail::parse_count(f[2]);
      r.chosen = detail::parse_count(f[3]);
      for (const auto& v : detail::split(f[4], ';')) r.payment.push_back(detail::parse_real(v));
      r.reward = detail::parse_real(f[5]);
      r.fair = f[6] == "1";
      if (f[6] != "0" && f[6] != "1") throw std::invalid_argument("fair flag must be 0 or 1");
      r.cost_expected = detail::parse_real(f[7]);
      r.cost_realized = detail::parse_real(f[8]);
      r.regret_increment = detail::parse_real(f[9]);
      if (!f[10].empty()) r.chain_size = detail::parse_count(f[10]);
      if (!f[11].empty()) r.x_width = detail::parse_real(f[11]);
      r.mode = f[12];
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

inline std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace(in, path);
}

/// Totals recomputed from a saved trace.
struct ReplaySummary {
  std::size_t rows = 0;
  std::size_t warm_start_rows = 0;
  std::size_t unfair_rounds = 0;
  double cost = 0.0;
  double expected_cost = 0.0;
  double regret = 0.0;
  /// Rows whose realized cost differs from the payment on the chosen arm.
  std::vector<std::size_t> conservation_violations;
};

inline ReplaySummary audit_replay(const std::vector<TraceRecord>& records, bool count_warm_start = false) {
  ReplaySummary s;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    ++s.rows;
    const bool warm = r.mode == "warm_start";
    if (warm) ++s.warm_start_rows;
    if (!r.fair && (count_warm_start || !warm)) ++s.unfair_rounds;
    s.cost += r.cost_realized;
    s.expected_cost += r.cost_expected;
    s.regret += r.regret_increment;
    if (r.chosen < 1 || r.chosen > r.payment.size() || r.payment[r.chosen - 1] != r.cost_realized) {
      s.conservation_violations.push_back(i);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepEntry {
  std::size_t horizon;
  std::uint64_t seed;
  double cost;
  double expected_cost;
  double regret;
  std::size_t unfair_rounds;
  std::size_t find_chained_calls;
};

struct SweepAggregate {
  std::size_t horizon;
  double median_cost;
  double cost_q1;
  double cost_q3;
  double median_regret;
  double median_unfair;
};

/// Linear-interpolation quantile of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

/// Runs every (horizon, seed) pair; seeds are cfg.seed, cfg.seed + 1, ...
inline std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::vector<std::size_t>& horizons,
                                     std::size_t seeds) {
  const BanditInstance instance = build_instance(cfg);
  std::vector<SweepEntry> out;
  for (const std::size_t horizon : horizons) {
    for (std::size_t s = 0; s < seeds; ++s) {
      RunConfig c = cfg;
      c.horizon = horizon;
      c.seed = cfg.seed + s;
      const auto r = run(instance, c);
      out.push_back({horizon, c.seed, r.cost, r.expected_cost, r.regret, r.unfair_rounds, r.find_chained_calls});
    }
  }
  return out;
}

inline std::vector<SweepAggregate> aggregate(const std::vector<SweepEntry>& entries) {
  std::vector<std::size_t> horizons;
  for (const auto& e : entries) {
    if (std::find(horizons.begin(), horizons.end(), e.horizon) == horizons.end()) horizons.push_back(e.horizon);
  }
  std::sort(horizons.begin(), horizons.end());
  std::vector<SweepAggregate> out;
  for (const auto h : horizons) {
    std::vector<double> cost, regret, unfair;
    for (const auto& e : entries) {
      if (e.horizon != h) continue;
      cost.push_back(e.cost);
      regret.push_back(e.regret);
      unfair.push_back(static_cast<double>(e.unfair_rounds));
    }
    out.push_back({h, median(cost), quantile(cost, 0.25), quantile(cost, 0.75), median(regret), median(unfair)});
  }
  return out;
}

inline void write_sweep(const std::vector<SweepEntry>& entries, std::ostream& out) {
  out << "T,seed,cost,cost_exp,regret,unfair,find_chained_calls\n";
  for (const auto& e : entries) {
    out << e.horizon << ',' << e.seed << ',' << format_real(e.cost) << ',' << format_real(e.expected_cost) << ','
        << format_real(e.regret) << ',' << e.unfair_rounds << ',' << e.find_chained_calls << '\n';
  }
}

/// Plot-ready aggregate table.
inline void write_aggregate(const std::vector<SweepAggregate>& rows, std::ostream& out) {
  out << "T,median_cost,cost_q1,cost_q3,median_regret,median_unfair\n";
  for (const auto& a : rows) {
    out << a.horizon << ',' << format_real(a.median_cost) << ',' << format_real(a.cost_q1) << ','
        << format_real(a.cost_q3) << ',' << format_real(a.median_regret) << ',' << format_real(a.median_unfair)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Unfairness probe

struct ProbeResult {
  std::size_t trials = 0;
  std::size_t unfair_runs = 0;
  double unfair_fraction = 0.0;
  double mean_cost = 0.0;
  double mean_regret = 0.0;
  /// Mean regret per main round (warm start excluded).
  double mean_round_regret = 0.0;
};

/// Runs `trials` independent seeded runs of the configured scheme and
/// instance family and reports how often at least one round was unfair.
inline ProbeResult unfairness_probe(const RunConfig& cfg, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("probe needs at least one trial");
  const BanditInstance instance = build_instance(cfg);
  ProbeResult out;
  out.trials = trials;
  double round_regret = 0.0;
  for (std::size_t s = 0; s < trials; ++s) {
    RunConfig c = cfg;
    c.seed = cfg.seed + s;
    const auto r = run(instance, c);
    if (r.unfair_rounds > 0) ++out.unfair_runs;
    out.mean_cost += r.cost;
    out.mean_regret += r.regret;
    double main_regret = 0.0;
    for (const auto& row : r.rows) {
      if (!row.warm_start()) main_regret += row.regret_increment;
    }
    round_regret += main_regret / static_cast<double>(c.horizon);
  }
  const auto n = static_cast<double>(trials);
  out.unfair_fraction = static_cast<double>(out.unfair_runs) / n;
  out.mean_cost /= n;
  out.mean_regret /= n;
  out.mean_round_regret = round_regret / n;
  return out;
}

}  // namespace fairpay
