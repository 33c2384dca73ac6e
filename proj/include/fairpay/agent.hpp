#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpay/arm.hpp"
#include "fairpay/core.hpp"
#include "fairpay/payment.hpp"
#include "fairpay/random.hpp"

namespace fairpay {

/// Thrown when an arm's Gram matrix cannot be inverted, which means the warm
/// start did not leave it full rank.
class SingularGramError : public std::runtime_error {
 public:
  explicit SingularGramError(ArmId arm)
      : std::runtime_error("Gram matrix of arm " + to_string(arm) + " is singular"), arm_(arm) {}
  [[nodiscard]] ArmId arm() const { return arm_; }

 private:
  ArmId arm_;
};

enum class Estimator { kOls, kRidge };

/// Smallest LDLT pivot accepted before a Gram matrix is declared singular.
inline constexpr double kMinPivot = 1e-12;

/// The myopic agent's sufficient statistics.
class AgentState {
 public:
  static AgentState classic(std::size_t k) {
    AgentState s;
    s.linear_ = false;
    s.counts_.assign(k, 0);
    s.sums_.assign(k, 0.0);
    return s;
  }

  /// Ridge mode starts every Gram matrix at lambda * I.
  static AgentState linear(std::size_t k, std::size_t d, Estimator estimator, double lambda = 0.0) {
    if (estimator == Estimator::kRidge && !(lambda > 0.0)) {
      throw std::invalid_argument("ridge regularization must be positive");
    }
    AgentState s;
    s.linear_ = true;
    s.estimator_ = estimator;
    s.lambda_ = estimator == Estimator::kRidge ? lambda : 0.0;
    s.counts_.assign(k, 0);
    s.sums_.assign(k, 0.0);
    const auto n = static_cast<Eigen::Index>(d);
    s.grams_.assign(k, Eigen::MatrixXd::Identity(n, n) * s.lambda_);
    s.moments_.assign(k, Eigen::VectorXd::Zero(n));
    return s;
  }

  [[nodiscard]] std::size_t arms() const { return counts_.size(); }
  [[nodiscard]] bool is_linear() const { return linear_; }
  [[nodiscard]] Estimator estimator() const { return estimator_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] std::size_t dimension() const {
    return grams_.empty() ? 0 : static_cast<std::size_t>(grams_.front().rows());
  }

  [[nodiscard]] std::size_t pulls(ArmId arm) const { return counts_.at(arm.index()); }
  [[nodiscard]] double reward_sum(ArmId arm) const { return sums_.at(arm.index()); }
  [[nodiscard]] const Eigen::MatrixXd& gram(ArmId arm) const { return grams_.at(arm.index()); }
  [[nodiscard]] const Eigen::VectorXd& moment(ArmId arm) const { return moments_.at(arm.index()); }

  /// (G + lambda I)^{-1} b for the arm; throws SingularGramError.
  [[nodiscard]] Eigen::VectorXd coefficients(ArmId arm) const {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram(arm));
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().cwiseAbs().minCoeff() < kMinPivot) {
      throw SingularGramError(arm);
    }
    return ldlt.solve(moment(arm));
  }

  /// Classic update: one more pull of `arm` with the given reward.
  void update(ArmId arm, double reward) {
    if (!std::isfinite(reward)) throw std::invalid_argument("reward must be finite");
    ++counts_.at(arm.index());
    sums_[arm.index()] += reward;
  }

  /// Linear update: rank-one Gram update and moment accumulation.
  void update(ArmId arm, const Context& x, double reward) {
    update(arm, reward);
    auto& g = grams_.at(arm.index());
    if (g.rows() != x.size()) throw std::invalid_argument("context dimension does not match agent");
    g.noalias() += x * x.transpose();
    moments_[arm.index()] += reward * x;
  }

 private:
  AgentState() = default;

  bool linear_ = false;
  Estimator estimator_ = Estimator::kOls;
  double lambda_ = 0.0;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
  std::vector<Eigen::MatrixXd> grams_;
  std::vector<Eigen::VectorXd> moments_;
};

inline double predicted_reward(const AgentState& state, ArmId arm) {
  if (state.is_linear()) throw std::invalid_argument("linear predictions need a context");
  const std::size_t n = state.pulls(arm);
  if (n == 0) throw std::logic_error("arm " + to_string(arm) + " has no observations");
  return state.reward_sum(arm) / static_cast<double>(n);
}

inline double predicted_reward(const AgentState& state, ArmId arm, const Context& x) {
  if (!state.is_linear()) return predicted_reward(state, arm);
  return state.coefficients(arm).dot(x);
}

/// Predicted reward of every arm; `contexts` is empty in the classic case.
inline std::vector<double> estimates(const AgentState& state, std::span<const Context> contexts = {}) {
  std::vector<double> out(state.arms());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto arm = ArmId::from_index(i);
    out[i] = state.is_linear() ? predicted_reward(state, arm, contexts[i]) : predicted_reward(state, arm);
  }
  return out;
}

/// Coefficient estimates for every arm (linear mode).
inline std::vector<Eigen::VectorXd> coefficient_estimates(const AgentState& state) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(state.arms());
  for (std::size_t i = 0; i < state.arms(); ++i) out.push_back(state.coefficients(ArmId::from_index(i)));
  return out;
}

namespace detail {

// Values this close are treated as exact ties. Payments are built from
// differences of estimates, so exact-arithmetic ties come back with rounding.
inline double tie_slack(std::span<const double> values) {
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return 1e-12 * scale;
}

}  // namespace detail

/// The agent's selection law for a fixed payment vector: maximize
/// estimate + payment, break ties toward the larger payment, then uniformly.
inline std::vector<double> choice_distribution(std::span<const double> mu_hat, const PaymentVector& p) {
  const std::size_t k = mu_hat.size();
  if (p.size() != k) throw std::invalid_argument("payment vector length does not match arm count");
  std::vector<double> value(k);
  for (std::size_t i = 0; i < k; ++i) value[i] = mu_hat[i] + p.at(i);
  const double best = *std::max_element(value.begin(), value.end());
  const double slack = detail::tie_slack(value);

  double best_payment = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (value[i] >= best - slack) best_payment = std::max(best_payment, p.at(i));
  }
  const double pay_slack = detail::tie_slack(p.values());

  std::vector<double> pi(k, 0.0);
  std::size_t winners = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (value[i] >= best - slack && p.at(i) >= best_payment - pay_slack) {
      pi[i] = 1.0;
      ++winners;
    }
  }
  for (double& q : pi) q /= static_cast<double>(winners);
  return pi;
}

/// Draws the agent's arm. The selection law is uniform on its support, so a
/// uniform index over the support is an exact sample.
inline ArmId choose(std::span<const double> mu_hat, const PaymentVector& p, RandomSource& rng) {
  const auto pi = choice_distribution(mu_hat, p);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] > 0.0) support.push_back(i);
  }
  if (support.size() == 1) return ArmId::from_index(support.front());
  return ArmId::from_index(support[rng.index(support.size())]);
}

/// One forced pre-play observation.
struct WarmStartPull {
  ArmId arm;
  std::optional<Context> context;
  double reward;
};

struct WarmStart {
  AgentState state;
  std::vector<WarmStartPull> pulls;
};

/// Makes every estimate well defined before play: one pull per arm in the
/// classic case, and one pull per unit-basis context per arm in the linear
/// case (so every Gram matrix is full rank).
inline WarmStart warm_start(Environment& env, Estimator estimator = Estimator::kOls, double lambda = 0.0) {
  const std::size_t k = env.arms();
  if (!env.linear()) {
    WarmStart ws{AgentState::classic(k), {}};
    for (std::size_t i = 0; i < k; ++i) {
      const auto arm = ArmId::from_index(i);
      const double r = env.pull(arm);
      ws.state.update(arm, r);
      ws.pulls.push_back({arm, std::nullopt, r});
    }
    return ws;
  }
  const auto& inst = std::get<LinearInstance>(env.instance());
  const std::size_t d = inst.dimension();
  WarmStart ws{AgentState::linear(k, d, estimator, lambda), {}};
  for (std::size_t i = 0; i < k; ++i) {
    const auto arm = ArmId::from_index(i);
    for (std::size_t m = 0; m < d; ++m) {
      Context x = Context::Unit(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
      const double r = env.pull(arm, &x);
      ws.state.update(arm, x, r);
      ws.pulls.push_back({arm, x, r});
    }
  }
  return ws;
}

}  // namespace fairpay
