#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fairpay/agent.hpp"
#include "fairpay/arm.hpp"
#include "fairpay/union_find.hpp"

namespace fairpay {

namespace detail {

inline double log_term(double delta, std::size_t t) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double scaled = std::numbers::pi * (static_cast<double>(t) + 1.0);
  return std::log(scaled * scaled / (3.0 * delta));
}

}  // namespace detail

/// 2 sqrt(ln((pi (t+1))^2 / (3 delta)) / n)
inline double confidence_width(double delta, std::size_t t, std::size_t n) {
  if (n == 0) throw std::invalid_argument("confidence width is undefined for an unpulled arm");
  return 2.0 * std::sqrt(detail::log_term(delta, t) / static_cast<double>(n));
}

/// Hoeffding half-width sqrt(ln((pi (t+1))^2 / (3 delta)) / (2n)); equals
/// confidence_width / (2 sqrt 2).
inline double lemma_half_width(double delta, std::size_t t, std::size_t n) {
  if (n == 0) throw std::invalid_argument("confidence width is undefined for an unpulled arm");
  return std::sqrt(detail::log_term(delta, t) / (2.0 * static_cast<double>(n)));
}

/// Self-normalized ridge width
///   ||x||_{G^{-1}} (m sqrt(d ln((1 + t/lambda) / delta)) + sqrt(lambda)),
/// where `gram` already contains lambda I.
inline double linear_width(double delta, std::size_t t, double lambda, double noise_scale, std::size_t d,
                           const Eigen::MatrixXd& gram, const Eigen::VectorXd& x) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("ridge width needs lambda > 0");
  if (t < 1) throw std::invalid_argument("ridge width needs t >= 1");
  if (gram.rows() != x.size() || gram.cols() != x.size()) {
    throw std::invalid_argument("gram and context dimensions differ");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("gram matrix is not positive definite");
  }
  const double norm = std::sqrt(std::max(0.0, x.dot(llt.solve(x))));
  const double radius =
      noise_scale * std::sqrt(static_cast<double>(d) * std::log((1.0 + static_cast<double>(t) / lambda) / delta)) +
      std::sqrt(lambda);
  return norm * radius;
}

struct ConfidenceInterval {
  double lower;
  double upper;

  [[nodiscard]] double center() const { return 0.5 * (lower + upper); }
  [[nodiscard]] double half_width() const { return 0.5 * (upper - lower); }
  [[nodiscard]] bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Comparison slack for overlap tests.
inline constexpr double kOverlapSlack = 1e-12;

/// Closed-interval overlap, touching endpoints included.
inline bool linked(const ConfidenceInterval& a, const ConfidenceInterval& b) {
  return a.lower <= b.upper + kOverlapSlack && b.lower <= a.upper + kOverlapSlack;
}

enum class ClassicWidth { kConfidenceWidth, kLemmaHalfWidth };

struct ClassicWidthRule {
  ClassicWidth kind = ClassicWidth::kConfidenceWidth;
};

/// Ridge width; lambda must match the agent's regularizer.
struct LinearWidthRule {
  double lambda = 1.0;
  double noise_scale = 1.0;
};

using WidthRule = std::variant<ClassicWidthRule, LinearWidthRule>;

/// Symmetric intervals around the agent's predictions:
/// [mu_hat_i - w_i, mu_hat_i + w_i].
inline std::vector<ConfidenceInterval> build_intervals(const AgentState& state, double delta, std::size_t t,
                                                       const WidthRule& rule,
                                                       std::span<const Context> contexts = {}) {
  std::vector<ConfidenceInterval> out;
  out.reserve(state.arms());
  for (std::size_t i = 0; i < state.arms(); ++i) {
    const auto arm = ArmId::from_index(i);
    double center = 0.0;
    double w = 0.0;
    if (const auto* classic = std::get_if<ClassicWidthRule>(&rule)) {
      if (state.is_linear()) throw std::invalid_argument("classic width rule on a linear agent");
      center = predicted_reward(state, arm);
      w = classic->kind == ClassicWidth::kConfidenceWidth ? confidence_width(delta, t, state.pulls(arm))
                                                          : lemma_half_width(delta, t, state.pulls(arm));
    } else {
      const auto& lin = std::get<LinearWidthRule>(rule);
      if (!state.is_linear() || state.estimator() != Estimator::kRidge || state.lambda() != lin.lambda) {
        throw std::invalid_argument("ridge width rule needs a ridge agent with the same lambda");
      }
      if (contexts.size() != state.arms()) throw std::invalid_argument("need one context per arm");
      center = predicted_reward(state, arm, contexts[i]);
      w = linear_width(delta, t, lin.lambda, lin.noise_scale, state.dimension(), state.gram(arm), contexts[i]);
    }
    out.push_back({center - w, center + w});
  }
  return out;
}

/// Arm with the highest upper bound; lowest index among exact ties.
inline ArmId highest_upper(std::span<const ConfidenceInterval> intervals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].upper > intervals[best].upper) best = i;
  }
  return ArmId::from_index(best);
}

/// Arms chained (transitively linked) to the arm with the highest upper bound.
inline ArmSet chained_set(std::span<const ConfidenceInterval> intervals) {
  const std::size_t k = intervals.size();
  if (k == 0) throw std::invalid_argument("chained set of zero intervals");
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return intervals[a].lower < intervals[b].lower; });

  // After sorting by lower endpoint each component is a contiguous run.
  UnionFind components(k);
  double reach = intervals[order.front()].upper;
  for (std::size_t pos = 1; pos < k; ++pos) {
    const auto& next = intervals[order[pos]];
    if (next.lower <= reach + kOverlapSlack) {
      components.unite(order[pos - 1], order[pos]);
      reach = std::max(reach, next.upper);
    } else {
      reach = next.upper;
    }
  }

  const std::size_t top = highest_upper(intervals).index();
  ArmSet chain(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (components.connected(i, top)) chain.insert(ArmId::from_index(i));
  }
  return chain;
}

}  // namespace fairpay
