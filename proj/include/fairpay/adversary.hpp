#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairpay/arm.hpp"
#include "fairpay/core.hpp"
#include "fairpay/payment.hpp"

namespace fairpay {

// ---------------------------------------------------------------------------
// Lower-bound instance families

/// k instances; instance i pays 1 on arm i and 0 elsewhere, deterministically.
inline std::vector<ClassicInstance> one_hot_instances(std::size_t k) {
  if (k < 2) throw std::invalid_argument("one-hot family needs k >= 2");
  std::vector<ClassicInstance> out;
  for (std::size_t hot = 0; hot < k; ++hot) {
    std::vector<RewardModel> models;
    for (std::size_t i = 0; i < k; ++i) models.push_back(RewardModel::point_mass(i == hot ? 1.0 : 0.0));
    out.emplace_back(std::move(models));
  }
  return out;
}

/// Arm 1 deterministic at 1-c, arm 2 at 1-c +/- eps, remaining arms
/// deterministic at 1.
inline ClassicInstance near_tie_instance(std::size_t k, double c, double eps) {
  if (k < 2) throw std::invalid_argument("near-tie instance needs k >= 2");
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("near-tie margin c must lie in (0,1)");
  if (!(eps > 0.0 && eps < c)) throw std::invalid_argument("near-tie spread needs 0 < eps < c");
  std::vector<RewardModel> models{RewardModel::point_mass(1.0 - c), RewardModel::two_point(1.0 - c, eps)};
  for (std::size_t i = 2; i < k; ++i) models.push_back(RewardModel::point_mass(1.0));
  return ClassicInstance(std::move(models));
}

/// All means 1/2; arms 1..k-1 deterministic, arm k at 1/2 +/- eps.
inline ClassicInstance equal_means_instance(std::size_t k, double eps) {
  if (k < 2) throw std::invalid_argument("equal-means instance needs k >= 2");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("equal-means spread must lie in (0,1/2)");
  std::vector<RewardModel> models;
  for (std::size_t i = 0; i + 1 < k; ++i) models.push_back(RewardModel::point_mass(0.5));
  models.push_back(RewardModel::two_point(0.5, eps));
  return ClassicInstance(std::move(models));
}

// ---------------------------------------------------------------------------
// Adaptive context adversary for one-dimensional linear instances

enum class AdversaryCase {
  kPeaked,          // every support vector peaked: nothing to exploit
  kLargeMargin,     // c_max > 1 - eta
  kUnequalMargins,  // 1 - eta >= c_max > c_min
  kEqualMargins,    // c_max = c_min = beta in (0, 1 - eta)
  kEqualAtCeiling,  // c_max = c_min = 1 - eta
  kZeroMargin,      // c_max = c_min = 0
};

inline const char* to_string(AdversaryCase c) {
  switch (c) {
    case AdversaryCase::kPeaked: return "peaked";
    case AdversaryCase::kLargeMargin: return "large_margin";
    case AdversaryCase::kUnequalMargins: return "unequal_margins";
    case AdversaryCase::kEqualMargins: return "equal_margins";
    case AdversaryCase::kEqualAtCeiling: return "equal_at_ceiling";
    case AdversaryCase::kZeroMargin: return "zero_margin";
  }
  return "?";
}

inline constexpr double kAdversarySlack = 1e-12;

/// For each arm a != top: the largest c such that, with probability 1 given
/// that a holds the (weakly) largest payment, p_a - p_top >= c. Over a finite
/// support this is the minimum of p_a - p_top across the conditioning
/// vectors. Margins are capped at 1; an arm that never holds the largest
/// payment gets the vacuous value 1. The entry for `top` is 0.
inline std::vector<double> payment_margins(const PaymentDistribution& dist, ArmId top) {
  const std::size_t k = dist.arms();
  std::vector<double> margins(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    if (a == top.index()) continue;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& outcome : dist.support()) {
      const auto& p = outcome.payments;
      double others = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        if (b != a) others = std::max(others, p.at(b));
      }
      if (p.at(a) + kAdversarySlack < others) continue;
      margin = std::min(margin, p.at(a) - p.at(top.index()));
    }
    margins[a] = std::min(1.0, margin);
  }
  return margins;
}

struct AdversaryReport {
  AdversaryCase kind;
  ArmId top;
  std::vector<double> margins;
  Contexts contexts;
  /// (k-1)/k (1 - eta): the expected cost a fair round must pay.
  double cost_floor;
};

namespace detail {

inline Context scalar_context(double value) {
  Context x(1);
  x[0] = std::clamp(value, 0.0, 1.0);
  return x;
}

inline double solve_context(double target, double coefficient) {
  return coefficient > 0.0 ? target / coefficient : 1.0;
}

}  // namespace detail

/// Chooses the round's contexts from the published payment distribution and
/// the agent's current one-dimensional coefficient estimates.
inline AdversaryReport contextual_adversary_step(const PaymentDistribution& dist,
                                                 std::span<const Eigen::VectorXd> estimates, double eta) {
  if (dist.support().empty()) throw std::invalid_argument("adversary needs a nonempty support");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  const std::size_t k = dist.arms();
  if (estimates.size() != k) throw std::invalid_argument("need one estimate per arm");
  std::vector<double> theta(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (estimates[i].size() != 1) throw std::invalid_argument("contextual adversary is one-dimensional");
    theta[i] = estimates[i][0];
  }

  const auto top = ArmId::from_index(static_cast<std::size_t>(
      std::distance(theta.begin(), std::max_element(theta.begin(), theta.end()))));
  AdversaryReport report{AdversaryCase::kPeaked, top, payment_margins(dist, top), {},
                         (static_cast<double>(k) - 1.0) / static_cast<double>(k) * (1.0 - eta)};

  double c_max = -1.0;
  double c_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    if (a == top.index()) continue;
    c_max = std::max(c_max, report.margins[a]);
    c_min = std::min(c_min, report.margins[a]);
  }

  const double ceiling = 1.0 - eta;
  // Only the top arm gets a nonzero context: it looks worth `target` to the
  // agent while every other arm is truly worth 0.
  auto isolate_top = [&](double target) {
    Contexts xs(k, detail::scalar_context(0.0));
    xs[top.index()] = detail::scalar_context(detail::solve_context(target, theta[top.index()]));
    return xs;
  };

  if (dist.is_peaked()) {
    report.kind = AdversaryCase::kPeaked;
    report.contexts = isolate_top(ceiling);
  } else if (c_max > ceiling + kAdversarySlack) {
    report.kind = AdversaryCase::kLargeMargin;
    report.contexts = isolate_top(ceiling);
  } else if (c_max > c_min + kAdversarySlack) {
    report.kind = AdversaryCase::kUnequalMargins;
    report.contexts = isolate_top(c_max);
  } else if (c_max >= ceiling - kAdversarySlack) {
    report.kind = AdversaryCase::kEqualAtCeiling;
    report.contexts = isolate_top(ceiling);
  } else if (c_max > kAdversarySlack) {
    report.kind = AdversaryCase::kEqualMargins;
    const double beta = c_max;
    const double level = 0.5 * (beta + ceiling);
    // Runner-up by estimate; everyone but the top arm shares its context.
    std::size_t second = top.index() == 0 ? 1 : 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != top.index() && theta[i] > theta[second]) second = i;
    }
    const Context shared = detail::scalar_context(detail::solve_context(level - beta, theta[second]));
    report.contexts.assign(k, shared);
    report.contexts[top.index()] = detail::scalar_context(detail::solve_context(level, theta[top.index()]));
  } else {
    report.kind = AdversaryCase::kZeroMargin;
    report.contexts.assign(k, detail::scalar_context(1.0));
  }
  return report;
}

class ContextualAdversary final : public ContextAdversary {
 public:
  explicit ContextualAdversary(double eta) : eta_(eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  }

  [[nodiscard]] double eta() const { return eta_; }

  [[nodiscard]] AdversaryReport respond(const PublishedRound& round) const {
    return contextual_adversary_step(round.payments, round.estimates, eta_);
  }

  [[nodiscard]] Contexts contexts(const PublishedRound& round) const override {
    return respond(round).contexts;
  }

 private:
  double eta_;
};

/// One-dimensional instance with theta_i = 1 - eta for every arm; arm 1 is
/// deterministic and the rest carry uniform +/- eps noise. Contexts come from
/// the contextual adversary.
inline LinearInstance contextual_adversary_instance(std::size_t k, double eta, double eps) {
  if (k < 2) throw std::invalid_argument("contextual instance needs k >= 2");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("noise spread must lie in (0,1/2)");
  std::vector<Eigen::VectorXd> theta(k, Eigen::VectorXd::Constant(1, 1.0 - eta));
  std::vector<RewardModel> noise{RewardModel::point_mass(0.5)};
  for (std::size_t i = 1; i < k; ++i) noise.push_back(RewardModel::uniform_interval(0.5, eps));
  return LinearInstance(std::move(theta), std::move(noise),
                        AdaptiveContexts{std::make_shared<const ContextualAdversary>(eta)});
}

}  // namespace fairpay
