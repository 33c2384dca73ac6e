#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairpay/agent.hpp"
#include "fairpay/arm.hpp"
#include "fairpay/payment.hpp"

namespace fairpay {

struct AuditTolerance {
  double probability = 1e-9;
  double value = 1e-9;
};

/// Net probability of each arm being chosen under a published payment
/// distribution, computed exactly over the finite support.
inline std::vector<double> selection_distribution(const PaymentDistribution& dist, std::span<const double> mu_hat) {
  std::vector<double> pi(mu_hat.size(), 0.0);
  for (const auto& outcome : dist.support()) {
    const auto choice = choice_distribution(mu_hat, outcome.payments);
    for (std::size_t j = 0; j < pi.size(); ++j) pi[j] += outcome.probability * choice[j];
  }
  return pi;
}

struct FairnessVerdict {
  bool fair = true;
  /// (j, j') with pi_j > pi_j' although f_j <= f_j'.
  std::vector<std::pair<ArmId, ArmId>> violating_pairs;
};

/// Round fairness: an arm may be favoured only over arms with strictly lower
/// true expected reward.
inline FairnessVerdict audit_round(std::span<const double> pi, std::span<const double> true_values,
                                   const AuditTolerance& tol = {}) {
  if (pi.size() != true_values.size()) throw std::invalid_argument("audit inputs differ in length");
  FairnessVerdict verdict;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    for (std::size_t jp = 0; jp < pi.size(); ++jp) {
      if (j == jp) continue;
      if (pi[j] > pi[jp] + tol.probability && true_values[j] <= true_values[jp] + tol.value) {
        verdict.violating_pairs.emplace_back(ArmId::from_index(j), ArmId::from_index(jp));
      }
    }
  }
  verdict.fair = verdict.violating_pairs.empty();
  return verdict;
}

/// max_j f_j - sum_j pi_j f_j
inline double regret_increment(std::span<const double> pi, std::span<const double> true_values) {
  const double best = *std::max_element(true_values.begin(), true_values.end());
  double expected = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) expected += pi[j] * true_values[j];
  return std::max(0.0, best - expected);
}

struct RoundCost {
  double expected;
  double realized;
};

inline double expected_cost(const PaymentDistribution& dist, std::span<const double> mu_hat) {
  double total = 0.0;
  for (const auto& outcome : dist.support()) {
    const auto choice = choice_distribution(mu_hat, outcome.payments);
    double paid = 0.0;
    for (std::size_t j = 0; j < choice.size(); ++j) paid += choice[j] * outcome.payments.at(j);
    total += outcome.probability * paid;
  }
  return total;
}

inline RoundCost cost_accounting(const PaymentDistribution& dist, std::span<const double> mu_hat,
                                 const PaymentVector& realized, ArmId chosen) {
  return {expected_cost(dist, mu_hat), realized[chosen]};
}

struct RoundAudit {
  std::vector<double> pi;
  std::vector<double> true_values;
  bool fair = true;
  std::vector<std::pair<ArmId, ArmId>> violating_pairs;
  double cost_expected = 0.0;
  double cost_realized = 0.0;
  double regret_increment = 0.0;
};

}  // namespace fairpay
