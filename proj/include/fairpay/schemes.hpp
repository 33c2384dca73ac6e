#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairpay/agent.hpp"
#include "fairpay/arm.hpp"
#include "fairpay/confidence.hpp"
#include "fairpay/payment.hpp"

namespace fairpay {

/// What a partial-information principal sees: realized payment vectors and
/// the agent's choices. Pull counts also include the public warm start.
class PublicHistory {
 public:
  struct Entry {
    PaymentVector payments;
    ArmId chosen;
  };

  explicit PublicHistory(std::size_t k) : counts_(k, 0) {}

  void record_warm_start(ArmId arm) { ++counts_.at(arm.index()); }

  void record(PaymentVector payments, ArmId chosen) {
    ++counts_.at(chosen.index());
    entries_.push_back({std::move(payments), chosen});
  }

  [[nodiscard]] std::span<const Entry> entries() const { return entries_; }
  [[nodiscard]] std::span<const std::size_t> counts() const { return counts_; }
  [[nodiscard]] std::size_t count(ArmId arm) const { return counts_.at(arm.index()); }

 private:
  std::vector<std::size_t> counts_;
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Baselines

inline PaymentDistribution zero_scheme_step(std::size_t k) {
  return PaymentDistribution::point_mass(PaymentVector::zeros(k));
}

/// Unit payment on one uniformly chosen arm. Every vector in the support is
/// peaked, so the agent follows the payment whatever its estimates in [0,1].
inline PaymentDistribution peaked_uniform_step(std::size_t k) {
  if (k < 2) throw std::invalid_argument("peaked uniform scheme needs k >= 2");
  std::vector<std::pair<ArmId, PaymentVector>> vectors;
  for (std::size_t i = 0; i < k; ++i) {
    const auto arm = ArmId::from_index(i);
    vectors.emplace_back(arm, PaymentVector::basis(k, arm, 1.0));
  }
  return PaymentDistribution::uniform(std::move(vectors));
}

// ---------------------------------------------------------------------------
// Two arms, partial information

struct TwoArmState {
  /// Cleared for good once the agent takes the unpaid arm over the paid one.
  bool active = true;
};

inline double two_arm_payment(double delta, std::size_t t, std::size_t n1, std::size_t n2) {
  return confidence_width(delta, t, n1) + confidence_width(delta, t, n2);
}

inline PaymentDistribution two_arm_step(const TwoArmState& state, double delta, std::size_t t,
                                        std::span<const std::size_t> counts) {
  if (counts.size() != 2) throw std::invalid_argument("two-arm scheme needs exactly two arms");
  if (!state.active) return zero_scheme_step(2);
  const double p = two_arm_payment(delta, t, counts[0], counts[1]);
  const auto a1 = ArmId::from_index(0);
  const auto a2 = ArmId::from_index(1);
  return PaymentDistribution::uniform({{a1, PaymentVector::basis(2, a1, p)}, {a2, PaymentVector::basis(2, a2, p)}});
}

inline void two_arm_observe(TwoArmState& state, const PaymentVector& realized, ArmId chosen) {
  if (realized.size() != 2) throw std::invalid_argument("two-arm scheme needs exactly two arms");
  const ArmId other = ArmId::from_index(1 - chosen.index());
  if (realized[chosen] == 0.0 && realized[other] > 0.0) state.active = false;
}

// ---------------------------------------------------------------------------
// PlayAll: ChainedFair rounds interleaved with FindChained searches

struct PlayAllState {
  enum class Mode { kChainedFair, kFindChained };

  explicit PlayAllState(std::size_t k)
      : active(ArmSet::all(k)), found(k), accumulated(PaymentVector::zeros(k)), entry_active(k) {}

  double x = 1.0;
  ArmSet active;
  Mode mode = Mode::kChainedFair;

  // FindChained bookkeeping: arms chosen so far and the last offered vector.
  ArmSet found;
  PaymentVector accumulated;
  ArmSet entry_active;

  std::size_t find_chained_calls = 0;
  /// Rounds where a FindChained search returned a set that was not a strict
  /// subset of the active set it started from.
  std::vector<std::size_t> anomalies;
};

/// Shrinks x to the current width of the least-pulled active arm and pays
/// 4 x |active| to one uniformly chosen active arm.
inline PaymentDistribution chained_fair_step(PlayAllState& state, double delta, std::size_t t,
                                             std::span<const std::size_t> counts) {
  if (state.mode != PlayAllState::Mode::kChainedFair) throw std::logic_error("PlayAll is searching");
  const auto members = state.active.members();
  if (members.empty()) throw std::logic_error("PlayAll active set is empty");
  std::size_t min_count = counts[members.front().index()];
  for (const auto arm : members) min_count = std::min(min_count, counts[arm.index()]);
  state.x = std::min(state.x, confidence_width(delta, t, min_count));

  const std::size_t k = state.active.universe();
  const double payment = 4.0 * state.x * static_cast<double>(members.size());
  std::vector<std::pair<ArmId, PaymentVector>> vectors;
  for (const auto arm : members) vectors.emplace_back(arm, PaymentVector::basis(k, arm, payment));
  return PaymentDistribution::uniform(std::move(vectors));
}

inline void playall_observe(PlayAllState& state, ArmId incentivized, ArmId chosen) {
  if (state.mode != PlayAllState::Mode::kChainedFair) return;
  if (chosen == incentivized) return;
  const std::size_t k = state.active.universe();
  state.mode = PlayAllState::Mode::kFindChained;
  state.found = ArmSet(k);
  state.accumulated = PaymentVector::zeros(k);
  state.entry_active = state.active;
  ++state.find_chained_calls;
}

/// Entry round offers nothing; afterwards every active arm not yet chosen
/// gets 2x more than it was offered last round.
inline PaymentDistribution find_chained_step(PlayAllState& state) {
  if (state.mode != PlayAllState::Mode::kFindChained) throw std::logic_error("PlayAll is not searching");
  if (state.found.empty()) {
    state.accumulated = PaymentVector::zeros(state.active.universe());
    return PaymentDistribution::point_mass(state.accumulated);
  }
  std::vector<double> next(state.accumulated.values().begin(), state.accumulated.values().end());
  for (const auto arm : state.active.members()) {
    if (!state.found.contains(arm)) next[arm.index()] += 2.0 * state.x;
  }
  state.accumulated = PaymentVector(std::move(next));
  return PaymentDistribution::point_mass(state.accumulated);
}

/// Returns true when the search ended this round (a repeat choice), in which
/// case the active set becomes the arms found.
inline bool find_chained_observe(PlayAllState& state, ArmId chosen, std::size_t t = 0) {
  if (state.mode != PlayAllState::Mode::kFindChained) return false;
  if (!state.found.contains(chosen)) {
    state.found.insert(chosen);
    return false;
  }
  const bool shrank = state.found.is_subset_of(state.entry_active) && state.found.size() < state.entry_active.size();
  if (!shrank) state.anomalies.push_back(t);
  state.active = state.found;
  state.mode = PlayAllState::Mode::kChainedFair;
  return true;
}

// ---------------------------------------------------------------------------
// Fair-Payments, full information

struct FairPaymentsRound {
  PaymentDistribution payments;
  ArmSet chain;
  ArmId leader;
  /// Largest interval half-width inside the chain.
  double max_width;
};

/// Pays each chained arm the gap between the leading estimate and its own,
/// one chained arm at a time, chosen uniformly.
inline FairPaymentsRound fair_payments_step(const AgentState& agent, double delta, std::size_t t,
                                            const WidthRule& rule, std::span<const Context> contexts = {}) {
  const auto mu_hat = estimates(agent, contexts);
  const std::size_t k = mu_hat.size();
  const auto leader = ArmId::from_index(static_cast<std::size_t>(
      std::distance(mu_hat.begin(), std::max_element(mu_hat.begin(), mu_hat.end()))));
  const auto intervals = build_intervals(agent, delta, t, rule, contexts);
  ArmSet chain = chained_set(intervals);

  std::vector<std::pair<ArmId, PaymentVector>> vectors;
  double max_width = 0.0;
  for (const auto arm : chain.members()) {
    const double gap = mu_hat[leader.index()] - mu_hat[arm.index()];
    vectors.emplace_back(arm, PaymentVector::basis(k, arm, std::max(0.0, gap)));
    max_width = std::max(max_width, intervals[arm.index()].half_width());
  }
  return {PaymentDistribution::uniform(std::move(vectors)), std::move(chain), leader, max_width};
}

}  // namespace fairpay
