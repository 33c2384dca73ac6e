#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairpay/arm.hpp"
#include "fairpay/random.hpp"

namespace fairpay {

/// Nonnegative per-arm payments offered to the agent for one round.
class PaymentVector {
 public:
  PaymentVector() = default;

  explicit PaymentVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("payments must be finite and nonnegative");
      }
    }
  }

  static PaymentVector zeros(std::size_t k) { return PaymentVector(std::vector<double>(k, 0.0)); }

  /// scale * e_arm
  static PaymentVector basis(std::size_t k, ArmId arm, double scale = 1.0) {
    std::vector<double> v(k, 0.0);
    v.at(arm.index()) = scale;
    return PaymentVector(std::move(v));
  }

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](ArmId arm) const { return values_[arm.index()]; }
  [[nodiscard]] double at(std::size_t index) const { return values_.at(index); }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  [[nodiscard]] double max() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
  }

  /// Some coordinate exceeds every other coordinate by at least 1.
  [[nodiscard]] bool is_peaked() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      double others = 0.0;
      bool any_other = false;
      for (std::size_t j = 0; j < values_.size(); ++j) {
        if (j == i) continue;
        others = any_other ? std::max(others, values_[j]) : values_[j];
        any_other = true;
      }
      if (!any_other || values_[i] >= others + 1.0) return true;
    }
    return false;
  }

  bool operator==(const PaymentVector&) const = default;

 private:
  std::vector<double> values_;
};

/// Finite-support distribution over payment vectors published for a round.
class PaymentDistribution {
 public:
  struct Outcome {
    double probability;
    PaymentVector payments;
    /// Arm the scheme meant to incentivize with this vector, if any.
    std::optional<ArmId> target;
  };

  static constexpr double kSumTolerance = 1e-12;

  explicit PaymentDistribution(std::vector<Outcome> support) : support_(std::move(support)) {
    if (support_.empty()) throw std::invalid_argument("payment distribution has empty support");
    double total = 0.0;
    const std::size_t k = support_.front().payments.size();
    for (const auto& o : support_) {
      if (!(o.probability > 0.0)) {
        throw std::invalid_argument("payment distribution probabilities must be positive");
      }
      if (o.payments.size() != k) {
        throw std::invalid_argument("payment vectors in one distribution must share a length");
      }
      total += o.probability;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      throw std::invalid_argument("payment distribution probabilities must sum to 1");
    }
  }

  static PaymentDistribution point_mass(PaymentVector p, std::optional<ArmId> target = std::nullopt) {
    return PaymentDistribution({Outcome{1.0, std::move(p), target}});
  }

  /// Uniform over the given vectors, each tagged with its target arm.
  static PaymentDistribution uniform(std::vector<std::pair<ArmId, PaymentVector>> vectors) {
    if (vectors.empty()) throw std::invalid_argument("uniform payment distribution needs a vector");
    const double q = 1.0 / static_cast<double>(vectors.size());
    std::vector<Outcome> support;
    support.reserve(vectors.size());
    for (auto& [arm, p] : vectors) support.push_back(Outcome{q, std::move(p), arm});
    return PaymentDistribution(std::move(support));
  }

  [[nodiscard]] std::span<const Outcome> support() const { return support_; }
  [[nodiscard]] std::size_t arms() const { return support_.front().payments.size(); }

  [[nodiscard]] bool is_peaked() const {
    return std::all_of(support_.begin(), support_.end(),
                       [](const Outcome& o) { return o.payments.is_peaked(); });
  }

  /// Draws an outcome index. Singleton supports consume no randomness.
  std::size_t sample_index(RandomSource& rng) const {
    if (support_.size() == 1) return 0;
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      cumulative += support_[i].probability;
      if (u < cumulative) return i;
    }
    return support_.size() - 1;
  }

 private:
  std::vector<Outcome> support_;
};

}  // namespace fairpay
