#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairpay/arm.hpp"
#include "fairpay/payment.hpp"
#include "fairpay/random.hpp"

namespace fairpay {

using Context = Eigen::VectorXd;
/// One context per arm for a single round.
using Contexts = std::vector<Context>;

/// Reward law of one arm. Every law is supported inside [0, 1]; invalid
/// parameters are rejected by the factories, never at sample time.
class RewardModel {
 public:
  enum class Kind { kPointMass, kTwoPoint, kBernoulli, kUniformInterval };

  static RewardModel point_mass(double mean) {
    require(mean >= 0.0 && mean <= 1.0, "point mass must lie in [0,1]");
    return RewardModel(Kind::kPointMass, mean, 0.0);
  }

  /// mean - spread or mean + spread, each with probability 1/2.
  static RewardModel two_point(double mean, double spread) {
    require(mean >= 0.0 && mean <= 1.0, "two-point mean must lie in [0,1]");
    require(spread >= 0.0 && spread < std::min(mean, 1.0 - mean),
            "two-point spread must satisfy 0 <= eps < min(mu, 1-mu)");
    return RewardModel(Kind::kTwoPoint, mean, spread);
  }

  static RewardModel bernoulli(double mean) {
    require(mean >= 0.0 && mean <= 1.0, "bernoulli mean must lie in [0,1]");
    return RewardModel(Kind::kBernoulli, mean, 0.0);
  }

  static RewardModel uniform_interval(double center, double halfwidth) {
    require(halfwidth >= 0.0, "uniform halfwidth must be nonnegative");
    require(center - halfwidth >= 0.0 && center + halfwidth <= 1.0,
            "uniform interval must lie in [0,1]");
    return RewardModel(Kind::kUniformInterval, center, halfwidth);
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double mean() const { return mean_; }
  /// Two-point spread or uniform halfwidth; zero for the other kinds.
  [[nodiscard]] double spread() const { return spread_; }
  [[nodiscard]] bool deterministic() const {
    return kind_ == Kind::kPointMass || (spread_ == 0.0 && kind_ != Kind::kBernoulli) ||
           (kind_ == Kind::kBernoulli && (mean_ == 0.0 || mean_ == 1.0));
  }

  [[nodiscard]] double lower() const {
    switch (kind_) {
      case Kind::kBernoulli: return mean_ == 1.0 ? 1.0 : 0.0;
      default: return mean_ - spread_;
    }
  }
  [[nodiscard]] double upper() const {
    switch (kind_) {
      case Kind::kBernoulli: return mean_ == 0.0 ? 0.0 : 1.0;
      default: return mean_ + spread_;
    }
  }

  double sample(RandomSource& rng) const {
    switch (kind_) {
      case Kind::kPointMass:
        return mean_;
      case Kind::kTwoPoint:
        return rng.uniform() < 0.5 ? mean_ - spread_ : mean_ + spread_;
      case Kind::kBernoulli:
        return rng.uniform() < mean_ ? 1.0 : 0.0;
      case Kind::kUniformInterval:
        return mean_ + spread_ * (2.0 * rng.uniform() - 1.0);
    }
    return mean_;
  }

 private:
  RewardModel(Kind kind, double mean, double spread) : kind_(kind), mean_(mean), spread_(spread) {}

  static void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  }

  Kind kind_;
  double mean_;
  double spread_;
};

inline double sample_reward(const RewardModel& model, RandomSource& rng) { return model.sample(rng); }

/// Non-contextual instance: one fixed reward law per arm.
class ClassicInstance {
 public:
  explicit ClassicInstance(std::vector<RewardModel> models) : models_(std::move(models)) {
    if (models_.size() < 2) throw std::invalid_argument("an instance needs at least two arms");
  }

  [[nodiscard]] std::size_t arms() const { return models_.size(); }
  [[nodiscard]] const RewardModel& model(ArmId arm) const { return models_.at(arm.index()); }
  [[nodiscard]] std::vector<double> means() const {
    std::vector<double> out;
    for (const auto& m : models_) out.push_back(m.mean());
    return out;
  }

 private:
  std::vector<RewardModel> models_;
};

/// What an adaptive context adversary may read before choosing contexts:
/// the published payment distribution and the agent's current coefficient
/// estimates.
struct PublishedRound {
  std::size_t t;
  const PaymentDistribution& payments;
  std::span<const Eigen::VectorXd> estimates;
};

class ContextAdversary {
 public:
  virtual ~ContextAdversary() = default;
  [[nodiscard]] virtual Contexts contexts(const PublishedRound& round) const = 0;
};

/// Replays a fixed list of per-round contexts, cycling when exhausted.
struct FixedContexts {
  std::vector<Contexts> rounds;
};

/// i.i.d. contexts, uniform over the part of the unit box [0,1]^d that lies in
/// the closed unit ball.
struct IidContexts {};

struct AdaptiveContexts {
  std::shared_ptr<const ContextAdversary> adversary;
};

using ContextProvider = std::variant<FixedContexts, IidContexts, AdaptiveContexts>;

/// Linear contextual instance: arm j has mean <theta_j, x_j>; realized rewards
/// add the arm's noise law re-centered at that mean and are clipped to [0,1].
class LinearInstance {
 public:
  LinearInstance(std::vector<Eigen::VectorXd> coefficients, std::vector<RewardModel> noise,
                 ContextProvider contexts)
      : coefficients_(std::move(coefficients)), noise_(std::move(noise)), contexts_(std::move(contexts)) {
    if (coefficients_.size() < 2) throw std::invalid_argument("an instance needs at least two arms");
    if (noise_.size() != coefficients_.size()) {
      throw std::invalid_argument("one noise law per arm is required");
    }
    dimension_ = static_cast<std::size_t>(coefficients_.front().size());
    if (dimension_ == 0) throw std::invalid_argument("context dimension must be positive");
    for (const auto& theta : coefficients_) {
      if (static_cast<std::size_t>(theta.size()) != dimension_) {
        throw std::invalid_argument("coefficient vectors must share one dimension");
      }
      if (theta.minCoeff() < 0.0 || theta.maxCoeff() > 1.0 || theta.norm() > 1.0 + 1e-12) {
        throw std::invalid_argument("coefficients need entries in [0,1] and norm <= 1");
      }
    }
    if (const auto* fixed = std::get_if<FixedContexts>(&contexts_)) {
      if (fixed->rounds.empty()) throw std::invalid_argument("fixed context list is empty");
      for (const auto& round : fixed->rounds) check_contexts(round);
    }
    if (const auto* adaptive = std::get_if<AdaptiveContexts>(&contexts_); adaptive && !adaptive->adversary) {
      throw std::invalid_argument("adaptive context provider has no adversary");
    }
  }

  [[nodiscard]] std::size_t arms() const { return coefficients_.size(); }
  [[nodiscard]] std::size_t dimension() const { return dimension_; }
  [[nodiscard]] const Eigen::VectorXd& coefficients(ArmId arm) const { return coefficients_.at(arm.index()); }
  [[nodiscard]] const RewardModel& noise(ArmId arm) const { return noise_.at(arm.index()); }
  [[nodiscard]] const ContextProvider& contexts() const { return contexts_; }
  [[nodiscard]] bool adaptive() const { return std::holds_alternative<AdaptiveContexts>(contexts_); }

  /// Throws unless there are k contexts of dimension d with entries in [0,1]
  /// and norm at most 1.
  void check_contexts(const Contexts& xs) const {
    if (xs.size() != arms()) throw std::invalid_argument("need exactly one context per arm");
    for (const auto& x : xs) {
      if (static_cast<std::size_t>(x.size()) != dimension_) {
        throw std::invalid_argument("context dimension does not match the instance");
      }
      if (x.minCoeff() < 0.0 || x.maxCoeff() > 1.0 || x.norm() > 1.0 + 1e-12) {
        throw std::invalid_argument("contexts need entries in [0,1] and norm <= 1");
      }
    }
  }

 private:
  std::vector<Eigen::VectorXd> coefficients_;
  std::vector<RewardModel> noise_;
  ContextProvider contexts_;
  std::size_t dimension_ = 0;
};

using BanditInstance = std::variant<ClassicInstance, LinearInstance>;

inline std::size_t arms(const BanditInstance& instance) {
  return std::visit([](const auto& inst) { return inst.arms(); }, instance);
}

inline double true_mean(const ClassicInstance& instance, ArmId arm) { return instance.model(arm).mean(); }

inline double true_mean(const LinearInstance& instance, ArmId arm, const Context& x) {
  const auto& theta = instance.coefficients(arm);
  if (theta.size() != x.size()) {
    throw std::invalid_argument("context dimension " + std::to_string(x.size()) +
                                " does not match coefficient dimension " + std::to_string(theta.size()));
  }
  return theta.dot(x);
}

struct LinearReward {
  double value;
  bool clipped;
};

inline LinearReward sample_reward(const LinearInstance& instance, ArmId arm, const Context& x,
                                  RandomSource& rng) {
  const RewardModel& noise = instance.noise(arm);
  const double raw = true_mean(instance, arm, x) + (noise.sample(rng) - noise.mean());
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, value != raw};
}

/// Draws one context uniformly from [0,1]^d intersected with the unit ball.
inline Context sample_unit_box_context(std::size_t d, RandomSource& rng) {
  Context x(static_cast<Eigen::Index>(d));
  for (;;) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform();
    if (x.squaredNorm() <= 1.0) return x;
  }
}

/// The true environment for one run: the instance plus its random streams.
/// Each arm owns a reward stream, so the n-th pull of an arm sees the same
/// noise draw regardless of what the scheme did before it.
class Environment {
 public:
  Environment(const BanditInstance& instance, const RandomSource& master)
      : instance_(&instance), contexts_(stream(master, Stream::kContexts)) {
    const std::size_t k = fairpay::arms(instance);
    rewards_.reserve(k);
    for (std::size_t i = 0; i < k; ++i) rewards_.push_back(stream(master, Stream::kRewards, i));
  }

  [[nodiscard]] const BanditInstance& instance() const { return *instance_; }
  [[nodiscard]] std::size_t arms() const { return rewards_.size(); }
  [[nodiscard]] bool linear() const { return std::holds_alternative<LinearInstance>(*instance_); }
  [[nodiscard]] std::size_t clip_events() const { return clip_events_; }

  /// Contexts for round t from a non-adaptive provider.
  Contexts draw_contexts(std::size_t t) {
    const auto& inst = std::get<LinearInstance>(*instance_);
    return std::visit(
        [&](const auto& provider) -> Contexts {
          using P = std::decay_t<decltype(provider)>;
          if constexpr (std::is_same_v<P, FixedContexts>) {
            return provider.rounds[(t - 1) % provider.rounds.size()];
          } else if constexpr (std::is_same_v<P, IidContexts>) {
            Contexts xs;
            for (std::size_t i = 0; i < inst.arms(); ++i) {
              xs.push_back(sample_unit_box_context(inst.dimension(), contexts_));
            }
            return xs;
          } else {
            throw std::logic_error("adaptive contexts are chosen by the adversary");
          }
        },
        inst.contexts());
  }

  /// True expected reward of every arm this round.
  [[nodiscard]] std::vector<double> true_values(std::span<const Context> contexts) const {
    std::vector<double> out(arms());
    for (std::size_t i = 0; i < arms(); ++i) {
      const auto arm = ArmId::from_index(i);
      out[i] = std::visit(
          [&](const auto& inst) {
            if constexpr (std::is_same_v<std::decay_t<decltype(inst)>, ClassicInstance>) {
              return true_mean(inst, arm);
            } else {
              return true_mean(inst, arm, contexts[i]);
            }
          },
          *instance_);
    }
    return out;
  }

  /// Realized reward for pulling `arm`; `x` is ignored for classic instances.
  double pull(ArmId arm, const Context* x = nullptr) {
    auto& rng = rewards_.at(arm.index());
    if (const auto* classic = std::get_if<ClassicInstance>(instance_)) {
      return sample_reward(classic->model(arm), rng);
    }
    if (x == nullptr) throw std::invalid_argument("linear pull needs a context");
    const auto r = sample_reward(std::get<LinearInstance>(*instance_), arm, *x, rng);
    if (r.clipped) ++clip_events_;
    return r.value;
  }

 private:
  const BanditInstance* instance_;
  RandomSource contexts_;
  std::vector<RandomSource> rewards_;
  std::size_t clip_events_ = 0;
};

}  // namespace fairpay
