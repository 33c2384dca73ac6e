#include <gtest/gtest.h>

#include <random>

#include "fairpay/agent.hpp"
#include "oracles.hpp"

using namespace fairpay;

namespace {

const ArmId A1 = ArmId::from_label(1);
const ArmId A2 = ArmId::from_label(2);

Context scalar(double v) { return Context::Constant(1, v); }

}  // namespace

TEST(PaymentVector, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(PaymentVector({0.1, -0.2}), std::invalid_argument);
  EXPECT_THROW(PaymentVector({0.1, std::nan("")}), std::invalid_argument);
  const auto e2 = PaymentVector::basis(3, A2, 0.5);
  EXPECT_EQ(e2.at(0), 0.0);
  EXPECT_EQ(e2[A2], 0.5);
}

TEST(PredictedReward, ClassicEmpiricalAverage) {
  auto s = AgentState::classic(2);
  s.update(A1, 0.5);
  s.update(A1, 0.7);
  EXPECT_NEAR(predicted_reward(s, A1), 0.6, 1e-15);
  EXPECT_THROW(predicted_reward(s, A2), std::logic_error);
}

TEST(PredictedReward, OlsOneDimension) {
  auto s = AgentState::linear(1, 1, Estimator::kOls);
  s.update(A1, scalar(1.0), 1.0);
  s.update(A1, scalar(1.0), 0.0);
  EXPECT_NEAR(s.coefficients(A1)[0], 0.5, 1e-15);
  EXPECT_NEAR(predicted_reward(s, A1, scalar(2.0)), 1.0, 1e-15);
}

TEST(PredictedReward, RidgeOneDimension) {
  auto s = AgentState::linear(1, 1, Estimator::kRidge, 1.0);
  s.update(A1, scalar(1.0), 1.0);
  s.update(A1, scalar(1.0), 0.0);
  EXPECT_NEAR(s.coefficients(A1)[0], 1.0 / 3.0, 1e-15);
}

TEST(PredictedReward, SingularOlsGramNamesTheArm) {
  auto s = AgentState::linear(2, 2, Estimator::kOls);
  s.update(A2, Eigen::Vector2d(1.0, 0.0), 0.4);
  try {
    (void)s.coefficients(A2);
    FAIL() << "expected SingularGramError";
  } catch (const SingularGramError& e) {
    EXPECT_EQ(e.arm(), A2);
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(ChoiceDistribution, StrictArgmax) {
  const std::vector<double> mu{0.5, 0.2, 0.1};
  EXPECT_EQ(choice_distribution(mu, PaymentVector({0.0, 0.4, 0.0})), (std::vector<double>{0, 1, 0}));
}

TEST(ChoiceDistribution, ValueTieGoesToLargerPayment) {
  const std::vector<double> mu{0.6, 0.3};
  EXPECT_EQ(choice_distribution(mu, PaymentVector({0.0, 0.3})), (std::vector<double>{0, 1}));
}

TEST(ChoiceDistribution, FullTieIsUniform) {
  const std::vector<double> mu{0.4, 0.4};
  EXPECT_EQ(choice_distribution(mu, PaymentVector::zeros(2)), (std::vector<double>{0.5, 0.5}));
}

TEST(ChoiceDistribution, ArgmaxInvariantUnderConstantShift) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 5;
    std::vector<double> mu(k), p(k), shifted(k);
    const double c = u(gen) * 3.0;
    for (std::size_t i = 0; i < k; ++i) {
      mu[i] = std::round(u(gen) * 4) / 4;
      p[i] = std::round(u(gen) * 4) / 4;
      shifted[i] = p[i] + c;
    }
    EXPECT_EQ(choice_distribution(mu, PaymentVector(p)), choice_distribution(mu, PaymentVector(shifted)));
  }
}

TEST(ChoiceDistribution, SumsToOneInsideArgmaxAndMatchesOracle) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + trial % 6;
    std::vector<double> mu(k), p(k);
    for (std::size_t i = 0; i < k; ++i) {
      mu[i] = std::round(u(gen) * 5) / 5;
      p[i] = trial % 2 ? std::round(u(gen) * 3) / 5 : 0.0;
    }
    const auto pi = choice_distribution(mu, PaymentVector(p));
    double total = 0.0;
    for (double q : pi) total += q;
    EXPECT_NEAR(total, 1.0, 1e-12);
    const auto w = oracle::winners(mu, p);
    for (std::size_t i = 0; i < k; ++i) {
      const bool winner = std::find(w.begin(), w.end(), i) != w.end();
      EXPECT_NEAR(pi[i], winner ? 1.0 / w.size() : 0.0, 1e-15);
    }
  }
}

TEST(ChoiceDistribution, IncentiveSufficiency) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 4;
    std::vector<double> mu(k), p(k);
    for (std::size_t i = 0; i < k; ++i) {
      mu[i] = u(gen);
      p[i] = 0.5 * u(gen);
    }
    const std::size_t j = trial % k;
    const double mu_max = *std::max_element(mu.begin(), mu.end());
    const double p_max = *std::max_element(p.begin(), p.end());
    p[j] = mu_max - mu[j] + p_max + 0.01;
    const auto pi = choice_distribution(mu, PaymentVector(p));
    EXPECT_EQ(pi[j], 1.0);
  }
}

TEST(Choose, DegenerateDistributionAlwaysSameArm) {
  RandomSource rng(1);
  const std::vector<double> mu{0.5, 0.2, 0.1};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(choose(mu, PaymentVector({0.0, 0.4, 0.0}), rng), A2);
}

TEST(Choose, FairCoinFrequency) {
  RandomSource rng(2);
  const std::vector<double> mu{0.4, 0.4};
  int first = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) first += choose(mu, PaymentVector::zeros(2), rng) == A1;
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 0.01);
}

TEST(Choose, SingleArm) {
  RandomSource rng(3);
  const std::vector<double> mu{0.3};
  EXPECT_EQ(choose(mu, PaymentVector::zeros(1), rng), A1);
  EXPECT_EQ(rng.position(), 0u);
}

TEST(Update, ClassicIncrements) {
  auto s = AgentState::classic(2);
  s.update(A1, 0.6);
  s.update(A1, 0.6);
  s.update(A2, 0.9);
  s.update(A1, 0.3);
  EXPECT_EQ(s.pulls(A1), 3u);
  EXPECT_NEAR(s.reward_sum(A1), 1.5, 1e-15);
  EXPECT_NEAR(predicted_reward(s, A1), 0.5, 1e-15);
  EXPECT_EQ(predicted_reward(s, A2), 0.9);
}

TEST(Update, LinearRankOne) {
  auto s = AgentState::linear(2, 1, Estimator::kOls);
  s.update(A1, scalar(1.0), 1.0);
  s.update(A1, scalar(1.0), 0.0);
  s.update(A2, scalar(1.0), 0.25);
  const auto before = s.coefficients(A2);
  s.update(A1, scalar(1.0), 1.0);
  EXPECT_EQ(s.gram(A1)(0, 0), 3.0);
  EXPECT_EQ(s.moment(A1)[0], 2.0);
  EXPECT_NEAR(s.coefficients(A1)[0], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(s.coefficients(A2), before);
}

TEST(Estimators, MatchNormalEquations) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int problem = 0; problem < 100; ++problem) {
    const std::size_t d = 1 + problem % 4;
    const std::size_t n = d + 2 + static_cast<std::size_t>(u(gen) * (50 - d - 2));
    const bool ridge = problem % 2 == 1;
    const double lambda = ridge ? 0.5 + u(gen) : 0.0;
    auto s = AgentState::linear(1, d, ridge ? Estimator::kRidge : Estimator::kOls, lambda);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t r = 0; r < n; ++r) {
      Context x(static_cast<Eigen::Index>(d));
      std::vector<double> row(d);
      for (std::size_t i = 0; i < d; ++i) row[i] = x[static_cast<Eigen::Index>(i)] = u(gen);
      rows.push_back(row);
      y.push_back(u(gen));
      s.update(A1, x, y.back());
    }
    const auto want = oracle::normal_equations(rows, y, lambda);
    const auto got = s.coefficients(A1);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      err = std::max(err, std::abs(got[static_cast<Eigen::Index>(i)] - want[i]));
      scale = std::max(scale, std::abs(want[i]));
    }
    EXPECT_LE(err, 1e-10 * std::max(scale, 1.0)) << "problem " << problem;
  }
}

TEST(WarmStart, ClassicPullsEachArmOnce) {
  const BanditInstance inst = ClassicInstance(
      {RewardModel::point_mass(0.2), RewardModel::point_mass(0.5), RewardModel::point_mass(0.8)});
  Environment env(inst, RandomSource(1));
  const auto ws = warm_start(env);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ws.state.pulls(ArmId::from_index(i)), 1u);
  EXPECT_EQ(ws.pulls.size(), 3u);
  EXPECT_EQ(estimates(ws.state), (std::vector<double>{0.2, 0.5, 0.8}));
}

TEST(WarmStart, LinearGramsFullRank) {
  const auto noise = RewardModel::uniform_interval(0.5, 0.1);
  const BanditInstance inst =
      LinearInstance({Eigen::Vector2d(0.3, 0.4), Eigen::Vector2d(0.5, 0.1)}, {noise, noise}, IidContexts{});
  Environment env(inst, RandomSource(3));
  const auto ws = warm_start(env, Estimator::kOls);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GT(ws.state.gram(ArmId::from_index(i)).determinant(), 0.0);
    EXPECT_EQ(ws.state.pulls(ArmId::from_index(i)), 2u);
  }
  EXPECT_EQ(ws.pulls.size(), 4u);
}
