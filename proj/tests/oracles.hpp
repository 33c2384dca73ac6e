// Independent reference implementations used to check the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

struct Interval {
  double lo;
  double hi;
};

inline bool overlap(const Interval& a, const Interval& b, double slack = 1e-12) {
  return a.lo <= b.hi + slack && b.lo <= a.hi + slack;
}

/// Pairwise-overlap closure from the top interval, iterated to a fixpoint.
inline std::set<std::size_t> chained(const std::vector<Interval>& xs) {
  std::size_t top = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].hi > xs[top].hi) top = i;
  }
  std::set<std::size_t> chain{top};
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (chain.count(i)) continue;
      for (std::size_t j : chain) {
        if (overlap(xs[i], xs[j])) {
          chain.insert(i);
          grew = true;
          break;
        }
      }
    }
  }
  return chain;
}

/// Solves (X^T X + lambda I) theta = X^T y by Gaussian elimination with
/// partial pivoting in long double.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
                                            double lambda) {
  const std::size_t d = rows.front().size();
  std::vector<std::vector<long double>> a(d, std::vector<long double>(d + 1, 0.0L));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a[i][j] += static_cast<long double>(rows[r][i]) * rows[r][j];
      a[i][d] += static_cast<long double>(rows[r][i]) * y[r];
    }
  }
  for (std::size_t i = 0; i < d; ++i) a[i][i] += lambda;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < d; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= d; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> theta(d);
  for (std::size_t i = 0; i < d; ++i) theta[i] = static_cast<double>(a[i][d] / a[i][i]);
  return theta;
}

/// The agent's choice for one payment vector, written out from the rule:
/// maximize mu + p, then the payment, then uniform.
inline std::vector<std::size_t> winners(std::span<const double> mu, std::span<const double> p) {
  double best = -1e300;
  for (std::size_t i = 0; i < mu.size(); ++i) best = std::max(best, mu[i] + p[i]);
  const double tol = 1e-12 * std::max(1.0, std::fabs(best));
  double best_pay = -1.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] + p[i] >= best - tol) best_pay = std::max(best_pay, p[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] + p[i] >= best - tol && p[i] >= best_pay - 1e-12 * std::max(1.0, best_pay)) out.push_back(i);
  }
  return out;
}

/// Monte Carlo selection frequencies: draw a payment vector by its
/// probability, then the agent's choice.
inline std::vector<double> simulate_selection(const std::vector<std::pair<double, std::vector<double>>>& support,
                                              std::span<const double> mu, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> freq(mu.size(), 0.0);
  for (std::size_t n = 0; n < draws; ++n) {
    double u = unit(gen);
    std::size_t pick = support.size() - 1;
    for (std::size_t s = 0; s < support.size(); ++s) {
      if (u < support[s].first) {
        pick = s;
        break;
      }
      u -= support[s].first;
    }
    const auto w = winners(mu, support[pick].second);
    std::uniform_int_distribution<std::size_t> idx(0, w.size() - 1);
    freq[w[idx(gen)]] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(draws);
  return freq;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return 0.5 * s;
}

/// 2 sqrt(ln((pi (t+1))^2 / (3 delta)) / n), evaluated in long double.
inline double confidence_width(double delta, double t, double n) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double arg = (pi * (t + 1)) * (pi * (t + 1)) / (3.0L * delta);
  return static_cast<double>(2.0L * std::sqrt(std::log(arg) / n));
}

}  // namespace oracle
