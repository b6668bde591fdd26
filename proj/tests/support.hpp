#pragma once

// Instance builders and independent reference computations for the tests.
// The oracles here deliberately avoid the library's solver code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "swipt/linalg.hpp"
#include "swipt/model.hpp"

namespace swipt::testing {

/// Square nT x nT instance at d = 10 m, exponent 3.
struct Instance {
  SystemConfig cfg;
  ChannelPair ch;
};

inline Instance square_instance(std::uint64_t seed, int n = 4, double pt = 1e5,
                                double targetFraction = 0.5) {
  Instance in;
  in.cfg = SystemConfig::square(n, pt);
  in.ch = generate_channels(in.cfg, 10.0, 10.0, seed);
  in.cfg.targetEnergy = targetFraction * max_energy(in.cfg, in.ch.G);
  return in;
}

/// Independent i.i.d. CN(0,1) matrix from std::normal_distribution.
inline CMatrix std_gaussian(std::mt19937_64& eng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMatrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = Complex(nd(eng), nd(eng));
  }
  return m;
}

inline CMatrix random_unitary(std::mt19937_64& eng, Eigen::Index n) {
  const CMatrix a = std_gaussian(eng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Bisection for the root of an increasing function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Capacity water-filling over channel gains g: p_k = (mu - 1/g_k)^+,
/// sum p_k = P. Returns the powers.
inline std::vector<double> capacity_waterfill(const std::vector<double>& g, double P) {
  auto total = [&](double mu) {
    double s = 0.0;
    for (double x : g) {
      if (x > 0) s += std::max(0.0, mu - 1.0 / x);
    }
    return s - P;
  };
  double hi = P;
  for (double x : g) {
    if (x > 0) hi = std::max(hi, P + 1.0 / x);
  }
  const double mu = bisect(total, 0.0, hi);
  std::vector<double> p;
  for (double x : g) p.push_back(x > 0 ? std::max(0.0, mu - 1.0 / x) : 0.0);
  return p;
}

/// MSE water-filling: minimize sum 1/(1 + g_k p_k) with sum p_k = P,
/// p_k = (sqrt(1/(nu g_k)) - 1/g_k)^+. Bisection on t = 1/sqrt(nu).
inline std::vector<double> mse_waterfill(const std::vector<double>& g, double P) {
  auto powers = [&](double t) {
    std::vector<double> p;
    for (double x : g) p.push_back(std::max(0.0, t / std::sqrt(x) - 1.0 / x));
    return p;
  };
  auto excess = [&](double t) {
    double s = 0.0;
    for (double v : powers(t)) s += v;
    return s - P;
  };
  double hi = 1.0;
  while (excess(hi) < 0.0) hi *= 2.0;
  return powers(bisect(excess, 0.0, hi));
}

/// Gaussian tail probability.
inline double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace swipt::testing
