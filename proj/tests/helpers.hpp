#pragma once

// Shared fixtures for the unit and acceptance suites: seeded random
// marginals and graphs, plus a continuum Legendre oracle independent of
// the library's basis construction.

#include <cmath>
#include <random>

#include "grafield/grafield.hpp"

namespace testing_support {

inline grafield::Marginal random_marginal(int n, std::mt19937_64& eng) {
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = -std::log(grafield::unit_open_closed(eng));
  p /= p.sum();
  return grafield::Marginal::from_probs(std::move(p));
}

// Random weighted graph; `dense` draws positive uniform weights on every
// cell, otherwise cells are 0/1 with probability 0.4. Resamples until the
// total weight is positive.
inline grafield::Graph random_graph(int n, bool directed, bool dense,
                                    std::mt19937_64& eng) {
  Eigen::MatrixXd a(n, n);
  while (true) {
    if (dense) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) a(x, y) = grafield::unit_open_closed(eng);
    } else {
      a.setZero();
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (grafield::bernoulli(eng, 0.4)) a(x, y) = 1.0;
    }
    if (!directed) {
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) a(y, x) = a(x, y);
    }
    if (a.sum() > 0.0) return grafield::Graph(a, directed);
  }
}

// Plain Legendre polynomial P_k(t) on [-1, 1] by the three-term recurrence.
inline double legendre(int k, double t) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = t;
  for (int i = 1; i < k; ++i) {
    const double next = ((2 * i + 1) * t * cur - i * prev) / (i + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

// Shifted orthonormal Legendre polynomial on (0, 1).
inline double shifted_legendre(int k, double u) {
  return std::sqrt(2.0 * k + 1.0) * legendre(k, 2.0 * u - 1.0);
}

inline double max_orthonormality_error(const grafield::LPBasis& b) {
  const auto& m = b.marginal;
  double worst = 0.0;
  for (int j = 0; j < b.m; ++j) {
    double mean = 0.0, norm = 0.0;
    for (int x : m.support) {
      mean += b.values(j, x) * m.probs[x];
      norm += b.values(j, x) * b.values(j, x) * m.probs[x];
    }
    worst = std::max({worst, std::fabs(mean), std::fabs(norm - 1.0)});
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int x : m.support) dot += b.values(j, x) * b.values(k, x) * m.probs[x];
      worst = std::max(worst, std::fabs(dot));
    }
  }
  return worst;
}

}  // namespace testing_support
