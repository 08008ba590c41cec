#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "grafield/density_field.hpp"
#include "grafield/rng.hpp"
#include "grafield/stats.hpp"

namespace grafield {

//! One coefficient of the LP correlogram with its standardized value and
//! the 95% null-band verdict |lp| > 1.96/sqrt(N).
struct CorrelogramEntry {
  int j = 0;
  int k = 0;
  double lp = 0.0;
  double standardized = 0.0;
  bool outside_band = false;
};

struct Correlogram {
  std::vector<CorrelogramEntry> entries;  // ordered by (j, k)
  double band_halfwidth = 0.0;
  double total_weight = 0.0;
};

inline Correlogram correlogram(const LPMatrix& lp) {
  if (!(lp.total_weight > 0.0))
    throw std::invalid_argument("correlogram: total weight must be positive");
  Correlogram c;
  c.total_weight = lp.total_weight;
  const double sqrt_n = std::sqrt(lp.total_weight);
  c.band_halfwidth = 1.96 / sqrt_n;
  c.entries.reserve(lp.coeffs.size());
  for (Eigen::Index j = 0; j < lp.coeffs.rows(); ++j)
    for (Eigen::Index k = 0; k < lp.coeffs.cols(); ++k) {
      const double v = lp.coeffs(j, k);
      c.entries.push_back({static_cast<int>(j) + 1, static_cast<int>(k) + 1, v,
                           sqrt_n * v, std::fabs(v) > c.band_halfwidth});
    }
  return c;
}

//! Chi-square test of the no-structure null based on N * sum of squared
//! coefficients. With the full grid the degrees of freedom equal the grid
//! size; with an adaptive selection they equal k_star and the result is
//! flagged post_selection (no claim of calibrated size in that case).
struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool reject_at_5pct = false;
  bool post_selection = false;
};

inline TestResult lpinfor_test(const LPMatrix& lp) {
  if (!(lp.total_weight > 1.0))
    throw std::invalid_argument("lpinfor_test: total weight must exceed 1");
  TestResult r;
  r.df = static_cast<int>(lp.coeffs.size());
  r.statistic = lp.total_weight * lpinfor(lp);
  r.p_value = chi_square_upper_tail(r.statistic, r.df);
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

inline TestResult lpinfor_test(const LPMatrix& lp, const Selection& sel) {
  if (!(lp.total_weight > 1.0))
    throw std::invalid_argument("lpinfor_test: total weight must exceed 1");
  TestResult r;
  r.post_selection = true;
  r.df = sel.k_star;
  if (sel.k_star == 0) return r;  // statistic 0, p-value 1
  r.statistic = lp.total_weight * lpinfor(lp, sel);
  r.p_value = chi_square_upper_tail(r.statistic, r.df);
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

//! Null-model sampler: N_edges i.i.d. directed edges (x, y) drawn from the
//! product p(x) p(y), weights accumulated into the adjacency. One edge
//! consumes two uniforms, x first then y; deterministic for a fixed seed.
inline Graph sample_null(const Marginal& mx, const Marginal& my,
                         std::int64_t n_edges, std::uint64_t seed) {
  if (mx.support.size() < 2 || my.support.size() < 2)
    throw std::invalid_argument("sample_null: degenerate marginal");
  if (mx.n() != my.n())
    throw std::invalid_argument("sample_null: marginals must share one node set");
  if (n_edges < 1) throw std::invalid_argument("sample_null: need at least one edge");
  auto eng = make_engine(seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(mx.n(), my.n());
  for (std::int64_t e = 0; e < n_edges; ++e) {
    const int x = quantile(mx, unit_open_closed(eng));
    const int y = quantile(my, unit_open_closed(eng));
    a(x, y) += 1.0;
  }
  return Graph(std::move(a), /*directed=*/true);
}

//! Moments of the standardized sample coefficients sqrt(N) * LP[j,k] over
//! repeated null draws. Replicate r uses the derived stream (seed, r).
struct CoefficientMoments {
  Eigen::MatrixXd mean;                     // grid of per-cell means
  std::optional<Eigen::MatrixXd> variance;  // absent when reps < 2
  double band_exceed_rate = 0.0;            // share of draws with |lp| > 1.96/sqrt(N)
  int reps = 0;
};

inline CoefficientMoments standardized_coefficient_distribution(
    const Marginal& mx, const Marginal& my, std::int64_t n_edges, int reps,
    std::uint64_t seed, int grid_j = 4, int grid_k = 4) {
  if (reps < 1) throw std::invalid_argument("need at least one replicate");
  CoefficientMoments out;
  out.reps = reps;
  out.mean = Eigen::MatrixXd::Zero(grid_j, grid_k);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(grid_j, grid_k);
  std::int64_t outside = 0;
  for (int r = 0; r < reps; ++r) {
    const Graph g = sample_null(mx, my, n_edges, derive_stream(seed, r));
    const auto [gx, gy] = marginals(g);
    const auto bx = build_basis(gx, grid_j);
    const auto by = build_basis(gy, grid_k);
    const LPMatrix lp = lp_coefficients(joint_pmf(g), bx, by);
    if (lp.coeffs.rows() < grid_j || lp.coeffs.cols() < grid_k)
      throw std::runtime_error("standardized_coefficient_distribution: basis rank collapsed");
    const double sqrt_n = std::sqrt(lp.total_weight);
    const double band = 1.96 / sqrt_n;
    for (int j = 0; j < grid_j; ++j)
      for (int k = 0; k < grid_k; ++k) {
        const double z = sqrt_n * lp.coeffs(j, k);
        out.mean(j, k) += z;
        sumsq(j, k) += z * z;
        if (std::fabs(lp.coeffs(j, k)) > band) ++outside;
      }
  }
  out.mean /= reps;
  if (reps >= 2) {
    Eigen::MatrixXd var(grid_j, grid_k);
    for (int j = 0; j < grid_j; ++j)
      for (int k = 0; k < grid_k; ++k)
        var(j, k) = (sumsq(j, k) - reps * out.mean(j, k) * out.mean(j, k)) / (reps - 1);
    out.variance = std::move(var);
  }
  out.band_exceed_rate =
      static_cast<double>(outside) / (static_cast<double>(reps) * grid_j * grid_k);
  return out;
}

}  // namespace grafield
