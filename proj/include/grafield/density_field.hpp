#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grafield/lp_transform.hpp"

namespace grafield {

enum class FieldKind { empirical, reconstructed };

//! Piecewise-constant function on (0,1]^2. Cell (x, y) covers the
//! rectangle (F_X(x-1), F_X(x)] x (F_Y(y-1), F_Y(y)] and carries measure
//! p(x) p(y); zero-probability nodes occupy zero-width cells with value 0.
struct DensityField {
  Eigen::VectorXd breakpoints_u;  // n_x + 1 CDF values
  Eigen::VectorXd breakpoints_v;  // n_y + 1
  Eigen::MatrixXd cell_values;    // n_x x n_y
  Eigen::VectorXd probs_u;        // cell masses along u
  Eigen::VectorXd probs_v;
  FieldKind kind = FieldKind::empirical;

  //! Value at a point of (0,1]^2 (cell lookup through the quantile rule).
  double value_at(double u, double v) const {
    if (!(u > 0.0) || u > 1.0 || !(v > 0.0) || v > 1.0)
      throw std::domain_error("DensityField: point outside (0,1]^2");
    return cell_values(locate(breakpoints_u, u), locate(breakpoints_v, v));
  }

 private:
  static Eigen::Index locate(const Eigen::VectorXd& bp, double t) {
    const double* begin = bp.data() + 1;  // skip the leading 0
    const double* end = bp.data() + bp.size();
    const double* it = std::lower_bound(begin, end, t);
    if (it == end) --it;  // accumulated CDF may fall a few ulp short of 1
    return it - begin;
  }
};

//! Ranked coefficient subset chosen by the penalized cumulative-sum rule.
struct Selection {
  std::vector<std::pair<int, int>> chosen;  // (j, k), 1-based, by decreasing lp^2
  int k_star = 0;
  std::vector<double> criterion_trace;
};

//! Ratio field p(x,y) / (p(x) p(y)) on the support cells.
inline DensityField empirical_field(const JointPMF& joint, const Marginal& mx,
                                    const Marginal& my) {
  const auto nx = mx.n(), ny = my.n();
  if (joint.probs.rows() != nx || joint.probs.cols() != ny)
    throw std::invalid_argument("empirical_field: marginal/joint dimension mismatch");
  DensityField f;
  f.kind = FieldKind::empirical;
  f.cell_values = Eigen::MatrixXd::Zero(nx, ny);
  for (int x : mx.support)
    for (int y : my.support)
      f.cell_values(x, y) = joint.probs(x, y) / (mx.probs[x] * my.probs[y]);
  f.probs_u = mx.probs;
  f.probs_v = my.probs;
  f.breakpoints_u.resize(nx + 1);
  f.breakpoints_u[0] = 0.0;
  f.breakpoints_u.tail(nx) = mx.cdf;
  f.breakpoints_v.resize(ny + 1);
  f.breakpoints_v[0] = 0.0;
  f.breakpoints_v.tail(ny) = my.cdf;
  return f;
}

namespace detail {

// Shared core of the selection rule: rank squared values, penalize the
// cumulative sum by k log(N)/N, keep the first argmax (0 if never positive).
struct RankedSelection {
  std::vector<int> order;  // indices into the squared-value list, ranked
  int k_star = 0;
  std::vector<double> trace;
};

inline RankedSelection select_by_criterion(const std::vector<double>& squared,
                                           double total_weight) {
  if (!(total_weight > 1.0))
    throw std::invalid_argument("select_components: total weight must exceed 1");
  RankedSelection out;
  const int count = static_cast<int>(squared.size());
  out.order.resize(count);
  for (int i = 0; i < count; ++i) out.order[i] = i;
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    if (squared[a] != squared[b]) return squared[a] > squared[b];
    return a < b;  // deterministic tie-break: original (row-major) order
  });
  const double penalty = std::log(total_weight) / total_weight;
  out.trace.resize(count);
  double cum = 0.0, best = 0.0;
  for (int k = 0; k < count; ++k) {
    cum += squared[out.order[k]];
    out.trace[k] = cum - (k + 1) * penalty;
    if (out.trace[k] > best) {
      best = out.trace[k];
      out.k_star = k + 1;
    }
  }
  return out;
}

}  // namespace detail

//! Adaptive filtering of an LP coefficient grid: pool all (j,k) cells,
//! rank by squared value, maximize cumulative sum minus k log(N)/N.
inline Selection select_components(const LPMatrix& lp) {
  const int mx = static_cast<int>(lp.coeffs.rows());
  const int my = static_cast<int>(lp.coeffs.cols());
  std::vector<double> squared(static_cast<size_t>(mx) * my);
  for (int j = 0; j < mx; ++j)
    for (int k = 0; k < my; ++k) squared[j * my + k] = lp.coeffs(j, k) * lp.coeffs(j, k);
  const auto ranked = detail::select_by_criterion(squared, lp.total_weight);
  Selection sel;
  sel.k_star = ranked.k_star;
  sel.criterion_trace = ranked.trace;
  sel.chosen.reserve(ranked.k_star);
  for (int i = 0; i < ranked.k_star; ++i) {
    const int idx = ranked.order[i];
    sel.chosen.emplace_back(idx / my + 1, idx % my + 1);
  }
  return sel;
}

//! Selection over every coefficient of the grid, ranked the same way but
//! never truncated. Used for full-rank reconstruction.
inline Selection full_selection(const LPMatrix& lp) {
  Selection sel;
  const int mx = static_cast<int>(lp.coeffs.rows());
  const int my = static_cast<int>(lp.coeffs.cols());
  sel.k_star = mx * my;
  sel.chosen.reserve(sel.k_star);
  for (int j = 1; j <= mx; ++j)
    for (int k = 1; k <= my; ++k) sel.chosen.emplace_back(j, k);
  return sel;
}

//! Sum of squared coefficients restricted to a selection.
inline double lpinfor(const LPMatrix& lp, const Selection& sel) {
  double s = 0.0;
  for (auto [j, k] : sel.chosen) {
    const double c = lp.coeffs(j - 1, k - 1);
    s += c * c;
  }
  return s;
}

//! Inverse transform: 1 + sum over the selected coefficients of
//! LP[j,k] T_j(x) T_k(y) on support cells, 0 on zero-measure cells. Every
//! truncation integrates to 1; values may be negative.
inline DensityField reconstruct_field(const LPMatrix& lp, const Selection& sel,
                                      const LPBasis& bx, const LPBasis& by) {
  const int nx = bx.marginal.n(), ny = by.marginal.n();
  Eigen::MatrixXd masked = Eigen::MatrixXd::Zero(lp.coeffs.rows(), lp.coeffs.cols());
  for (auto [j, k] : sel.chosen) {
    if (j < 1 || j > lp.coeffs.rows() || k < 1 || k > lp.coeffs.cols())
      throw std::out_of_range("reconstruct_field: selection refers to a missing coefficient");
    masked(j - 1, k - 1) = lp.coeffs(j - 1, k - 1);
  }
  if (masked.rows() != bx.values.rows() || masked.cols() != by.values.rows())
    throw std::invalid_argument("reconstruct_field: basis/coefficient dimension mismatch");

  DensityField f;
  f.kind = FieldKind::reconstructed;
  f.cell_values = bx.values.transpose() * masked * by.values;
  for (int x : bx.marginal.support)
    for (int y : by.marginal.support) f.cell_values(x, y) += 1.0;
  // zero-measure cells stay at value 0 (T_j vanishes there already)
  f.probs_u = bx.marginal.probs;
  f.probs_v = by.marginal.probs;
  f.breakpoints_u = bx.breakpoints;
  f.breakpoints_v = by.breakpoints;
  return f;
}

//! Exact cell quadrature of the squared field.
inline double integrate_squared(const DensityField& f) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < f.cell_values.rows(); ++x)
    for (Eigen::Index y = 0; y < f.cell_values.cols(); ++y) {
      const double v = f.cell_values(x, y);
      s += v * v * f.probs_u[x] * f.probs_v[y];
    }
  return s;
}

//! Exact cell quadrature of the field itself (1 for any proper field).
inline double integrate(const DensityField& f) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < f.cell_values.rows(); ++x)
    for (Eigen::Index y = 0; y < f.cell_values.cols(); ++y)
      s += f.cell_values(x, y) * f.probs_u[x] * f.probs_v[y];
  return s;
}

//! Field values sampled at the midpoints of a uniform resolution^2 grid.
struct Grid {
  int resolution = 0;
  bool clipped = false;
  Eigen::MatrixXd values;  // resolution x resolution, row i = u index
};

inline Grid evaluate_grid(const DensityField& f, int resolution,
                          bool clip_nonnegative = false) {
  if (resolution < 2) throw std::invalid_argument("evaluate_grid: resolution must be >= 2");
  Grid g;
  g.resolution = resolution;
  g.clipped = clip_nonnegative;
  g.values.resize(resolution, resolution);
  for (int i = 0; i < resolution; ++i) {
    const double u = (i + 0.5) / resolution;
    for (int j = 0; j < resolution; ++j) {
      const double v = (j + 0.5) / resolution;
      double val = f.value_at(u, v);
      if (clip_nonnegative && val < 0.0) val = 0.0;
      g.values(i, j) = val;
    }
  }
  return g;
}

}  // namespace grafield
