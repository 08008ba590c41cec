#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grafield/density_field.hpp"

namespace grafield {

enum class MarginalMode { empirical, smoothed };
enum class SelectionMode { full_rank, selected };

//! Comparison coefficients of a marginal against the uniform reference:
//! LP[j] = sum_x p(x) T_j(x; uniform), with T_j the discrete Legendre
//! basis, for j = 1..min(10, n-1) unless a degree is given.
inline Eigen::VectorXd marginal_lp_coefficients(const Marginal& m, int degree) {
  if (m.n() < 2) throw std::invalid_argument("marginal_lp_coefficients: need n >= 2");
  const LPBasis dleg = discrete_legendre(m.n(), degree);
  return dleg.values * m.probs;
}

inline Eigen::VectorXd marginal_lp_coefficients(const Marginal& m) {
  return marginal_lp_coefficients(m, std::min(10, m.n() - 1));
}

//! p0(x) [1 + sum over kept components of c_j T_j(x; uniform)], clipped at
//! zero and renormalized.
inline Eigen::VectorXd reconstruct_marginal(const Eigen::VectorXd& coeffs,
                                            const std::vector<int>& kept, int n) {
  const LPBasis dleg = discrete_legendre(n, static_cast<int>(coeffs.size()));
  Eigen::VectorXd probs = Eigen::VectorXd::Ones(n);
  for (int j : kept) {
    if (j < 1 || j > coeffs.size())
      throw std::out_of_range("reconstruct_marginal: component index out of range");
    probs += coeffs[j - 1] * dleg.values.row(j - 1).transpose();
  }
  probs /= n;
  for (int x = 0; x < n; ++x)
    if (probs[x] < 0.0) probs[x] = 0.0;
  const double total = probs.sum();
  if (!(total > 0.0)) throw std::runtime_error("reconstruct_marginal: clipped to zero mass");
  return probs / total;
}

//! Marginal smoothed against the uniform reference, with the component
//! count chosen by the same penalized rule as the field (penalty uses the
//! graph total weight N).
struct SmoothedMarginal {
  Eigen::VectorXd base;          // uniform reference 1/n
  Eigen::VectorXd coefficients;  // full comparison-coefficient vector
  Marginal marginal;             // smoothed probabilities
  Selection selection;           // entries (j, 0)
};

inline SmoothedMarginal smooth_marginal(const Marginal& m, double total_weight) {
  if (m.n() < 2) throw std::invalid_argument("smooth_marginal: need n >= 2");
  SmoothedMarginal out;
  out.base = Eigen::VectorXd::Constant(m.n(), 1.0 / m.n());
  out.coefficients = marginal_lp_coefficients(m);
  std::vector<double> squared(out.coefficients.size());
  for (Eigen::Index j = 0; j < out.coefficients.size(); ++j)
    squared[j] = out.coefficients[j] * out.coefficients[j];
  const auto ranked = detail::select_by_criterion(squared, total_weight);
  out.selection.k_star = ranked.k_star;
  out.selection.criterion_trace = ranked.trace;
  std::vector<int> kept;
  for (int i = 0; i < ranked.k_star; ++i) {
    kept.push_back(ranked.order[i] + 1);
    out.selection.chosen.emplace_back(ranked.order[i] + 1, 0);
  }
  out.marginal = Marginal::from_probs(reconstruct_marginal(out.coefficients, kept, m.n()));
  return out;
}

//! Graphon estimate W(u, v) = scale * p(x) p(y) * C(u, v) on the cell grid
//! of the (possibly smoothed) marginals. With scale = N, empirical
//! marginals and a full-rank field this reproduces the adjacency exactly.
struct GraphonEstimate {
  DensityField field;             // clipped at zero
  Eigen::MatrixXd raw_cell_values;  // before clipping
  double scale = 1.0;
  bool scaled_by_total_weight = true;
  MarginalMode marginal_mode = MarginalMode::empirical;
  SelectionMode selection_mode = SelectionMode::selected;
  int field_k_star = 0;           // grid size when full rank
  int clipped_cells = 0;
  int over_one_cells = 0;         // only counted on the probability scale
};

inline GraphonEstimate estimate_graphon(const Graph& g,
                                        MarginalMode marginal_mode = MarginalMode::smoothed,
                                        SelectionMode selection_mode = SelectionMode::selected,
                                        bool scale_by_total_weight = true,
                                        int max_degree = 10) {
  const double N = g.total_weight();
  const auto [mx, my] = marginals(g);
  const int degree_x = selection_mode == SelectionMode::full_rank
                           ? static_cast<int>(mx.support.size()) - 1
                           : std::min(max_degree, static_cast<int>(mx.support.size()) - 1);
  const int degree_y = selection_mode == SelectionMode::full_rank
                           ? static_cast<int>(my.support.size()) - 1
                           : std::min(max_degree, static_cast<int>(my.support.size()) - 1);
  const LPBasis bx = build_basis(mx, degree_x);
  const LPBasis by = build_basis(my, degree_y);
  const LPMatrix lp = lp_coefficients(joint_pmf(g), bx, by);
  const Selection sel = selection_mode == SelectionMode::full_rank
                            ? full_selection(lp)
                            : select_components(lp);
  const DensityField c = reconstruct_field(lp, sel, bx, by);

  GraphonEstimate est;
  est.selection_mode = selection_mode;
  est.marginal_mode = marginal_mode;
  est.field_k_star = sel.k_star;
  est.scaled_by_total_weight = scale_by_total_weight;
  est.scale = scale_by_total_weight ? N : 1.0;

  Marginal px = mx, py = my;
  if (marginal_mode == MarginalMode::smoothed) {
    px = smooth_marginal(mx, N).marginal;
    py = smooth_marginal(my, N).marginal;
  }

  const int n = g.n();
  est.raw_cell_values.resize(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      est.raw_cell_values(x, y) = est.scale * px.probs[x] * py.probs[y] * c.cell_values(x, y);

  est.field.kind = FieldKind::reconstructed;
  est.field.cell_values = est.raw_cell_values;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (est.field.cell_values(x, y) < 0.0) {
        est.field.cell_values(x, y) = 0.0;
        ++est.clipped_cells;
      } else if (scale_by_total_weight && est.field.cell_values(x, y) > 1.0) {
        ++est.over_one_cells;  // reported, not clipped: signals misfit or weights
      }
    }
  est.field.probs_u = px.probs;
  est.field.probs_v = py.probs;
  est.field.breakpoints_u.resize(n + 1);
  est.field.breakpoints_u[0] = 0.0;
  est.field.breakpoints_u.tail(n) = px.cdf;
  est.field.breakpoints_v.resize(n + 1);
  est.field.breakpoints_v[0] = 0.0;
  est.field.breakpoints_v.tail(n) = py.cdf;
  return est;
}

inline Grid evaluate_graphon_grid(const GraphonEstimate& w, int resolution) {
  return evaluate_grid(w.field, resolution, /*clip_nonnegative=*/false);
}

}  // namespace grafield
