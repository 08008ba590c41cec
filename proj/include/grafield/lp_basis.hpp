#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "grafield/graph.hpp"

namespace grafield {

//! Orthonormal polynomial basis adapted to a discrete marginal. Row j-1 of
//! `values` holds T_j evaluated at every node (zero at zero-probability
//! nodes). Under the inner product <f,g> = sum_x f(x) g(x) p(x) the rows
//! have mean zero, unit norm and are mutually orthogonal. `breakpoints`
//! are the n+1 CDF values bounding the piecewise-constant cells of the
//! rescaled functions S_j(u) = T_j(Q(u)) on (0, 1].
struct LPBasis {
  Marginal marginal;
  int m = 0;
  Eigen::MatrixXd values;       // m x n
  Eigen::VectorXd breakpoints;  // n + 1

  //! S_j(u) for j in 1..m and u in (0, 1].
  double eval_S(int j, double u) const {
    if (j < 1 || j > m) throw std::out_of_range("eval_S: basis index out of range");
    return values(j - 1, quantile(marginal, u));
  }
};

//! First-degree basis function: sqrt(12) (Fmid(x) - 1/2) / sqrt(1 - sum p^3),
//! evaluated on the support, zero elsewhere.
inline Eigen::VectorXd t1(const Marginal& m) {
  if (m.support.size() < 2) throw std::invalid_argument("degenerate marginal");
  double cube_sum = 0.0;
  for (int x : m.support) cube_sum += m.probs[x] * m.probs[x] * m.probs[x];
  const double scale = std::sqrt(12.0) / std::sqrt(1.0 - cube_sum);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m.n());
  for (int x : m.support) t[x] = scale * (m.midcdf[x] - 0.5);
  return t;
}

namespace detail {

template <class VecA, class VecB>
double weighted_dot(const VecA& a, const VecB& b, const Marginal& m) {
  double s = 0.0;
  for (int x : m.support) s += a[x] * b[x] * m.probs[x];
  return s;
}

}  // namespace detail

//! Build the basis by modified Gram-Schmidt under the p-weighted inner
//! product, with one re-orthogonalization pass per function. Candidate j
//! is T_1 * T_{j-1}; in exact arithmetic this spans the same nested spaces
//! as the raw powers T_1^j (and produces the same functions, same signs)
//! while keeping the residuals well conditioned at high degree.
//! Construction stops at min(max_degree, |support|-1), or earlier if a
//! candidate's residual norm falls below drop_tol times its pre-projection
//! norm.
inline LPBasis build_basis(const Marginal& m, int max_degree,
                           double drop_tol = 1e-9) {
  if (max_degree < 1) throw std::invalid_argument("build_basis: max_degree must be >= 1");
  const int s = static_cast<int>(m.support.size());
  if (s < 2) throw std::invalid_argument("degenerate marginal");
  const int limit = std::min(max_degree, s - 1);
  const int n = m.n();

  const Eigen::VectorXd first = t1(m);
  Eigen::MatrixXd rows(limit, n);
  int built = 0;
  Eigen::VectorXd cand = first;
  for (int j = 1; j <= limit; ++j) {
    if (j > 1) cand = first.cwiseProduct(rows.row(built - 1).transpose());
    const double pre_norm = std::sqrt(detail::weighted_dot(cand, cand, m));
    Eigen::VectorXd r = cand;
    for (int pass = 0; pass < 2; ++pass) {
      double mean = 0.0;
      for (int x : m.support) mean += r[x] * m.probs[x];
      for (int x : m.support) r[x] -= mean;
      for (int k = 0; k < built; ++k) {
        const double proj = detail::weighted_dot(r, rows.row(k), m);
        for (int x : m.support) r[x] -= proj * rows(k, x);
      }
    }
    const double norm = std::sqrt(detail::weighted_dot(r, r, m));
    if (!(norm > drop_tol * pre_norm)) break;  // numerically dependent candidate
    rows.row(built) = (r / norm).transpose();
    for (int x = 0; x < n; ++x)
      if (m.probs[x] == 0.0) rows(built, x) = 0.0;
    ++built;
  }
  if (built == 0) throw std::invalid_argument("build_basis: no basis function survived");

  LPBasis b;
  b.marginal = m;
  b.m = built;
  b.values = rows.topRows(built);
  b.breakpoints.resize(n + 1);
  b.breakpoints[0] = 0.0;
  for (int x = 0; x < n; ++x) b.breakpoints[x + 1] = m.cdf[x];
  return b;
}

//! Basis for the discrete uniform distribution on n nodes. These are the
//! discrete Legendre polynomials; as n grows they converge to the shifted
//! orthonormal Legendre polynomials on (0, 1).
inline LPBasis discrete_legendre(int n, int max_degree) {
  if (n < 2) throw std::invalid_argument("discrete_legendre: need n >= 2");
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
  return build_basis(Marginal::from_probs(std::move(p)), max_degree);
}

//! Default number of basis functions when a caller does not specify one.
inline int default_degree(const Marginal& m) {
  return std::min(10, static_cast<int>(m.support.size()) - 1);
}

}  // namespace grafield
