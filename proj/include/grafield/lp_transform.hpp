#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "grafield/lp_basis.hpp"

namespace grafield {

//! Grid of LP transform coefficients LP[j,k] = E[T_j(X) T_k(Y)] under the
//! joint p(x,y) = A(x,y)/N, together with the bases that produced it and
//! the total weight N (the effective sample size for inference).
struct LPMatrix {
  Eigen::MatrixXd coeffs;  // m_x x m_y
  double total_weight = 0.0;
  LPBasis basis_x;
  LPBasis basis_y;
};

//! Cross-moments of the two basis sets under the joint distribution,
//! computed as two dense matrix products (no spectral decomposition).
inline LPMatrix lp_coefficients(const JointPMF& joint, const LPBasis& bx,
                                const LPBasis& by) {
  const auto n = joint.probs.rows();
  if (joint.probs.cols() != n || bx.values.cols() != n || by.values.cols() != n)
    throw std::invalid_argument("lp_coefficients: basis/joint dimension mismatch");
  LPMatrix lp;
  lp.coeffs = bx.values * joint.probs * by.values.transpose();
  lp.total_weight = joint.total_weight;
  lp.basis_x = bx;
  lp.basis_y = by;
  return lp;
}

//! Sum of squared coefficients; by Parseval this equals the squared L2
//! norm of the correlation field minus one when the grid is full rank.
inline double lpinfor(const LPMatrix& lp) { return lp.coeffs.squaredNorm(); }

}  // namespace grafield
