#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grafield {

//! A directed or undirected graph stored as a dense nonnegative weight
//! matrix. weights(x, y) is the weight of the edge x -> y; for undirected
//! graphs the matrix must be exactly symmetric. Immutable after
//! construction and safe to share across threads.
class Graph {
 public:
  Graph(Eigen::MatrixXd weights, bool directed,
        std::vector<std::string> node_labels = {})
      : weights_(std::move(weights)),
        directed_(directed),
        labels_(std::move(node_labels)) {
    const auto n = weights_.rows();
    if (n < 1 || weights_.cols() != n)
      throw std::invalid_argument("Graph: weight matrix must be square and non-empty");
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != n)
      throw std::invalid_argument("Graph: label count does not match node count");
    total_weight_ = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y) {
        const double w = weights_(x, y);
        if (!std::isfinite(w) || w < 0.0)
          throw std::invalid_argument("Graph: weights must be finite and nonnegative");
        total_weight_ += w;
      }
    if (total_weight_ <= 0.0) throw std::invalid_argument("empty graph");
    if (!directed_) {
      for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y)
          if (weights_(x, y) != weights_(y, x))
            throw std::invalid_argument("Graph: undirected graph requires a symmetric weight matrix");
    }
  }

  int n() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  bool directed() const { return directed_; }
  double total_weight() const { return total_weight_; }
  const std::vector<std::string>& node_labels() const { return labels_; }

  //! Relabel nodes in decreasing total-degree order (in + out weight),
  //! ties broken by original index. The basis and the field depend on node
  //! order through the marginal CDF, so this is an explicit opt-in.
  Graph order_by_degree() const {
    const int nn = n();
    std::vector<int> perm(nn);
    for (int i = 0; i < nn; ++i) perm[i] = i;
    Eigen::VectorXd deg = weights_.rowwise().sum() + weights_.colwise().sum().transpose();
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return deg[a] > deg[b]; });
    Eigen::MatrixXd w(nn, nn);
    for (int x = 0; x < nn; ++x)
      for (int y = 0; y < nn; ++y) w(x, y) = weights_(perm[x], perm[y]);
    std::vector<std::string> labels;
    if (!labels_.empty()) {
      labels.resize(nn);
      for (int i = 0; i < nn; ++i) labels[i] = labels_[perm[i]];
    }
    return Graph(std::move(w), directed_, std::move(labels));
  }

 private:
  Eigen::MatrixXd weights_;
  bool directed_;
  std::vector<std::string> labels_;
  double total_weight_;
};

//! Discrete probability distribution over node indices 0..n-1, with its
//! CDF, mid-CDF (F - p/2) and the list of positive-probability nodes.
struct Marginal {
  Eigen::VectorXd probs;
  Eigen::VectorXd cdf;
  Eigen::VectorXd midcdf;
  std::vector<int> support;

  int n() const { return static_cast<int>(probs.size()); }

  static Marginal from_probs(Eigen::VectorXd p) {
    const auto n = p.size();
    if (n < 1) throw std::invalid_argument("Marginal: empty probability vector");
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(p[i]) || p[i] < 0.0)
        throw std::invalid_argument("Marginal: probabilities must be finite and nonnegative");
      total += p[i];
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw std::invalid_argument("Marginal: probabilities must sum to 1");
    Marginal m;
    m.probs = std::move(p);
    m.cdf.resize(n);
    m.midcdf.resize(n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += m.probs[i];
      m.cdf[i] = acc;
      m.midcdf[i] = acc - 0.5 * m.probs[i];
      if (m.probs[i] > 0.0) m.support.push_back(static_cast<int>(i));
    }
    return m;
  }
};

//! The edge-normalized joint distribution p(x,y) = A(x,y)/N together with
//! the total weight N.
struct JointPMF {
  Eigen::MatrixXd probs;
  double total_weight = 0.0;
};

//! Row (sender) and column (receiver) marginals of the normalized
//! adjacency. Accumulation runs in plain index order on both axes, so a
//! symmetric matrix yields bit-identical marginals.
inline std::pair<Marginal, Marginal> marginals(const Graph& g) {
  const double N = g.total_weight();
  const int n = g.n();
  Eigen::VectorXd px = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd py = Eigen::VectorXd::Zero(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) px[x] += g.weights()(x, y);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) py[y] += g.weights()(x, y);
  px /= N;
  py /= N;
  return {Marginal::from_probs(std::move(px)), Marginal::from_probs(std::move(py))};
}

inline JointPMF joint_pmf(const Graph& g) {
  return {g.weights() / g.total_weight(), g.total_weight()};
}

//! Left-continuous inverse of the CDF: the smallest node index x with
//! F(x) >= u, for u in (0, 1]. Never returns a zero-probability node.
inline int quantile(const Marginal& m, double u) {
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("quantile: u must lie in (0, 1]");
  const auto n = m.cdf.size();
  const double* begin = m.cdf.data();
  const double* it = std::lower_bound(begin, begin + n, u);
  if (it == begin + n) return m.support.back();  // u above the accumulated total
  return static_cast<int>(it - begin);
}

}  // namespace grafield
