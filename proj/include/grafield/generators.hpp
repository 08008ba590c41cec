#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "grafield/graph.hpp"
#include "grafield/rng.hpp"

namespace grafield {

// Seeded samplers for the standard random-graph models. The per-pair draw
// order is normative so that a seed reproduces the same graph everywhere:
// row-major over ordered pairs (x, y) for directed models, row-major over
// x < y for undirected ones. No sampler produces self-loops.

enum class GeneratorKind { er, bipartite, sbm, null_model };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::er;
  int n = 0;                    // er
  double p = 0.0;               // er, bipartite
  std::vector<int> sizes;       // bipartite (2 groups), sbm (blocks)
  Eigen::MatrixXd block_probs;  // sbm
  bool directed = false;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument(std::string(what) + ": probability must lie in [0, 1]");
}

}  // namespace detail

inline Graph erdos_renyi(int n, double p, bool directed, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("erdos_renyi: need n >= 2");
  detail::check_probability(p, "erdos_renyi");
  auto eng = make_engine(seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  if (directed) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && bernoulli(eng, p)) a(x, y) = 1.0;
  } else {
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (bernoulli(eng, p)) a(x, y) = a(y, x) = 1.0;
  }
  return Graph(std::move(a), directed);
}

//! Undirected bipartite sampler: only cross-group pairs carry edges,
//! group-1 nodes first in the index order.
inline Graph bipartite(int n1, int n2, double p, std::uint64_t seed) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("bipartite: group sizes must be positive");
  detail::check_probability(p, "bipartite");
  auto eng = make_engine(seed);
  const int n = n1 + n2;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n1; ++x)
    for (int y = n1; y < n; ++y)
      if (bernoulli(eng, p)) a(x, y) = a(y, x) = 1.0;
  return Graph(std::move(a), /*directed=*/false);
}

//! Stochastic block model with contiguous blocks in index order.
inline Graph sbm(const std::vector<int>& sizes, const Eigen::MatrixXd& block_probs,
                 bool directed, std::uint64_t seed) {
  const int blocks = static_cast<int>(sizes.size());
  if (blocks < 1) throw std::invalid_argument("sbm: need at least one block");
  if (block_probs.rows() != blocks || block_probs.cols() != blocks)
    throw std::invalid_argument("sbm: probability matrix dimensions must match block count");
  for (int a = 0; a < blocks; ++a)
    for (int b = 0; b < blocks; ++b) detail::check_probability(block_probs(a, b), "sbm");
  if (!directed) {
    for (int a = 0; a < blocks; ++a)
      for (int b = a + 1; b < blocks; ++b)
        if (block_probs(a, b) != block_probs(b, a))
          throw std::invalid_argument("sbm: undirected model requires a symmetric probability matrix");
  }
  std::vector<int> block_of;
  for (int b = 0; b < blocks; ++b) {
    if (sizes[b] < 1) throw std::invalid_argument("sbm: block sizes must be positive");
    block_of.insert(block_of.end(), sizes[b], b);
  }
  const int n = static_cast<int>(block_of.size());
  if (n < 2) throw std::invalid_argument("sbm: need at least two nodes");

  auto eng = make_engine(seed);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  if (directed) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && bernoulli(eng, block_probs(block_of[x], block_of[y])))
          a(x, y) = 1.0;
  } else {
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (bernoulli(eng, block_probs(block_of[x], block_of[y])))
          a(x, y) = a(y, x) = 1.0;
  }
  return Graph(std::move(a), directed);
}

inline Graph sample_generator(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::er:
      return erdos_renyi(spec.n, spec.p, spec.directed, spec.seed);
    case GeneratorKind::bipartite:
      if (spec.sizes.size() != 2)
        throw std::invalid_argument("bipartite: need exactly two group sizes");
      return bipartite(spec.sizes[0], spec.sizes[1], spec.p, spec.seed);
    case GeneratorKind::sbm:
      return sbm(spec.sizes, spec.block_probs, spec.directed, spec.seed);
    default:
      throw std::invalid_argument("sample_generator: unsupported generator kind");
  }
}

//! Deterministic noise-free counterpart: the weighted graph whose entry
//! (x, y) is the edge probability of the model (zero diagonal).
inline Graph expected_graph(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::er: {
      if (spec.n < 2) throw std::invalid_argument("expected_graph: need n >= 2");
      detail::check_probability(spec.p, "expected_graph");
      Eigen::MatrixXd a = Eigen::MatrixXd::Constant(spec.n, spec.n, spec.p);
      a.diagonal().setZero();
      return Graph(std::move(a), spec.directed);
    }
    case GeneratorKind::bipartite: {
      if (spec.sizes.size() != 2)
        throw std::invalid_argument("expected_graph: bipartite needs two group sizes");
      const int n1 = spec.sizes[0], n2 = spec.sizes[1];
      if (n1 < 1 || n2 < 1) throw std::invalid_argument("expected_graph: group sizes must be positive");
      detail::check_probability(spec.p, "expected_graph");
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
      a.block(0, n1, n1, n2).setConstant(spec.p);
      a.block(n1, 0, n2, n1).setConstant(spec.p);
      return Graph(std::move(a), /*directed=*/false);
    }
    case GeneratorKind::sbm: {
      const int blocks = static_cast<int>(spec.sizes.size());
      if (blocks < 1 || spec.block_probs.rows() != blocks || spec.block_probs.cols() != blocks)
        throw std::invalid_argument("expected_graph: sbm sizes/probability matrix mismatch");
      for (int a = 0; a < blocks; ++a)
        for (int b = 0; b < blocks; ++b)
          detail::check_probability(spec.block_probs(a, b), "expected_graph");
      std::vector<int> block_of;
      for (int b = 0; b < blocks; ++b) {
        if (spec.sizes[b] < 1) throw std::invalid_argument("expected_graph: block sizes must be positive");
        block_of.insert(block_of.end(), spec.sizes[b], b);
      }
      const int n = static_cast<int>(block_of.size());
      Eigen::MatrixXd a(n, n);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          a(x, y) = x == y ? 0.0 : spec.block_probs(block_of[x], block_of[y]);
      return Graph(std::move(a), spec.directed);
    }
    default:
      throw std::invalid_argument("expected_graph: null kind not supported here");
  }
}

}  // namespace grafield
