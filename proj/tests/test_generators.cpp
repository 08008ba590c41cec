#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace grafield;

TEST_CASE("erdos-renyi sampler") {
  SECTION("p = 0 propagates the empty-graph error") {
    REQUIRE_THROWS_WITH(erdos_renyi(5, 0.0, false, 1), "empty graph");
  }
  SECTION("p = 1 gives the complete graph") {
    const Graph g = erdos_renyi(4, 1.0, false, 9);
    REQUIRE(g.total_weight() == 12.0);  // ordered count, zero diagonal
    for (int x = 0; x < 4; ++x) REQUIRE(g.weights()(x, x) == 0.0);
  }
  SECTION("parameter validation") {
    REQUIRE_THROWS_AS(erdos_renyi(1, 0.5, false, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(erdos_renyi(5, 1.5, false, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(erdos_renyi(5, -0.1, false, 1), std::invalid_argument);
  }
  SECTION("determinism") {
    const Graph a = erdos_renyi(20, 0.3, true, 1234);
    const Graph b = erdos_renyi(20, 0.3, true, 1234);
    REQUIRE((a.weights() - b.weights()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("undirected output is exactly symmetric") {
    const Graph g = erdos_renyi(15, 0.4, false, 5);
    REQUIRE((g.weights() - g.weights().transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("edge count matches the binomial expectation") {
    // n=100 undirected: 4950 pairs, expectation p * 4950
    double total_edges = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s)
      total_edges += erdos_renyi(100, 0.1, false, derive_stream(17, s)).total_weight() / 2.0;
    const double mean = total_edges / seeds;
    const double sigma = std::sqrt(4950 * 0.1 * 0.9 / seeds);
    REQUIRE(std::fabs(mean - 495.0) <= 3.0 * sigma);
  }
}

TEST_CASE("bipartite sampler") {
  SECTION("p = 1 fills exactly the cross blocks") {
    const Graph g = bipartite(2, 2, 1.0, 3);
    Eigen::MatrixXd want(4, 4);
    want << 0, 0, 1, 1,
            0, 0, 1, 1,
            1, 1, 0, 0,
            1, 1, 0, 0;
    REQUIRE((g.weights() - want).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("within-group cells stay zero for any seed") {
    for (std::uint64_t s : {1ull, 2ull, 77ull}) {
      const Graph g = bipartite(6, 5, 0.7, s);
      for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) REQUIRE(g.weights()(x, y) == 0.0);
      for (int x = 6; x < 11; ++x)
        for (int y = 6; y < 11; ++y) REQUIRE(g.weights()(x, y) == 0.0);
    }
  }
  SECTION("sampled field concentrates mass off the diagonal blocks") {
    const Graph g = bipartite(15, 15, 0.25, 4);
    const auto [mx, my] = marginals(g);
    const auto f = empirical_field(joint_pmf(g), mx, my);
    double diag_mass = 0, off_mass = 0;
    for (int x = 0; x < 30; ++x)
      for (int y = 0; y < 30; ++y) {
        const double mass = f.cell_values(x, y) * mx.probs[x] * my.probs[y];
        ((x < 15) == (y < 15) ? diag_mass : off_mass) += mass;
      }
    REQUIRE(diag_mass < off_mass);
  }
  SECTION("invalid sizes") {
    REQUIRE_THROWS_AS(bipartite(0, 3, 0.5, 1), std::invalid_argument);
  }
}

TEST_CASE("stochastic block model sampler") {
  SECTION("a single block reproduces the plain random graph draw-for-draw") {
    Eigen::MatrixXd p1(1, 1);
    p1 << 0.35;
    const Graph a = sbm({12}, p1, false, 21);
    const Graph b = erdos_renyi(12, 0.35, false, 21);
    REQUIRE((a.weights() - b.weights()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("asymmetric probabilities need a directed model") {
    Eigen::MatrixXd p(2, 2);
    p << 0.5, 0.2, 0.3, 0.5;
    REQUIRE_THROWS_AS(sbm({3, 3}, p, false, 1), std::invalid_argument);
    REQUIRE_NOTHROW(sbm({3, 3}, p, true, 1));
  }
  SECTION("probabilities outside [0, 1] are rejected") {
    Eigen::MatrixXd p(2, 2);
    p << 0.5, 1.2, 1.2, 0.5;
    REQUIRE_THROWS_AS(sbm({3, 3}, p, false, 1), std::invalid_argument);
  }
  SECTION("block densities match the binomial oracle") {
    Eigen::MatrixXd p(2, 2);
    p << 0.6, 0.1, 0.1, 0.1;
    double density_sum = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      const Graph g = sbm({40, 60}, p, false, derive_stream(23, s));
      density_sum += g.weights().topLeftCorner(40, 40).sum() / (40.0 * 39.0);
    }
    const double mean = density_sum / seeds;
    const double sigma = std::sqrt(0.6 * 0.4 / (780.0 * seeds));
    REQUIRE(std::fabs(mean - 0.6) <= 3.0 * sigma);
  }
}

TEST_CASE("expected graphs") {
  SECTION("er") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::er;
    spec.n = 3;
    spec.p = 0.5;
    const Graph g = expected_graph(spec);
    Eigen::MatrixXd want = Eigen::MatrixXd::Constant(3, 3, 0.5);
    want.diagonal().setZero();
    REQUIRE((g.weights() - want).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("bipartite") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::bipartite;
    spec.sizes = {2, 2};
    spec.p = 1.0;
    const Graph g = expected_graph(spec);
    REQUIRE(g.weights().topRightCorner(2, 2).minCoeff() == 1.0);
    REQUIRE(g.weights().topLeftCorner(2, 2).maxCoeff() == 0.0);
  }
  SECTION("sbm block-constant matrix") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::sbm;
    spec.sizes = {40, 60};
    spec.block_probs = Eigen::MatrixXd(2, 2);
    spec.block_probs << 0.6, 0.1, 0.1, 0.1;
    const Graph g = expected_graph(spec);
    REQUIRE(g.weights()(0, 1) == 0.6);
    REQUIRE(g.weights()(0, 99) == 0.1);
    REQUIRE(g.weights()(99, 0) == 0.1);
    REQUIRE(g.weights()(99, 98) == 0.1);
    REQUIRE(g.weights()(5, 5) == 0.0);
  }
  SECTION("null kind is not an expected graph") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::null_model;
    REQUIRE_THROWS_AS(expected_graph(spec), std::invalid_argument);
  }
  SECTION("sampled graphs average to the expected graph") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::er;
    spec.n = 10;
    spec.p = 0.3;
    const Graph want = expected_graph(spec);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(10, 10);
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s)
      mean += erdos_renyi(10, 0.3, false, derive_stream(29, s)).weights();
    mean /= seeds;
    // pooled over the 90 off-diagonal cells
    const double pooled_mean = mean.sum() / 90.0;
    const double sigma = std::sqrt(0.3 * 0.7 / (seeds * 90.0));
    REQUIRE(std::fabs(pooled_mean - 0.3) <= 3.0 * sigma);
    REQUIRE(mean.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }
}
