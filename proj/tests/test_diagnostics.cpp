#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace grafield;

namespace {

LPMatrix transform_of(const Graph& g, int dx = 4, int dy = 4) {
  const auto [mx, my] = marginals(g);
  return lp_coefficients(joint_pmf(g), build_basis(mx, dx), build_basis(my, dy));
}

LPMatrix synthetic_lp(const Eigen::MatrixXd& coeffs, double total_weight) {
  LPMatrix lp;
  lp.coeffs = coeffs;
  lp.total_weight = total_weight;
  return lp;
}

Marginal uniform(int n) {
  return Marginal::from_probs(Eigen::VectorXd::Constant(n, 1.0 / n));
}

}  // namespace

TEST_CASE("chi-square upper tail") {
  SECTION("even degrees of freedom have closed forms") {
    for (double x : {0.5, 1.0, 3.0, 5.991464547107979, 12.0, 30.0}) {
      REQUIRE(chi_square_upper_tail(x, 2) == Approx(std::exp(-x / 2)).epsilon(1e-12));
      REQUIRE(chi_square_upper_tail(x, 4) ==
              Approx((1.0 + x / 2) * std::exp(-x / 2)).epsilon(1e-12));
      REQUIRE(chi_square_upper_tail(x, 6) ==
              Approx((1.0 + x / 2 + x * x / 8) * std::exp(-x / 2)).epsilon(1e-12));
    }
  }
  SECTION("odd degrees of freedom via erfc and the survival recurrence") {
    for (double x : {0.2, 1.0, 3.841458820694124, 9.0, 25.0}) {
      const double q1 = std::erfc(std::sqrt(x / 2));
      REQUIRE(chi_square_upper_tail(x, 1) == Approx(q1).epsilon(1e-12));
      const double q3 = q1 + std::sqrt(2 * x / M_PI) * std::exp(-x / 2);
      REQUIRE(chi_square_upper_tail(x, 3) == Approx(q3).epsilon(1e-12));
    }
  }
  SECTION("classic 5% critical values") {
    REQUIRE(chi_square_upper_tail(3.841458820694124, 1) == Approx(0.05).epsilon(1e-10));
    REQUIRE(chi_square_upper_tail(5.991464547107979, 2) == Approx(0.05).epsilon(1e-10));
    REQUIRE(chi_square_upper_tail(18.307038053275146, 10) == Approx(0.05).epsilon(1e-10));
  }
  SECTION("bounds and errors") {
    REQUIRE(chi_square_upper_tail(0.0, 3) == 1.0);
    REQUIRE(chi_square_upper_tail(-2.0, 3) == 1.0);
    REQUIRE_THROWS_AS(chi_square_upper_tail(1.0, 0), std::domain_error);
  }
}

TEST_CASE("correlogram") {
  SECTION("product joint stays inside the band") {
    auto eng = make_engine(83);
    const auto mx = testing_support::random_marginal(8, eng);
    const auto my = testing_support::random_marginal(8, eng);
    const Graph g(400.0 * mx.probs * my.probs.transpose(), true);
    const auto c = correlogram(transform_of(g));
    for (const auto& e : c.entries) {
      REQUIRE(e.lp == Approx(0.0).margin(1e-12));
      REQUIRE_FALSE(e.outside_band);
    }
  }
  SECTION("band halfwidth at N = 400") {
    const auto c = correlogram(synthetic_lp(Eigen::MatrixXd::Zero(2, 2), 400.0));
    REQUIRE(c.band_halfwidth == Approx(0.098).margin(1e-15));
  }
  SECTION("band membership is a strict inequality, no tolerance") {
    Eigen::MatrixXd coeffs(1, 3);
    const double band = 1.96 / 20.0;
    coeffs << band, std::nextafter(band, 1.0), -std::nextafter(band, 1.0);
    const auto c = correlogram(synthetic_lp(coeffs, 400.0));
    REQUIRE_FALSE(c.entries[0].outside_band);
    REQUIRE(c.entries[1].outside_band);
    REQUIRE(c.entries[2].outside_band);
    REQUIRE(c.entries[1].standardized == Approx(20.0 * coeffs(0, 1)).margin(1e-15));
  }
  SECTION("entries are ordered by (j, k)") {
    const auto c = correlogram(synthetic_lp(Eigen::MatrixXd::Zero(2, 3), 100.0));
    REQUIRE(c.entries.size() == 6);
    REQUIRE(c.entries[0].j == 1);
    REQUIRE(c.entries[0].k == 1);
    REQUIRE(c.entries[4].j == 2);
    REQUIRE(c.entries[4].k == 2);
  }
  SECTION("null ER graphs exceed the band at roughly the nominal 5% rate") {
    long outside = 0, total = 0;
    for (int r = 0; r < 500; ++r) {
      const Graph g = erdos_renyi(50, 0.2, false, derive_stream(3, r));
      for (const auto& e : correlogram(transform_of(g)).entries) {
        ++total;
        if (e.outside_band) ++outside;
      }
    }
    const double rate = static_cast<double>(outside) / static_cast<double>(total);
    REQUIRE(rate >= 0.025);
    REQUIRE(rate <= 0.075);
  }
}

TEST_CASE("lpinfor chi-square test") {
  SECTION("all-zero coefficients accept with p-value one") {
    const auto r = lpinfor_test(synthetic_lp(Eigen::MatrixXd::Zero(3, 3), 50.0));
    REQUIRE(r.statistic == 0.0);
    REQUIRE(r.p_value == 1.0);
    REQUIRE_FALSE(r.reject_at_5pct);
    REQUIRE_FALSE(r.post_selection);
    REQUIRE(r.df == 9);
  }
  SECTION("empty selection short-circuits to the null verdict") {
    const auto r = lpinfor_test(synthetic_lp(Eigen::MatrixXd::Ones(2, 2), 50.0), Selection{});
    REQUIRE(r.statistic == 0.0);
    REQUIRE(r.df == 0);
    REQUIRE(r.p_value == 1.0);
    REQUIRE(r.post_selection);
  }
  SECTION("statistic is invariant under permuting the chosen set") {
    Eigen::MatrixXd c(2, 2);
    c << 0.3, -0.1, 0.05, 0.2;
    const auto lp = synthetic_lp(c, 80.0);
    Selection a, b;
    a.chosen = {{1, 1}, {2, 2}, {1, 2}};
    a.k_star = 3;
    b.chosen = {{1, 2}, {1, 1}, {2, 2}};
    b.k_star = 3;
    REQUIRE(lpinfor_test(lp, a).statistic == Approx(lpinfor_test(lp, b).statistic).margin(1e-15));
    REQUIRE(lpinfor_test(lp, a).df == 3);
  }
  SECTION("needs total weight above one") {
    REQUIRE_THROWS_AS(lpinfor_test(synthetic_lp(Eigen::MatrixXd::Zero(2, 2), 1.0)),
                      std::invalid_argument);
  }
  SECTION("full-grid rejection rate under the null is near nominal") {
    const auto m = uniform(50);
    int rejected = 0;
    for (int r = 0; r < 500; ++r) {
      const Graph g = sample_null(m, m, 5000, derive_stream(9, r));
      if (lpinfor_test(transform_of(g)).reject_at_5pct) ++rejected;
    }
    const double rate = rejected / 500.0;
    REQUIRE(rate >= 0.02);
    REQUIRE(rate <= 0.09);
  }
  SECTION("bipartite structure is rejected for every seed") {
    for (int s = 0; s < 50; ++s) {
      const Graph g = bipartite(15, 15, 0.25, derive_stream(42, s));
      const auto [mx, my] = marginals(g);
      const auto lp = lp_coefficients(joint_pmf(g), build_basis(mx, default_degree(mx)),
                                      build_basis(my, default_degree(my)));
      const auto r = lpinfor_test(lp, select_components(lp));
      REQUIRE(r.reject_at_5pct);
    }
  }
}

TEST_CASE("null-model sampler") {
  SECTION("total weight equals the edge count exactly") {
    const auto m = uniform(5);
    const Graph g = sample_null(m, m, 1234, 7);
    REQUIRE(g.total_weight() == 1234.0);
    REQUIRE(g.directed());
  }
  SECTION("same seed gives a bit-identical graph") {
    const auto m = uniform(6);
    const Graph a = sample_null(m, m, 500, 99);
    const Graph b = sample_null(m, m, 500, 99);
    REQUIRE((a.weights() - b.weights()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("binomial oracle on a 2x2 grid") {
    const auto m = uniform(2);
    const Graph g = sample_null(m, m, 1000000, 77);
    const double sigma = std::sqrt(1e6 * 0.25 * 0.75);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        REQUIRE(std::fabs(g.weights()(x, y) - 250000.0) <= 3.0 * sigma);
  }
  SECTION("degenerate marginals are rejected") {
    Eigen::VectorXd p(2);
    p << 0.0, 1.0;
    const auto degenerate = Marginal::from_probs(p);
    REQUIRE_THROWS_AS(sample_null(degenerate, uniform(2), 10, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_null(uniform(2), uniform(3), 10, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_null(uniform(2), uniform(2), 0, 1), std::invalid_argument);
  }
}

TEST_CASE("standardized coefficient moments") {
  SECTION("a single replicate reports no variance") {
    const auto m = uniform(10);
    const auto s = standardized_coefficient_distribution(m, m, 200, 1, 5, 2, 2);
    REQUIRE(s.reps == 1);
    REQUIRE_FALSE(s.variance.has_value());
  }
  SECTION("replicates are schedule-independent by construction") {
    const auto m = uniform(10);
    const auto a = standardized_coefficient_distribution(m, m, 300, 20, 11, 3, 3);
    const auto b = standardized_coefficient_distribution(m, m, 300, 20, 11, 3, 3);
    REQUIRE((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((*a.variance - *b.variance).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("null draws center near zero") {
    const auto m = uniform(20);
    const auto s = standardized_coefficient_distribution(m, m, 2000, 100, 13, 3, 3);
    REQUIRE(s.mean.cwiseAbs().maxCoeff() <= 0.35);  // 100 reps: ~3.5 sigma slack
  }
}
