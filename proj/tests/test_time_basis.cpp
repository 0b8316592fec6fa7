#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "evopinn/time_basis.hpp"

using namespace evopinn;

TEST_CASE("uniform partition construction", "[time_basis]") {
    auto p = build_partition(0.0, 1.0, 2);
    REQUIRE(p.num_elements() == 2);
    CHECK(p.node(0) == 0.0);
    CHECK(p.node(1) == 0.5);
    CHECK(p.node(2) == 1.0);

    auto single = build_partition(0.0, 1.0, 1);
    REQUIRE(single.num_elements() == 1);
    CHECK(single.node(0) == 0.0);
    CHECK(single.node(1) == 1.0);

    auto quarter = build_partition(0.5, 1.0, 4);
    for (int m = 0; m < 4; ++m) CHECK(quarter.width(m) == Catch::Approx(0.125).margin(1e-15));

    CHECK_THROWS_AS(build_partition(1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_partition(1.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_partition(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("family sizes", "[time_basis]") {
    auto part = build_partition(0.0, 1.0, 5);
    CHECK(TimeBasis(part, BasisFamily::LagrangeP1).last_index() == 5);
    CHECK(TimeBasis(part, BasisFamily::LagrangeP2).last_index() == 10);
    CHECK(TimeBasis(part, BasisFamily::HermiteC1).last_index() == 11);
    CHECK(TimeBasis(part, BasisFamily::SplineC2).last_index() == 7);
}

TEST_CASE("hat function midpoint", "[time_basis]") {
    TimeBasis basis(build_partition(0.0, 1.0, 2), BasisFamily::LagrangeP1);
    auto [v, d] = basis.eval(0.25);
    CHECK(v[1] == Catch::Approx(0.5).margin(1e-15));
    CHECK(d[1] == Catch::Approx(2.0).margin(1e-15));
    CHECK(v[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(v[2] == 0.0);
}

TEST_CASE("out-of-domain evaluation rejected", "[time_basis]") {
    TimeBasis basis(build_partition(0.0, 1.0, 2), BasisFamily::LagrangeP1);
    Eigen::VectorXd v, d;
    CHECK_THROWS_AS(basis.eval(1.1, v, d), std::domain_error);
    CHECK_THROWS_AS(basis.eval(-0.1, v, d), std::domain_error);
    CHECK_NOTHROW(basis.eval(1.0 + 1e-13, v, d));  // tolerance band
}

TEST_CASE("partition of unity", "[time_basis]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2,
                     BasisFamily::SplineC2}) {
        TimeBasis basis(build_partition(0.0, 1.0, 4), fam);
        Eigen::VectorXd v, d;
        const int probes = fam == BasisFamily::SplineC2 ? 100 : 1000;
        for (int k = 0; k < probes; ++k) {
            basis.eval(uni(rng), v, d);
            CHECK(std::abs(v.sum() - 1.0) < 1e-12);
            CHECK(std::abs(d.sum()) < 1e-9);
        }
    }
}

TEST_CASE("compact support", "[time_basis]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto [fam, max_nonzero] :
         {std::pair{BasisFamily::LagrangeP1, 2}, std::pair{BasisFamily::LagrangeP2, 3},
          std::pair{BasisFamily::HermiteC1, 4}, std::pair{BasisFamily::SplineC2, 4}}) {
        TimeBasis basis(build_partition(0.0, 1.0, 6), fam);
        Eigen::VectorXd v, d;
        for (int k = 0; k < 50; ++k) {
            basis.eval(uni(rng), v, d);
            CHECK((v.array().abs() > 0).count() <= max_nonzero);
        }
    }
}

TEST_CASE("lagrange cardinality at interpolation nodes", "[time_basis]") {
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2}) {
        TimeBasis basis(build_partition(0.0, 2.0, 3), fam);
        Eigen::VectorXd v, d;
        for (int j = 0; j <= basis.last_index(); ++j) {
            basis.eval(basis.representative_time(j), v, d);
            for (int i = 0; i <= basis.last_index(); ++i)
                CHECK(std::abs(v[i] - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("hermite cardinality at the first node", "[time_basis]") {
    TimeBasis basis(build_partition(0.0, 1.0, 1), BasisFamily::HermiteC1);
    auto [v, d] = basis.eval(0.0);
    CHECK(v[0] == Catch::Approx(1.0).margin(1e-15));  // value DOF
    CHECK(d[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(v[1] == Catch::Approx(0.0).margin(1e-15));  // slope DOF
    CHECK(d[1] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("interface continuity of the C1 and C2 families", "[time_basis]") {
    for (auto fam : {BasisFamily::HermiteC1, BasisFamily::SplineC2}) {
        TimeBasis basis(build_partition(0.0, 1.0, 4), fam);
        Eigen::VectorXd vl, dl, vr, dr;
        for (int node = 1; node < 4; ++node) {
            const double t = basis.partition().node(node);
            basis.eval_in_element(t, node - 1, vl, dl);
            basis.eval_in_element(t, node, vr, dr);
            CHECK((vl - vr).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((dl - dr).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("interface derivative convention takes the left element", "[time_basis]") {
    TimeBasis basis(build_partition(0.0, 1.0, 2), BasisFamily::LagrangeP1);
    auto [v, d] = basis.eval(0.5);
    CHECK(d[0] == Catch::Approx(-2.0));  // left hat still sloping down
    CHECK(d[1] == Catch::Approx(2.0));
    CHECK(v[1] == Catch::Approx(1.0));
}

TEST_CASE("gauss rule small cases", "[time_basis]") {
    auto r1 = gauss_rule(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.nodes[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(r1.weights[0] == Catch::Approx(1.0).margin(1e-15));

    auto r2 = gauss_rule(2);
    CHECK(r2.nodes[0] == Catch::Approx((3.0 - std::sqrt(3.0)) / 6.0).margin(1e-14));
    CHECK(r2.nodes[1] == Catch::Approx((3.0 + std::sqrt(3.0)) / 6.0).margin(1e-14));
    CHECK(r2.weights[0] == Catch::Approx(0.5).margin(1e-14));
    CHECK(r2.weights[1] == Catch::Approx(0.5).margin(1e-14));

    CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_rule(17), std::invalid_argument);
}

TEST_CASE("gauss rule exactness up to degree 2K-1", "[time_basis]") {
    for (int k = 1; k <= 16; ++k) {
        auto rule = gauss_rule(k);
        CHECK(std::abs(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) - 1.0) <
              1e-14);
        for (int degree = 0; degree <= 2 * k - 1; ++degree) {
            double acc = 0.0;
            for (int q = 0; q < k; ++q) acc += rule.weights[q] * std::pow(rule.nodes[q], degree);
            const double exact = 1.0 / (degree + 1);
            CHECK(std::abs(acc - exact) / exact < 1e-13);
        }
    }
}
