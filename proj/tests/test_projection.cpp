#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "evopinn/projection.hpp"

using namespace evopinn;

namespace {

// Brute-force element-wise quadrature oracle for (phi_i^(da), psi_j^(db)),
// independent of the assembly path.
double brute_inner(const TimeBasis& trial, const GalerkinSystem& sys, int j, int i,
                   bool trial_deriv) {
    const auto& part = trial.partition();
    const auto rule = gauss_rule(16);  // 4 panels of 16 points per element
    double acc = 0.0;
    Eigen::VectorXd tv, td;
    for (int m = 0; m < part.num_elements(); ++m) {
        for (int panel = 0; panel < 4; ++panel) {
            const double a = part.node(m) + part.width(m) * panel / 4.0;
            const double h = part.width(m) / 4.0;
            for (int q = 0; q < rule.size(); ++q) {
                const double t = a + h * rule.nodes[q];
                trial.eval(t, tv, td);
                double psi;
                if (sys.test_kind == TestSpaceKind::TrialBasis) {
                    Eigen::VectorXd sv, sd;
                    sys.test_basis->eval(t, sv, sd);
                    psi = sv[j];
                } else {
                    const int p = trial.polynomial_degree();
                    const int elem = j / p;
                    if (elem != m) {
                        psi = 0.0;
                    } else {
                        const double xi = (t - part.node(m)) / part.width(m);
                        Eigen::VectorXd leg(p);
                        detail::legendre_values(p - 1, xi, leg);
                        psi = leg[j % p];
                    }
                }
                acc += h * rule.weights[q] * psi * (trial_deriv ? td[i] : tv[i]);
            }
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("hat mass and stiffness entries", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 4), BasisFamily::LagrangeP1);
    auto sys = assemble_galerkin(basis, basis, gauss_rule(3));
    const double h = 0.25;
    for (int i = 1; i < 4; ++i) {
        CHECK(sys.B(i, i) == Catch::Approx(2.0 * h / 3.0).margin(1e-14));
        CHECK(sys.B(i, i - 1) == Catch::Approx(h / 6.0).margin(1e-14));
        CHECK(sys.B(i, i + 1) == Catch::Approx(h / 6.0).margin(1e-14));
        CHECK(std::abs(sys.A(i, i)) < 1e-14);
    }
    CHECK((sys.B - sys.B.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("derivative rows of Lagrange trials sum to zero", "[projection]") {
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2}) {
        TimeBasis basis(build_partition(0.0, 1.0, 3), fam);
        for (auto sys : {assemble_galerkin(basis, basis, gauss_rule(4)),
                         assemble_galerkin_dg(basis, gauss_rule(4))}) {
            for (int j = 0; j < sys.rows(); ++j)
                CHECK(std::abs(sys.A.row(j).sum()) < 1e-13);
        }
    }
}

TEST_CASE("assembly matches brute-force quadrature", "[projection]") {
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2,
                     BasisFamily::HermiteC1, BasisFamily::SplineC2}) {
        TimeBasis basis(build_partition(0.0, 1.0, 3), fam);
        auto check = [&](const GalerkinSystem& sys) {
            for (int j = 0; j < sys.rows(); ++j)
                for (int i = 0; i < basis.size(); ++i) {
                    CHECK(std::abs(sys.A(j, i) - brute_inner(basis, sys, j, i, true)) < 1e-12);
                    CHECK(std::abs(sys.B(j, i) - brute_inner(basis, sys, j, i, false)) < 1e-12);
                }
        };
        check(make_galerkin(basis));
        check(assemble_galerkin(basis, basis,
                                gauss_rule(default_gauss_count(basis.polynomial_degree(),
                                                               basis.polynomial_degree()))));
    }
}

TEST_CASE("disjoint supports give zero entries", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 6), BasisFamily::SplineC2);
    auto sys = assemble_galerkin(basis, basis, gauss_rule(4));
    for (int j = 0; j < sys.rows(); ++j) {
        auto [jl, jh] = sys.test_support(j);
        for (int i = 0; i < basis.size(); ++i) {
            auto [il, ih] = basis.support_elements(i);
            if (ih < jl || il > jh) {
                CHECK(sys.A(j, i) == 0.0);
                CHECK(sys.B(j, i) == 0.0);
            }
        }
    }
}

TEST_CASE("mismatched partitions rejected", "[projection]") {
    TimeBasis a(build_partition(0.0, 1.0, 3), BasisFamily::LagrangeP1);
    TimeBasis b(build_partition(0.0, 1.0, 4), BasisFamily::LagrangeP1);
    CHECK_THROWS_AS(assemble_galerkin(a, b, gauss_rule(2)), std::invalid_argument);
}

TEST_CASE("rhs projection", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 4), BasisFamily::LagrangeP1);
    auto quad = gauss_rule(4);

    auto zero = project_rhs([](double) { return 0.0; }, basis, quad);
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

    auto ones = project_rhs([](double) { return 1.0; }, basis, quad);
    for (int j = 1; j < 4; ++j) CHECK(ones[j] == Catch::Approx(0.25).margin(1e-14));

    TimeBasis single(build_partition(0.0, 1.0, 1), BasisFamily::LagrangeP1);
    auto ramp = project_rhs([](double t) { return t; }, single, quad);
    CHECK(ramp[0] == Catch::Approx(1.0 / 6.0).margin(1e-14));  // int t(1-t)
}

TEST_CASE("collocation grid values", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 2), BasisFamily::LagrangeP2);
    auto grid = build_collocation(basis, 2);
    REQUIRE(grid.rows() == 4);
    const double g0 = (3.0 - std::sqrt(3.0)) / 6.0;
    CHECK(grid.time_points[0] == Catch::Approx(0.5 * g0).margin(1e-12));
    CHECK(grid.time_points[1] == Catch::Approx(0.5 * (1.0 - g0)).margin(1e-12));
    CHECK(grid.time_points[2] == Catch::Approx(0.5 + 0.5 * g0).margin(1e-12));
    CHECK(grid.time_points[3] == Catch::Approx(1.0 - 0.5 * g0).margin(1e-12));
    for (int j = 0; j < grid.rows(); ++j)
        CHECK(grid.Phi.row(j).sum() == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("collocation midpoints for K=1", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 3), BasisFamily::LagrangeP1);
    auto grid = build_collocation(basis, 1);
    REQUIRE(grid.rows() == 3);
    CHECK(grid.time_points[0] == Catch::Approx(1.0 / 6.0));
    CHECK(grid.time_points[1] == Catch::Approx(0.5));
    CHECK(grid.time_points[2] == Catch::Approx(5.0 / 6.0));
}

TEST_CASE("underdetermined collocation rejected with DOF explanation", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 2), BasisFamily::HermiteC1);
    try {
        build_collocation(basis, 1);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("underdetermined") != std::string::npos);
        CHECK(std::string(err.what()).find("basis functions") != std::string::npos);
    }
}

TEST_CASE("ode solve trivial cases", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 4), BasisFamily::LagrangeP1);
    auto zerof = [](double) { return 0.0; };
    CHECK(ode_solve_direct(make_galerkin(basis), 0.0, zerof).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(ode_solve_direct(build_collocation(basis, 1), 0.0, zerof).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("singular system reports condition estimate", "[projection]") {
    TimeBasis basis(build_partition(0.0, 1.0, 1), BasisFamily::LagrangeP1);
    auto sys = make_galerkin(basis);
    // lambda chosen so A + lambda*B vanishes on the single free coefficient
    const double lambda = -sys.A(0, 1) / sys.B(0, 1);
    try {
        ode_solve_direct(sys, lambda, [](double) { return 1.0; });
        FAIL("expected runtime_error");
    } catch (const std::runtime_error& err) {
        CHECK(std::string(err.what()).find("rcond") != std::string::npos);
    }
}

namespace {

struct RateResult {
    double ratio_geomean;
    double finest_error;
};

// Dense-grid max error under mesh halving for u' + u = exp(-t), u = t e^{-t}.
RateResult ode_rate(BasisFamily fam, bool collocation) {
    auto f = [](double t) { return std::exp(-t); };
    auto uex = [](double t) { return t * std::exp(-t); };
    double prev = 0.0, acc = 1.0;
    int count = 0, last = 0;
    double finest = 0.0;
    for (int m_hat : {4, 8, 16, 32}) {
        TimeBasis basis(build_partition(0.0, 1.0, m_hat), fam);
        Eigen::VectorXd coeffs;
        if (collocation) {
            const int k =
                basis.polynomial_degree() == 1 || fam == BasisFamily::SplineC2 ? 1 : 2;
            coeffs = ode_solve_direct(build_collocation(basis, k), 1.0, f);
        } else {
            coeffs = ode_solve_direct(make_galerkin(basis), 1.0, f);
        }
        double err = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = i / 400.0;
            err = std::max(err, std::abs(eval_time_series(basis, coeffs, t) - uex(t)));
        }
        if (count > 0) {
            acc *= prev / err;
            ++last;
        }
        prev = err;
        finest = err;
        ++count;
    }
    return {std::pow(acc, 1.0 / last), finest};
}

}  // namespace

TEST_CASE("ode convergence orders", "[projection]") {
    for (bool colloc : {false, true}) {
        auto p1 = ode_rate(BasisFamily::LagrangeP1, colloc);
        CHECK(p1.ratio_geomean > 4.0 * 0.8);
        CHECK(p1.ratio_geomean < 4.0 * 1.2);
        auto p2 = ode_rate(BasisFamily::LagrangeP2, colloc);
        CHECK(p2.ratio_geomean > 8.0 * 0.8);
        CHECK(p2.ratio_geomean < 8.0 * 1.2);
    }
    // the C1/C2 families converge at least as fast
    for (bool colloc : {false, true}) {
        CHECK(ode_rate(BasisFamily::HermiteC1, colloc).ratio_geomean > 6.4);
        CHECK(ode_rate(BasisFamily::SplineC2, colloc).ratio_geomean > 6.4);
    }
}

TEST_CASE("terminal value for constant forcing", "[projection]") {
    // u' + u = 1, u(0) = 0 -> u(T) = 1 - e^{-T}
    auto onef = [](double) { return 1.0; };
    const double exact = 1.0 - std::exp(-1.0);
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2}) {
        double prev_err = 0.0;
        for (int m_hat : {8, 16}) {
            TimeBasis basis(build_partition(0.0, 1.0, m_hat), fam);
            auto coeffs = ode_solve_direct(make_galerkin(basis), 1.0, onef);
            const double err = std::abs(eval_time_series(basis, coeffs, 1.0) - exact);
            if (prev_err > 0.0) {
                const double gain = prev_err / err;
                const double expected = std::pow(2.0, basis.polynomial_degree() + 1);
                CHECK(gain > expected * 0.8);
            }
            prev_err = err;
        }
    }
}

TEST_CASE("collocation and galerkin solutions agree", "[projection]") {
    auto f = [](double t) { return std::exp(-t); };
    auto uex = [](double t) { return t * std::exp(-t); };
    for (auto fam : {BasisFamily::LagrangeP1, BasisFamily::LagrangeP2,
                     BasisFamily::HermiteC1, BasisFamily::SplineC2}) {
        TimeBasis basis(build_partition(0.0, 1.0, 16), fam);
        auto cg = ode_solve_direct(make_galerkin(basis), 1.0, f);
        const int k = basis.polynomial_degree() == 1 || fam == BasisFamily::SplineC2 ? 1 : 2;
        auto cc = ode_solve_direct(build_collocation(basis, k), 1.0, f);
        // nodal agreement within the sum of the two individual error bounds
        double bound = 0.0, gap = 0.0;
        for (int i = 0; i <= 16; ++i) {
            const double t = i / 16.0;
            const double ug = eval_time_series(basis, cg, t);
            const double uc = eval_time_series(basis, cc, t);
            bound = std::max(bound, std::abs(ug - uex(t)) + std::abs(uc - uex(t)));
            gap = std::max(gap, std::abs(ug - uc));
        }
        CHECK(gap <= bound + 1e-15);
    }
}
