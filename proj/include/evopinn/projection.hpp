#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evopinn/time_basis.hpp"

namespace evopinn {

/// Test space for the temporal Galerkin projection. TrialBasis tests with
/// psi_j = phi_j. LegendreDG tests with discontinuous per-element Legendre
/// polynomials of degree p_trial - 1 (p_trial * M rows); together with the
/// pinned initial coefficient this squares the system and restores the
/// p+1 convergence order that psi = phi loses for even-degree trials.
enum class TestSpaceKind { TrialBasis, LegendreDG };

/// Temporal Galerkin matrices A[j,i] = (phi_i', psi_j), B[j,i] = (phi_i, psi_j)
/// plus the element-quadrature grid used both for assembly and for projecting
/// time-dependent terms (source, nonlinearity) against the test functions.
struct GalerkinSystem {
    TimeBasis trial;
    TestSpaceKind test_kind = TestSpaceKind::TrialBasis;
    std::optional<TimeBasis> test_basis;  // set when test_kind == TrialBasis
    QuadratureRule quad;
    Eigen::MatrixXd A;               // rows x (N_trial+1)
    Eigen::MatrixXd B;
    std::vector<double> quad_times;  // global s_{m,k}, element-major
    Eigen::MatrixXd trial_vals_q;    // Q x (N_trial+1), phi_i(s_q)
    Eigen::MatrixXd test_weighted;   // rows x Q, psi_j(s_q) * w_k * h_m

    int rows() const { return static_cast<int>(A.rows()); }

    /// Representative time of test function j, the temporal atom used by the
    /// discrete residual distributions.
    double test_time(int j) const {
        if (test_kind == TestSpaceKind::TrialBasis) return test_basis->representative_time(j);
        const int p = trial.polynomial_degree();
        const int m = j / p, q = j % p;
        const auto& part = trial.partition();
        const QuadratureRule atoms = gauss_rule(p);
        return part.node(m) + part.width(m) * atoms.nodes[q];
    }

    /// Inclusive element range supporting test function j.
    std::pair<int, int> test_support(int j) const {
        if (test_kind == TestSpaceKind::TrialBasis) return test_basis->support_elements(j);
        const int m = j / trial.polynomial_degree();
        return {m, m};
    }
};

/// Per-element Gauss count whose rule is exact for the assembled integrands:
/// trial degree times the PDE nonlinearity degree, against the test degree.
inline int default_gauss_count(int trial_degree, int test_degree, int nonlinearity_degree = 1) {
    const int degree = trial_degree * std::max(1, nonlinearity_degree) + test_degree;
    return std::min(16, degree / 2 + 1);
}

namespace detail {

template <typename TestEval>
GalerkinSystem assemble_galerkin_impl(const TimeBasis& trial, TestSpaceKind kind,
                                      std::optional<TimeBasis> test_basis, int test_rows,
                                      const QuadratureRule& quad, TestEval&& test_eval) {
    const auto& part = trial.partition();
    const int num_elems = part.num_elements();
    const int k = quad.size();
    const int q_total = num_elems * k;

    GalerkinSystem sys{trial,
                       kind,
                       std::move(test_basis),
                       quad,
                       Eigen::MatrixXd::Zero(test_rows, trial.size()),
                       Eigen::MatrixXd::Zero(test_rows, trial.size()),
                       std::vector<double>(static_cast<std::size_t>(q_total)),
                       Eigen::MatrixXd::Zero(q_total, trial.size()),
                       Eigen::MatrixXd::Zero(test_rows, q_total)};

    Eigen::VectorXd tv, td;
    Eigen::VectorXd psi(test_rows);
    for (int m = 0; m < num_elems; ++m) {
        const double h = part.width(m);
        for (int g = 0; g < k; ++g) {
            const int q = m * k + g;
            const double t = part.node(m) + h * quad.nodes[g];
            const double w = h * quad.weights[g];
            sys.quad_times[q] = t;
            trial.eval(t, tv, td);
            test_eval(m, quad.nodes[g], t, psi);
            sys.trial_vals_q.row(q) = tv.transpose();
            sys.test_weighted.col(q) = psi * w;
            sys.A.noalias() += (psi * w) * td.transpose();
            sys.B.noalias() += (psi * w) * tv.transpose();
        }
    }
    return sys;
}

inline void legendre_values(int degree, double xi01, Eigen::VectorXd& out) {
    // Legendre P_0..P_degree on [0,1] via the reference variable 2*xi-1.
    const double x = 2.0 * xi01 - 1.0;
    out[0] = 1.0;
    if (degree >= 1) out[1] = x;
    for (int k = 2; k <= degree; ++k)
        out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k;
}

}  // namespace detail

/// Galerkin assembly with an explicit test basis (psi_j from a TimeBasis on
/// the same partition).
inline GalerkinSystem assemble_galerkin(const TimeBasis& trial, const TimeBasis& test,
                                        const QuadratureRule& quad) {
    if (!trial.partition().same_as(test.partition()))
        throw std::invalid_argument("assemble_galerkin: trial and test bases must share a partition");
    Eigen::VectorXd sv, sd;
    return detail::assemble_galerkin_impl(
        trial, TestSpaceKind::TrialBasis, test, test.size(), quad,
        [&](int, double, double t, Eigen::VectorXd& psi) {
            test.eval(t, sv, sd);
            psi = sv;
        });
}

/// Galerkin assembly against the discontinuous per-element Legendre test
/// space of degree p_trial - 1 (p_trial rows per element, element-major,
/// ordered by polynomial degree within each element).
inline GalerkinSystem assemble_galerkin_dg(const TimeBasis& trial, const QuadratureRule& quad) {
    const int p = trial.polynomial_degree();
    const int rows = p * trial.partition().num_elements();
    Eigen::VectorXd leg(p);
    return detail::assemble_galerkin_impl(
        trial, TestSpaceKind::LegendreDG, std::nullopt, rows, quad,
        [&](int m, double xi, double, Eigen::VectorXd& psi) {
            detail::legendre_values(p - 1, xi, leg);
            psi.setZero();
            psi.segment(m * p, p) = leg;
        });
}

/// Default Galerkin pairing: discontinuous Legendre tests for the Lagrange
/// trial families, psi = phi for the C1/C2 families.
inline GalerkinSystem make_galerkin(const TimeBasis& trial, int nonlinearity_degree = 1) {
    const int p = trial.polynomial_degree();
    if (trial.family() == BasisFamily::LagrangeP1 || trial.family() == BasisFamily::LagrangeP2) {
        const QuadratureRule quad = gauss_rule(default_gauss_count(p, p - 1, nonlinearity_degree));
        return assemble_galerkin_dg(trial, quad);
    }
    const QuadratureRule quad = gauss_rule(default_gauss_count(p, p, nonlinearity_degree));
    return assemble_galerkin(trial, trial, quad);
}

/// (f, psi_j) for all j of an explicit test basis.
inline Eigen::VectorXd project_rhs(const std::function<double(double)>& f_slice,
                                   const TimeBasis& test, const QuadratureRule& quad) {
    const auto& part = test.partition();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(test.size());
    Eigen::VectorXd sv, sd;
    for (int m = 0; m < part.num_elements(); ++m) {
        const double h = part.width(m);
        for (int g = 0; g < quad.size(); ++g) {
            const double t = part.node(m) + h * quad.nodes[g];
            const double w = h * quad.weights[g];
            test.eval(t, sv, sd);
            out.noalias() += (w * f_slice(t)) * sv;
        }
    }
    return out;
}

/// (f, psi_j) against the system's own test space, via its cached grid.
inline Eigen::VectorXd project_rhs(const std::function<double(double)>& f_slice,
                                   const GalerkinSystem& system) {
    const int q_total = static_cast<int>(system.quad_times.size());
    Eigen::VectorXd fq(q_total);
    for (int q = 0; q < q_total; ++q) fq[q] = f_slice(system.quad_times[q]);
    return system.test_weighted * fq;
}

/// Collocation grid s_{m,k} = t_{m-1} + h_m s_k with the basis value and
/// derivative matrices evaluated on it.
struct CollocationGrid {
    TimeBasis basis;
    int points_per_element = 0;
    std::vector<double> time_points;  // |S_t| = M*K, strictly increasing
    Eigen::MatrixXd D;                // |S_t| x (N+1), phi_i'(s_j)
    Eigen::MatrixXd Phi;              // |S_t| x (N+1), phi_i(s_j)

    int rows() const { return static_cast<int>(time_points.size()); }
};

/// Closure rows available beyond the collocation grid when squaring up the
/// direct ODE solve: the initial value, plus enforcing the equation at the
/// segment endpoints for the C1/C2 families.
inline int closure_row_count(BasisFamily family) {
    switch (family) {
        case BasisFamily::LagrangeP1:
        case BasisFamily::LagrangeP2: return 1;
        case BasisFamily::HermiteC1: return 2;
        case BasisFamily::SplineC2: return 3;
    }
    return 1;
}

inline CollocationGrid build_collocation(const TimeBasis& basis, int points_per_element) {
    if (points_per_element < 1 || points_per_element > 16)
        throw std::invalid_argument("build_collocation: K must be in [1,16]");
    const auto& part = basis.partition();
    const int m_hat = part.num_elements();
    const int total = m_hat * points_per_element;
    const int closure = closure_row_count(basis.family());
    if (total + closure < basis.size())
        throw std::invalid_argument(
            "build_collocation: underdetermined configuration: " + std::to_string(total) +
            " collocation points + " + std::to_string(closure) + " constraint rows < " +
            std::to_string(basis.size()) + " basis functions (" + to_string(basis.family()) +
            ", M=" + std::to_string(m_hat) + "); increase K or the element count");

    const QuadratureRule rule = gauss_rule(points_per_element);
    CollocationGrid grid{basis, points_per_element,
                         std::vector<double>(static_cast<std::size_t>(total)),
                         Eigen::MatrixXd::Zero(total, basis.size()),
                         Eigen::MatrixXd::Zero(total, basis.size())};
    Eigen::VectorXd v, d;
    for (int m = 0; m < m_hat; ++m) {
        const double h = part.width(m);
        for (int g = 0; g < points_per_element; ++g) {
            const int j = m * points_per_element + g;
            const double t = part.node(m) + h * rule.nodes[g];
            grid.time_points[j] = t;
            basis.eval(t, v, d);
            grid.Phi.row(j) = v.transpose();
            grid.D.row(j) = d.transpose();
        }
    }
    return grid;
}

namespace detail {

inline void check_solvable(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                           Eigen::Index size, const std::string& what) {
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14) || !lu.matrixLU().diagonal().array().isFinite().all()) {
        throw std::runtime_error(what + ": singular or near-singular system, rcond=" +
                                 std::to_string(rcond) + " for size " + std::to_string(size));
    }
}

}  // namespace detail

/// Direct solve of the scalar model ODE u' + lambda*u = f, u(t_begin) = 0, by
/// temporal Galerkin projection. The coefficient controlling u(t_begin) is
/// eliminated (hard initial constraint); with psi = phi the matching test row
/// 0 is dropped to square the system. Returns all N+1 coefficients with the
/// pinned one set to zero.
inline Eigen::VectorXd ode_solve_direct(const GalerkinSystem& system, double lambda,
                                        const std::function<double(double)>& f_slice) {
    const int n = system.trial.size();
    const Eigen::VectorXd rhs_full = project_rhs(f_slice, system);
    const Eigen::MatrixXd full = system.A + lambda * system.B;
    Eigen::MatrixXd reduced;
    Eigen::VectorXd rhs;
    if (system.rows() == n - 1) {
        reduced = full.rightCols(n - 1);
        rhs = rhs_full;
    } else if (system.rows() == n) {
        reduced = full.bottomRightCorner(n - 1, n - 1);
        rhs = rhs_full.tail(n - 1);
    } else {
        throw std::invalid_argument("ode_solve_direct(galerkin): test space has " +
                                    std::to_string(system.rows()) + " rows for " +
                                    std::to_string(n - 1) + " free coefficients");
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
    detail::check_solvable(lu, reduced.rows(), "ode_solve_direct(galerkin)");
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n);
    coeffs.tail(n - 1) = lu.solve(rhs);
    return coeffs;
}

/// Direct solve by collocation: rows (phi_i'(s_j) + lambda * phi_i(s_j)) u_i
/// = f(s_j), squared up with the initial-value row and, when more rows are
/// needed, the equation enforced at the segment endpoints.
inline Eigen::VectorXd ode_solve_direct(const CollocationGrid& grid, double lambda,
                                        const std::function<double(double)>& f_slice) {
    const int n = grid.basis.size();
    const int colloc_rows = grid.rows();
    if (colloc_rows > n)
        throw std::invalid_argument(
            "ode_solve_direct(collocation): grid has " + std::to_string(colloc_rows) +
            " points but only " + std::to_string(n) +
            " coefficients; least-squares collocation is not supported");
    Eigen::MatrixXd mat(n, n);
    Eigen::VectorXd rhs(n);
    mat.topRows(colloc_rows) = grid.D + lambda * grid.Phi;
    for (int j = 0; j < colloc_rows; ++j) rhs[j] = f_slice(grid.time_points[j]);

    const auto& part = grid.basis.partition();
    int row = colloc_rows;
    Eigen::VectorXd v, d;
    if (row < n) {
        grid.basis.eval(part.t_begin(), v, d);
        mat.row(row) = v.transpose();  // u(t_begin) = 0
        rhs[row] = 0.0;
        ++row;
    }
    const double endpoint[2] = {part.t_begin(), part.t_end()};
    for (int e = 0; e < 2 && row < n; ++e, ++row) {
        grid.basis.eval(endpoint[e], v, d);
        mat.row(row) = (d + lambda * v).transpose();
        rhs[row] = f_slice(endpoint[e]);
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat);
    detail::check_solvable(lu, mat.rows(), "ode_solve_direct(collocation)");
    return lu.solve(rhs);
}

/// u_N(t) for a coefficient vector in the given basis.
inline double eval_time_series(const TimeBasis& basis, const Eigen::VectorXd& coeffs,
                               double t) {
    Eigen::VectorXd v, d;
    basis.eval(t, v, d);
    return v.dot(coeffs);
}

}  // namespace evopinn
