#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "evopinn/field_net.hpp"
#include "evopinn/reference_ac1d.hpp"

namespace evopinn {

// ---------------------------------------------------------------------------
// Spatial domains

enum class DomainKind { Interval, Box, Ball };

struct Domain {
    DomainKind kind = DomainKind::Interval;
    int dim = 1;
    Eigen::VectorXd lo, hi;  // interval / box bounds
    double radius = 1.0;     // ball, centered at the origin

    static Domain interval(double a, double b) {
        Domain d;
        d.kind = DomainKind::Interval;
        d.dim = 1;
        d.lo = Eigen::VectorXd::Constant(1, a);
        d.hi = Eigen::VectorXd::Constant(1, b);
        return d;
    }
    static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
        Domain d;
        d.kind = DomainKind::Box;
        d.dim = static_cast<int>(lo.size());
        d.lo = std::move(lo);
        d.hi = std::move(hi);
        return d;
    }
    static Domain unit_ball(int dim) {
        Domain d;
        d.kind = DomainKind::Ball;
        d.dim = dim;
        return d;
    }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const {
        if (x.size() != dim) return false;
        if (kind == DomainKind::Ball) return x.norm() <= radius + tol;
        for (int j = 0; j < dim; ++j)
            if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
        return true;
    }

    double volume() const {
        if (kind == DomainKind::Ball)
            return std::pow(M_PI, dim / 2.0) * std::pow(radius, dim) /
                   std::tgamma(dim / 2.0 + 1.0);
        return (hi - lo).prod();
    }

    Eigen::MatrixXd sample_uniform(int count, std::mt19937_64& rng) const {
        Eigen::MatrixXd pts(count, dim);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < count; ++i) {
            if (kind == DomainKind::Ball) {
                // uniform direction, radius proportional to U^{1/d}
                Eigen::VectorXd dir(dim);
                double nrm = 0.0;
                do {
                    for (int j = 0; j < dim; ++j) dir[j] = normal(rng);
                    nrm = dir.norm();
                } while (nrm < 1e-12);
                const double r = radius * std::pow(uni(rng), 1.0 / dim);
                pts.row(i) = (r / nrm) * dir.transpose();
            } else {
                for (int j = 0; j < dim; ++j)
                    pts(i, j) = lo[j] + (hi[j] - lo[j]) * uni(rng);
            }
        }
        return pts;
    }

    Eigen::MatrixXd sample_boundary(int count, std::mt19937_64& rng) const {
        Eigen::MatrixXd pts(count, dim);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_int_distribution<int> face(0, 2 * dim - 1);
        for (int i = 0; i < count; ++i) {
            switch (kind) {
                case DomainKind::Interval:
                    pts(i, 0) = uni(rng) < 0.5 ? lo[0] : hi[0];
                    break;
                case DomainKind::Box: {
                    for (int j = 0; j < dim; ++j)
                        pts(i, j) = lo[j] + (hi[j] - lo[j]) * uni(rng);
                    const int f = face(rng);
                    pts(i, f / 2) = (f % 2 == 0) ? lo[f / 2] : hi[f / 2];
                    break;
                }
                case DomainKind::Ball: {
                    Eigen::VectorXd dir(dim);
                    double nrm = 0.0;
                    do {
                        for (int j = 0; j < dim; ++j) dir[j] = normal(rng);
                        nrm = dir.norm();
                    } while (nrm < 1e-12);
                    pts.row(i) = (radius / nrm) * dir.transpose();
                    break;
                }
            }
        }
        return pts;
    }
};

// ---------------------------------------------------------------------------
// Operators and problems

enum class OperatorKind { Convection, AllenCahn1d, ParabolicVarCoef, AllenCahnBall, Heat2dPeak };

/// Which field jets the spatial operator consumes.
struct OperatorNeeds {
    bool value = false;
    bool gradient = false;
    bool laplacian = false;
};

/// Space-time jets of a scalar field u(x,t) over a batch of points and a list
/// of times: each matrix is B x T.
struct SpaceTimeJets {
    Eigen::MatrixXd u, ut, lap;
    std::vector<Eigen::MatrixXd> grad;
};

/// Benchmark evolution problem u_t + N[u] = f with initial data g and the
/// spec'd boundary behavior. Manufactured problems carry exact solutions and
/// their jets for residual oracles.
struct PdeProblem {
    std::string id;
    OperatorKind op = OperatorKind::Convection;
    Domain domain;
    double t_begin = 0.0, t_end = 1.0;
    double beta = 0.0, c1_sq = 0.0, c2 = 0.0, omega = 0.0;
    bool linear = true;  // N linear in u and time-independent (fast-path eligible)
    int nonlinearity_degree = 1;
    bool periodic = false;

    bool source_is_zero = false;
    /// f on a batch X (B x d) across times (vector of size T) -> out (B x T)
    std::function<void(const Eigen::MatrixXd&, const std::vector<double>&, Eigen::MatrixXd&)>
        source;
    ScalarFieldFn initial;  // g with jets
    bool has_exact = false;
    std::function<double(const Eigen::VectorXd&, double)> exact;
    bool has_exact_jets = false;
    std::function<void(const Eigen::MatrixXd&, const std::vector<double>&, SpaceTimeJets&)>
        exact_jets;
    /// Dirichlet boundary values for the soft-penalty path (defaults to exact)
    std::function<double(const Eigen::VectorXd&, double)> boundary_value;

    OperatorNeeds needs() const {
        switch (op) {
            case OperatorKind::Convection: return {false, true, false};
            case OperatorKind::AllenCahn1d: return {true, false, true};
            case OperatorKind::ParabolicVarCoef: return {false, true, true};
            case OperatorKind::AllenCahnBall: return {true, false, true};
            case OperatorKind::Heat2dPeak: return {false, false, true};
        }
        return {};
    }

    double source_at(const Eigen::VectorXd& x, double t) const {
        if (source_is_zero) return 0.0;
        Eigen::MatrixXd out;
        source(x.transpose(), {t}, out);
        return out(0, 0);
    }
};

/// N[u] on space-time jets, columnwise per time.
inline void apply_operator(const PdeProblem& problem, const Eigen::MatrixXd& X,
                           const SpaceTimeJets& jets, Eigen::MatrixXd& out) {
    switch (problem.op) {
        case OperatorKind::Convection:
            out = problem.beta * jets.grad[0];
            return;
        case OperatorKind::AllenCahn1d:
            out = -problem.c1_sq * jets.lap +
                  problem.c2 * (jets.u.array().cube() - jets.u.array()).matrix();
            return;
        case OperatorKind::ParabolicVarCoef: {
            const Eigen::ArrayXd a = 1.0 + 0.5 * X.rowwise().squaredNorm().array();
            out = -(jets.lap.array().colwise() * a).matrix();
            for (int j = 0; j < problem.domain.dim; ++j)
                out -= (jets.grad[j].array().colwise() * X.col(j).array()).matrix();
            return;
        }
        case OperatorKind::AllenCahnBall:
            out = -jets.lap + (jets.u.array().cube() - jets.u.array()).matrix();
            return;
        case OperatorKind::Heat2dPeak:
            out = -jets.lap;
            return;
    }
}

/// Linear fast path: N applied to each coefficient output of the network,
/// N(omega_i)(x), B x (N+1). Only valid for linear time-independent N.
inline void apply_linear(const PdeProblem& problem, const Eigen::MatrixXd& X,
                         const NetJets& jets, Eigen::MatrixXd& out) {
    switch (problem.op) {
        case OperatorKind::Convection:
            out = problem.beta * jets.dx[0];
            return;
        case OperatorKind::ParabolicVarCoef: {
            const Eigen::ArrayXd a = 1.0 + 0.5 * X.rowwise().squaredNorm().array();
            out = Eigen::MatrixXd::Zero(jets.value.rows(), jets.value.cols());
            for (int j = 0; j < problem.domain.dim; ++j) {
                out -= (jets.dxx[j].array().colwise() * a).matrix();
                out -= (jets.dx[j].array().colwise() * X.col(j).array()).matrix();
            }
            return;
        }
        case OperatorKind::Heat2dPeak:
            out = Eigen::MatrixXd::Zero(jets.value.rows(), jets.value.cols());
            for (int j = 0; j < problem.domain.dim; ++j) out -= jets.dxx[j];
            return;
        default:
            throw std::logic_error("apply_linear: operator is not linear");
    }
}

/// Adjoint of apply_linear: accumulates bar contributions into the jet
/// adjoints for a given output adjoint (B x (N+1)).
inline void apply_linear_adjoint(const PdeProblem& problem, const Eigen::MatrixXd& X,
                                 const Eigen::MatrixXd& bar, NetJets& jet_bar) {
    switch (problem.op) {
        case OperatorKind::Convection:
            jet_bar.dx[0] += problem.beta * bar;
            return;
        case OperatorKind::ParabolicVarCoef: {
            const Eigen::ArrayXd a = 1.0 + 0.5 * X.rowwise().squaredNorm().array();
            for (int j = 0; j < problem.domain.dim; ++j) {
                jet_bar.dxx[j] -= (bar.array().colwise() * a).matrix();
                jet_bar.dx[j] -= (bar.array().colwise() * X.col(j).array()).matrix();
            }
            return;
        }
        case OperatorKind::Heat2dPeak:
            for (int j = 0; j < problem.domain.dim; ++j) jet_bar.dxx[j] -= bar;
            return;
        default:
            throw std::logic_error("apply_linear_adjoint: operator is not linear");
    }
}

// ---------------------------------------------------------------------------
// Built-in problems

namespace detail {

/// u = sin(c(t) * (|x|^2 - 1)) with c(t) = sin(2 pi w t): the manufactured
/// field shared by the ball benchmarks.
inline void ball_manufactured_jets(double w, const Eigen::MatrixXd& X,
                                   const std::vector<double>& times, SpaceTimeJets& jets,
                                   bool need_grad) {
    const int B = static_cast<int>(X.rows());
    const int T = static_cast<int>(times.size());
    const int d = static_cast<int>(X.cols());
    const Eigen::ArrayXd sq = X.rowwise().squaredNorm().array();
    const Eigen::ArrayXd rho = sq - 1.0;
    jets.u.resize(B, T);
    jets.ut.resize(B, T);
    jets.lap.resize(B, T);
    jets.grad.assign(need_grad ? d : 0, Eigen::MatrixXd(B, T));
    for (int k = 0; k < T; ++k) {
        const double c = std::sin(2.0 * M_PI * w * times[k]);
        const double cp = 2.0 * M_PI * w * std::cos(2.0 * M_PI * w * times[k]);
        const Eigen::ArrayXd s = (c * rho).sin();
        const Eigen::ArrayXd co = (c * rho).cos();
        jets.u.col(k) = s;
        jets.ut.col(k) = co * cp * rho;
        jets.lap.col(k) = -4.0 * c * c * sq * s + 2.0 * d * c * co;
        for (int j = 0; j < d && need_grad; ++j)
            jets.grad[j].col(k) = co * c * 2.0 * X.col(j).array();
    }
}

/// u = exp(-beta ((x1-t-1/4)^2 + (x2-t-1/4)^2)), the traveling peak.
inline void peak_jets(double beta, const Eigen::MatrixXd& X, const std::vector<double>& times,
                      SpaceTimeJets& jets, bool need_grad) {
    const int B = static_cast<int>(X.rows());
    const int T = static_cast<int>(times.size());
    jets.u.resize(B, T);
    jets.ut.resize(B, T);
    jets.lap.resize(B, T);
    jets.grad.assign(need_grad ? 2 : 0, Eigen::MatrixXd(B, T));
    for (int k = 0; k < T; ++k) {
        const Eigen::ArrayXd r1 = X.col(0).array() - times[k] - 0.25;
        const Eigen::ArrayXd r2 = X.col(1).array() - times[k] - 0.25;
        const Eigen::ArrayXd u = (-beta * (r1.square() + r2.square())).exp();
        jets.u.col(k) = u;
        jets.ut.col(k) = 2.0 * beta * (r1 + r2) * u;
        jets.lap.col(k) = (4.0 * beta * beta * (r1.square() + r2.square()) - 4.0 * beta) * u;
        if (need_grad) {
            jets.grad[0].col(k) = -2.0 * beta * r1 * u;
            jets.grad[1].col(k) = -2.0 * beta * r2 * u;
        }
    }
}

}  // namespace detail

/// u_t + beta u_x = 0 on [0, 2 pi] x [0, 1], periodic, u0 = sin(x).
inline PdeProblem make_convection(double beta) {
    PdeProblem p;
    p.id = "convection";
    p.op = OperatorKind::Convection;
    p.domain = Domain::interval(0.0, 2.0 * M_PI);
    p.beta = beta;
    p.linear = true;
    p.periodic = true;
    p.source_is_zero = true;
    p.source = [](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                  Eigen::MatrixXd& out) { out.setZero(X.rows(), ts.size()); };
    p.initial = [](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                   ScalarJetBatch& out) {
        out.value = X.col(0).array().sin();
        if (need_grad) out.grad = X.col(0).array().cos();
        if (need_hess) out.hess_diag = -X.col(0).array().sin();
    };
    p.has_exact = true;
    const double b = beta;
    p.exact = [b](const Eigen::VectorXd& x, double t) { return std::sin(x[0] - b * t); };
    p.has_exact_jets = true;
    p.exact_jets = [b](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                       SpaceTimeJets& jets) {
        const int T = static_cast<int>(ts.size());
        jets.u.resize(X.rows(), T);
        jets.ut.resize(X.rows(), T);
        jets.lap.resize(X.rows(), T);
        jets.grad.assign(1, Eigen::MatrixXd(X.rows(), T));
        for (int k = 0; k < T; ++k) {
            const Eigen::ArrayXd ph = X.col(0).array() - b * ts[k];
            jets.u.col(k) = ph.sin();
            jets.ut.col(k) = -b * ph.cos();
            jets.grad[0].col(k) = ph.cos();
            jets.lap.col(k) = -ph.sin();
        }
    };
    return p;
}

namespace detail {
inline void ac1d_base(PdeProblem& p) {
    p.op = OperatorKind::AllenCahn1d;
    p.domain = Domain::interval(-1.0, 1.0);
    p.c1_sq = 1e-4;
    p.c2 = 5.0;
    p.linear = false;
    p.nonlinearity_degree = 3;
    p.periodic = true;
    p.initial = [](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                   ScalarJetBatch& out) {
        const Eigen::ArrayXd x = X.col(0).array();
        const Eigen::ArrayXd c = (M_PI * x).cos();
        const Eigen::ArrayXd s = (M_PI * x).sin();
        out.value = x.square() * c;
        if (need_grad) out.grad = 2.0 * x * c - M_PI * x.square() * s;
        if (need_hess)
            out.hess_diag =
                2.0 * c - 4.0 * M_PI * x * s - M_PI * M_PI * x.square() * c;
    };
}
}  // namespace detail

/// Allen-Cahn benchmark: u_t - c1sq u_xx + c2 (u^3 - u) = 0, periodic on
/// [-1, 1], u0 = x^2 cos(pi x). The error reference is a spectral solve.
inline PdeProblem make_allen_cahn_1d() {
    PdeProblem p;
    p.id = "allen-cahn-1d";
    detail::ac1d_base(p);
    p.source_is_zero = true;
    p.source = [](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                  Eigen::MatrixXd& out) { out.setZero(X.rows(), ts.size()); };
    p.has_exact = true;
    auto ref = std::make_shared<std::shared_ptr<AllenCahn1dReference>>();
    const double c1_sq = p.c1_sq, c2 = p.c2, t_end = p.t_end;
    p.exact = [ref, c1_sq, c2, t_end](const Eigen::VectorXd& x, double t) {
        if (!*ref) *ref = std::make_shared<AllenCahn1dReference>(c1_sq, c2, t_end);
        return (*ref)->value(x[0], t);
    };
    return p;
}

/// Synthetic-source variant of the Allen-Cahn operator with the closed-form
/// solution u = e^{-t} x^2 cos(pi x); used for residual oracles.
inline PdeProblem make_allen_cahn_1d_manufactured() {
    PdeProblem p;
    p.id = "allen-cahn-1d-manufactured";
    detail::ac1d_base(p);
    p.source_is_zero = false;
    const double c1_sq = p.c1_sq, c2 = p.c2;
    auto base_jets = [](const Eigen::MatrixXd& X, Eigen::ArrayXd& g, Eigen::ArrayXd& gxx) {
        const Eigen::ArrayXd x = X.col(0).array();
        const Eigen::ArrayXd c = (M_PI * x).cos();
        const Eigen::ArrayXd s = (M_PI * x).sin();
        g = x.square() * c;
        gxx = 2.0 * c - 4.0 * M_PI * x * s - M_PI * M_PI * x.square() * c;
    };
    p.source = [c1_sq, c2, base_jets](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                                      Eigen::MatrixXd& out) {
        Eigen::ArrayXd g, gxx;
        base_jets(X, g, gxx);
        out.resize(X.rows(), ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double e = std::exp(-ts[k]);
            out.col(static_cast<int>(k)) =
                -e * g - c1_sq * e * gxx + c2 * (e * e * e * g.cube() - e * g);
        }
    };
    p.has_exact = true;
    p.exact = [](const Eigen::VectorXd& x, double t) {
        return std::exp(-t) * x[0] * x[0] * std::cos(M_PI * x[0]);
    };
    p.has_exact_jets = true;
    p.exact_jets = [base_jets](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                               SpaceTimeJets& jets) {
        Eigen::ArrayXd g, gxx;
        base_jets(X, g, gxx);
        const Eigen::ArrayXd x = X.col(0).array();
        const Eigen::ArrayXd c = (M_PI * x).cos();
        const Eigen::ArrayXd s = (M_PI * x).sin();
        const Eigen::ArrayXd gx = 2.0 * x * c - M_PI * x.square() * s;
        const int T = static_cast<int>(ts.size());
        jets.u.resize(X.rows(), T);
        jets.ut.resize(X.rows(), T);
        jets.lap.resize(X.rows(), T);
        jets.grad.assign(1, Eigen::MatrixXd(X.rows(), T));
        for (int k = 0; k < T; ++k) {
            const double e = std::exp(-ts[k]);
            jets.u.col(k) = e * g;
            jets.ut.col(k) = -e * g;
            jets.lap.col(k) = e * gxx;
            jets.grad[0].col(k) = e * gx;
        }
    };
    return p;
}

/// u_t - div(a grad u) = f with a = 1 + |x|^2/2 on the unit ball, zero
/// initial and boundary data, manufactured u = sin(sin(2 pi w t)(|x|^2-1)).
inline PdeProblem make_parabolic_varcoef(int dim, double omega = 3.0) {
    PdeProblem p;
    p.id = "parabolic-varcoef";
    p.op = OperatorKind::ParabolicVarCoef;
    p.domain = Domain::unit_ball(dim);
    p.omega = omega;
    p.linear = true;
    const double w = omega;
    p.source = [w](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                   Eigen::MatrixXd& out) {
        SpaceTimeJets jets;
        detail::ball_manufactured_jets(w, X, ts, jets, true);
        const Eigen::ArrayXd a = 1.0 + 0.5 * X.rowwise().squaredNorm().array();
        out = jets.ut - (jets.lap.array().colwise() * a).matrix();
        for (int j = 0; j < X.cols(); ++j)
            out -= (jets.grad[j].array().colwise() * X.col(j).array()).matrix();
    };
    p.initial = zero_field();  // sin(0 * rho) = 0
    p.has_exact = true;
    p.exact = [w](const Eigen::VectorXd& x, double t) {
        return std::sin(std::sin(2.0 * M_PI * w * t) * (x.squaredNorm() - 1.0));
    };
    p.has_exact_jets = true;
    p.exact_jets = [w](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                       SpaceTimeJets& jets) {
        detail::ball_manufactured_jets(w, X, ts, jets, true);
    };
    return p;
}

/// u_t - lap u + u^3 - u = f on the unit ball with the same manufactured
/// solution as the variable-coefficient problem.
inline PdeProblem make_allen_cahn_ball(int dim, double omega = 3.0) {
    PdeProblem p;
    p.id = "allen-cahn-ball";
    p.op = OperatorKind::AllenCahnBall;
    p.domain = Domain::unit_ball(dim);
    p.omega = omega;
    p.linear = false;
    p.nonlinearity_degree = 3;
    const double w = omega;
    p.source = [w](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                   Eigen::MatrixXd& out) {
        SpaceTimeJets jets;
        detail::ball_manufactured_jets(w, X, ts, jets, false);
        out = jets.ut - jets.lap + (jets.u.array().cube() - jets.u.array()).matrix();
    };
    p.initial = zero_field();
    p.has_exact = true;
    p.exact = [w](const Eigen::VectorXd& x, double t) {
        return std::sin(std::sin(2.0 * M_PI * w * t) * (x.squaredNorm() - 1.0));
    };
    p.has_exact_jets = true;
    p.exact_jets = [w](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                       SpaceTimeJets& jets) {
        detail::ball_manufactured_jets(w, X, ts, jets, false);
    };
    return p;
}

/// u_t - lap u = f on [0,1]^2 x [0, 1/2] with the traveling-peak solution
/// exp(-beta |x - (t+1/4) 1|^2); low regularity for large beta.
inline PdeProblem make_heat2d_peak(double beta) {
    PdeProblem p;
    p.id = "heat-2d-peak";
    p.op = OperatorKind::Heat2dPeak;
    p.domain = Domain::box(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
    p.t_end = 0.5;
    p.beta = beta;
    p.linear = true;
    const double b = beta;
    p.source = [b](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                   Eigen::MatrixXd& out) {
        SpaceTimeJets jets;
        detail::peak_jets(b, X, ts, jets, false);
        out = jets.ut - jets.lap;
    };
    p.initial = [b](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                    ScalarJetBatch& out) {
        SpaceTimeJets jets;
        detail::peak_jets(b, X, {0.0}, jets, need_grad);
        out.value = jets.u.col(0);
        if (need_grad) {
            out.grad.resize(X.rows(), 2);
            out.grad.col(0) = jets.grad[0].col(0);
            out.grad.col(1) = jets.grad[1].col(0);
        }
        if (need_hess) {
            out.hess_diag.resize(X.rows(), 2);
            const Eigen::ArrayXd r1 = X.col(0).array() - 0.25;
            const Eigen::ArrayXd r2 = X.col(1).array() - 0.25;
            const Eigen::ArrayXd u = jets.u.col(0).array();
            out.hess_diag.col(0) = (4.0 * b * b * r1.square() - 2.0 * b) * u;
            out.hess_diag.col(1) = (4.0 * b * b * r2.square() - 2.0 * b) * u;
        }
    };
    p.has_exact = true;
    p.exact = [b](const Eigen::VectorXd& x, double t) {
        const double r1 = x[0] - t - 0.25, r2 = x[1] - t - 0.25;
        return std::exp(-b * (r1 * r1 + r2 * r2));
    };
    p.has_exact_jets = true;
    p.exact_jets = [b](const Eigen::MatrixXd& X, const std::vector<double>& ts,
                       SpaceTimeJets& jets) { detail::peak_jets(b, X, ts, jets, false); };
    p.boundary_value = p.exact;
    return p;
}

inline PdeProblem make_problem(const std::string& id, double beta, int dim, double omega) {
    if (id == "convection") return make_convection(beta);
    if (id == "allen-cahn-1d") return make_allen_cahn_1d();
    if (id == "allen-cahn-1d-manufactured") return make_allen_cahn_1d_manufactured();
    if (id == "parabolic-varcoef") return make_parabolic_varcoef(dim, omega);
    if (id == "allen-cahn-ball") return make_allen_cahn_ball(dim, omega);
    if (id == "heat-2d-peak") return make_heat2d_peak(beta);
    throw std::invalid_argument("unknown problem id '" + id + "'");
}

}  // namespace evopinn
