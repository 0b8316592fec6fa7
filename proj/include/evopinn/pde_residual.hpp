#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evopinn/field_net.hpp"
#include "evopinn/pde_problem.hpp"
#include "evopinn/projection.hpp"

namespace evopinn {

/// sqrt(sum |pred-exact|^2) / sqrt(sum |exact|^2)
inline double relative_l2(const Eigen::VectorXd& pred, const Eigen::VectorXd& exact) {
    if (pred.size() != exact.size())
        throw std::invalid_argument("relative_l2: length mismatch");
    const double denom = exact.norm();
    if (denom == 0.0) throw std::domain_error("relative_l2: exact values are identically zero");
    return (pred - exact).norm() / denom;
}

// ---------------------------------------------------------------------------
// Hybrid space-time model

/// u_N(x,t) = sum_i omega_i(x) phi_i(t): the spatial network paired with the
/// temporal basis of its segment.
struct SolutionModel {
    FieldNet net;
    TimeBasis basis;

    double eval(const Eigen::VectorXd& x, double t) const {
        NetJets jets;
        net.forward(x.transpose(), JetRequest::value_only(), jets);
        Eigen::VectorXd v, d;
        basis.eval(t, v, d);
        return jets.value.row(0).dot(v);
    }

    Eigen::VectorXd eval_batch(const Eigen::MatrixXd& X, double t) const {
        NetJets jets;
        net.forward(X, JetRequest::value_only(), jets);
        Eigen::VectorXd v, d;
        basis.eval(t, v, d);
        return jets.value * v;
    }

    /// Space-time jets of u_N over a batch and a time list.
    void jets(const Eigen::MatrixXd& X, const std::vector<double>& times,
              const OperatorNeeds& needs, SpaceTimeJets& out) const {
        JetRequest req{needs.gradient || needs.laplacian, needs.laplacian};
        NetJets nj;
        net.forward(X, req, nj);
        const int T = static_cast<int>(times.size());
        const int d = net.spatial_dim();
        Eigen::MatrixXd phi(T, basis.size()), dphi(T, basis.size());
        Eigen::VectorXd v, dv;
        for (int k = 0; k < T; ++k) {
            basis.eval(times[k], v, dv);
            phi.row(k) = v.transpose();
            dphi.row(k) = dv.transpose();
        }
        out.u.noalias() = nj.value * phi.transpose();
        out.ut.noalias() = nj.value * dphi.transpose();
        if (needs.laplacian) {
            Eigen::MatrixXd lap_w = nj.dxx[0];
            for (int j = 1; j < d; ++j) lap_w += nj.dxx[j];
            out.lap.noalias() = lap_w * phi.transpose();
        }
        out.grad.clear();
        if (needs.gradient)
            for (int j = 0; j < d; ++j) out.grad.emplace_back(nj.dx[j] * phi.transpose());
    }

    /// The time-t slice of u_N as a jet-evaluable scalar field; captures a
    /// copy of the network, so the field outlives later training steps.
    ScalarFieldFn slice_field(double t) const {
        auto frozen = std::make_shared<const FieldNet>(net);
        Eigen::VectorXd v, d;
        basis.eval(t, v, d);
        const Eigen::VectorXd coeff = v;
        return [frozen, coeff](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                               ScalarJetBatch& out) {
            NetJets jets;
            frozen->forward(X, JetRequest{need_grad || need_hess, need_hess}, jets);
            out.value = jets.value * coeff;
            const int d = static_cast<int>(X.cols());
            if (need_grad) {
                out.grad.resize(X.rows(), d);
                for (int j = 0; j < d; ++j) out.grad.col(j) = jets.dx[j] * coeff;
            }
            if (need_hess) {
                out.hess_diag.resize(X.rows(), d);
                for (int j = 0; j < d; ++j) out.hess_diag.col(j) = jets.dxx[j] * coeff;
            }
        };
    }
};

// ---------------------------------------------------------------------------
// Projection handle

/// Either temporal projection, with a uniform row-indexed residual view.
struct Projection {
    enum class Kind { Galerkin, Collocation };
    Kind kind;
    std::optional<GalerkinSystem> galerkin;
    std::optional<CollocationGrid> collocation;

    static Projection make_galerkin_for(const PdeProblem& problem, const TimeBasis& basis) {
        return {Kind::Galerkin, make_galerkin(basis, problem.nonlinearity_degree),
                std::nullopt};
    }
    static Projection make_collocation_for(const TimeBasis& basis, int points_per_element) {
        return {Kind::Collocation, std::nullopt, build_collocation(basis, points_per_element)};
    }

    int rows() const {
        return kind == Kind::Galerkin ? galerkin->rows() : collocation->rows();
    }
    const TimeBasis& basis() const {
        return kind == Kind::Galerkin ? galerkin->trial : collocation->basis;
    }
    /// Temporal atom s_j associated with residual row j.
    double row_time(int j) const {
        return kind == Kind::Galerkin ? galerkin->test_time(j) : collocation->time_points[j];
    }
    /// Elements supporting residual row j.
    std::pair<int, int> row_support(int j) const {
        if (kind == Kind::Galerkin) return galerkin->test_support(j);
        const int m = basis().partition().element_containing(collocation->time_points[j]);
        return {m, m};
    }
};

// ---------------------------------------------------------------------------
// Training data

/// Interior points live in a shared pool; each residual row owns a list of
/// pool indices. Uniform initialization points every row at the same pool.
struct TrainingSet {
    Eigen::MatrixXd points;              // P x d
    std::vector<std::vector<int>> rows;  // per residual row
    Eigen::VectorXd lambda;              // per-row weights, positive, sum 1
    Eigen::MatrixXd initial_pts;         // N_ic x d
    Eigen::MatrixXd boundary_pts;        // N_bc x d
    Eigen::VectorXd boundary_times;

    int residual_rows() const { return static_cast<int>(rows.size()); }
    long total_assignments() const {
        long n = 0;
        for (const auto& r : rows) n += static_cast<long>(r.size());
        return n;
    }
};

inline TrainingSet make_uniform_training_set(const PdeProblem& problem, int residual_rows,
                                             int n_interior, int n_initial, int n_boundary,
                                             std::mt19937_64& rng) {
    if (n_interior < 1)
        throw std::invalid_argument("make_uniform_training_set: need interior points");
    TrainingSet data;
    data.points = problem.domain.sample_uniform(n_interior, rng);
    std::vector<int> all(n_interior);
    for (int i = 0; i < n_interior; ++i) all[i] = i;
    data.rows.assign(residual_rows, all);
    data.lambda = Eigen::VectorXd::Constant(residual_rows, 1.0 / residual_rows);
    if (n_initial > 0) data.initial_pts = problem.domain.sample_uniform(n_initial, rng);
    if (n_boundary > 0) {
        data.boundary_pts = problem.domain.sample_boundary(n_boundary, rng);
        data.boundary_times.resize(n_boundary);
        std::uniform_real_distribution<double> ut(problem.t_begin, problem.t_end);
        for (int i = 0; i < n_boundary; ++i) data.boundary_times[i] = ut(rng);
    }
    return data;
}

/// One optimization batch: a gathered subset of the pool plus the weight
/// mask W(b, j) = lambda_j / |batch_j| over its rows.
struct Minibatch {
    Eigen::MatrixXd X;     // B x d
    Eigen::MatrixXd mask;  // B x rows
};

/// Gathers the union of the per-row index chunks into a batch.
inline Minibatch gather_minibatch(const TrainingSet& data,
                                  const std::vector<std::vector<int>>& chunk) {
    const int rows = data.residual_rows();
    std::vector<int> pool_to_batch(data.points.rows(), -1);
    std::vector<int> batch_rows;
    for (const auto& r : chunk)
        for (int idx : r)
            if (pool_to_batch[idx] < 0) {
                pool_to_batch[idx] = static_cast<int>(batch_rows.size());
                batch_rows.push_back(idx);
            }
    Minibatch b;
    b.X.resize(batch_rows.size(), data.points.cols());
    for (std::size_t i = 0; i < batch_rows.size(); ++i)
        b.X.row(static_cast<int>(i)) = data.points.row(batch_rows[i]);
    b.mask = Eigen::MatrixXd::Zero(batch_rows.size(), rows);
    for (int j = 0; j < rows; ++j) {
        if (chunk[j].empty()) continue;
        const double w = data.lambda[j] / static_cast<double>(chunk[j].size());
        for (int idx : chunk[j]) b.mask(pool_to_batch[idx], j) += w;
    }
    return b;
}

inline Minibatch full_batch(const TrainingSet& data) {
    return gather_minibatch(data, data.rows);
}

// ---------------------------------------------------------------------------
// Operator partial adjoints

namespace detail {

/// Accumulates jet adjoints for bar = d(loss)/dN given the jets N was
/// evaluated on. jet_bar fields must be pre-sized (zero) where applicable.
inline void operator_adjoint(const PdeProblem& problem, const Eigen::MatrixXd& X,
                             const SpaceTimeJets& jets, const Eigen::MatrixXd& bar,
                             SpaceTimeJets& jet_bar) {
    switch (problem.op) {
        case OperatorKind::Convection:
            jet_bar.grad[0] += problem.beta * bar;
            return;
        case OperatorKind::AllenCahn1d:
            jet_bar.u.array() +=
                bar.array() * problem.c2 * (3.0 * jets.u.array().square() - 1.0);
            jet_bar.lap -= problem.c1_sq * bar;
            return;
        case OperatorKind::ParabolicVarCoef: {
            const Eigen::ArrayXd a = 1.0 + 0.5 * X.rowwise().squaredNorm().array();
            jet_bar.lap -= (bar.array().colwise() * a).matrix();
            for (int j = 0; j < problem.domain.dim; ++j)
                jet_bar.grad[j] -= (bar.array().colwise() * X.col(j).array()).matrix();
            return;
        }
        case OperatorKind::AllenCahnBall:
            jet_bar.u.array() += bar.array() * (3.0 * jets.u.array().square() - 1.0);
            jet_bar.lap -= bar;
            return;
        case OperatorKind::Heat2dPeak:
            jet_bar.lap -= bar;
            return;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Residual engine

struct LossParts {
    double total = 0.0;
    double interior = 0.0;
    double initial = 0.0;
    double boundary = 0.0;
};

/// Evaluates projected residuals and the empirical loss with its exact
/// parameter gradient for one (problem, projection, network) binding.
class ResidualEngine {
public:
    ResidualEngine(const PdeProblem& problem, const Projection& projection,
                   double gamma_boundary = 1.0, double gamma_initial = 1.0)
        : problem_(&problem),
          projection_(&projection),
          gamma_bc_(gamma_boundary),
          gamma_ic_(gamma_initial) {
        const TimeBasis& basis = projection.basis();
        if (projection.kind == Projection::Kind::Galerkin) {
            const auto& sys = *projection.galerkin;
            use_fast_path_ = problem.linear;
            quad_times_ = sys.quad_times;
        } else {
            quad_times_ = projection.collocation->time_points;
        }
        Eigen::VectorXd v, d;
        basis.eval(basis.partition().t_begin(), v, d);
        phi_t0_ = v;
    }

    const Projection& projection() const { return *projection_; }
    const PdeProblem& problem() const { return *problem_; }

    /// All residual rows at a batch of spatial points: out is B x rows.
    void residual_batch(const SolutionModel& model, const Eigen::MatrixXd& X,
                        Eigen::MatrixXd& out) const {
        NetJets jets;
        model.net.forward(X, jet_request(), jets);
        forward_residual(X, jets, out, nullptr);
    }

    /// Residual vector at one spatial point.
    Eigen::VectorXd residual_at(const SolutionModel& model, const Eigen::VectorXd& x) const {
        Eigen::MatrixXd R;
        residual_batch(model, x.transpose(), R);
        return R.row(0).transpose();
    }

    /// Empirical loss over a batch; when grad is non-null, accumulates the
    /// exact parameter gradient. gamma-weighted penalty terms are skipped
    /// when the corresponding hard constraint makes them vanish identically.
    LossParts loss(const SolutionModel& model, const Minibatch& batch,
                   const TrainingSet& data, MlpParams* grad) const {
        if (batch.X.rows() == 0)
            throw std::invalid_argument("ResidualEngine::loss: empty interior batch");
        LossParts parts;
        FieldNet::Workspace ws;
        NetJets jets;
        model.net.forward(batch.X, jet_request(), jets, grad ? &ws : nullptr);

        Eigen::MatrixXd R;
        ResidualCache cache;
        forward_residual(batch.X, jets, R, &cache);
        parts.interior = (batch.mask.array() * R.array().square()).sum();
        parts.total = parts.interior;

        NetJets jet_bar;
        if (grad) {
            jet_bar.setZero(batch.X.rows(), model.net.output_dim(), model.net.spatial_dim(),
                            jet_request());
            const Eigen::MatrixXd rbar = 2.0 * (batch.mask.array() * R.array()).matrix();
            backward_residual(batch.X, jets, cache, rbar, jet_bar);
        }

        // initial-condition penalty (vanishes under pinned coefficients)
        const bool pin_ic = !model.net.constraint().pinned.empty();
        if (gamma_ic_ > 0.0 && !pin_ic && data.initial_pts.rows() > 0) {
            FieldNet::Workspace ws_ic;
            NetJets jic;
            model.net.forward(data.initial_pts, JetRequest::value_only(), jic,
                              grad ? &ws_ic : nullptr);
            ScalarJetBatch g;
            problem_->initial(data.initial_pts, false, false, g);
            const Eigen::VectorXd mis = jic.value * phi_t0_ - g.value;
            const double n = static_cast<double>(mis.size());
            parts.initial = gamma_ic_ * mis.squaredNorm() / n;
            parts.total += parts.initial;
            if (grad) {
                NetJets bic;
                bic.setZero(data.initial_pts.rows(), model.net.output_dim(),
                            model.net.spatial_dim(), JetRequest::value_only());
                bic.value = (2.0 * gamma_ic_ / n) * mis * phi_t0_.transpose();
                model.net.backward(ws_ic, bic, *grad);
            }
        }

        // boundary penalty (vanishes under the hard factor / periodic embedding)
        const bool hard_bc =
            model.net.constraint().factor != BoundaryFactor::None ||
            model.net.embedding().kind == EmbeddingKind::Fourier;
        if (gamma_bc_ > 0.0 && !hard_bc && data.boundary_pts.rows() > 0) {
            if (!problem_->boundary_value)
                throw std::invalid_argument("boundary penalty requires boundary values");
            FieldNet::Workspace ws_bc;
            NetJets jbc;
            model.net.forward(data.boundary_pts, JetRequest::value_only(), jbc,
                              grad ? &ws_bc : nullptr);
            const int nb = static_cast<int>(data.boundary_pts.rows());
            Eigen::MatrixXd phib(nb, model.basis.size());
            Eigen::VectorXd v, d;
            for (int i = 0; i < nb; ++i) {
                model.basis.eval(data.boundary_times[i], v, d);
                phib.row(i) = v.transpose();
            }
            Eigen::VectorXd mis = (jbc.value.array() * phib.array()).rowwise().sum();
            for (int i = 0; i < nb; ++i)
                mis[i] -= problem_->boundary_value(data.boundary_pts.row(i).transpose(),
                                                   data.boundary_times[i]);
            parts.boundary = gamma_bc_ * mis.squaredNorm() / nb;
            parts.total += parts.boundary;
            if (grad) {
                NetJets bbc;
                bbc.setZero(nb, model.net.output_dim(), model.net.spatial_dim(),
                            JetRequest::value_only());
                bbc.value =
                    (phib.array().colwise() * (2.0 * gamma_bc_ / nb * mis).array()).matrix();
                model.net.backward(ws_bc, bbc, *grad);
            }
        }

        if (grad) model.net.backward(ws, jet_bar, *grad);
        return parts;
    }

    /// Loss value only.
    LossParts loss_value(const SolutionModel& model, const TrainingSet& data) const {
        return loss(model, full_batch(data), data, nullptr);
    }

private:
    struct ResidualCache {
        SpaceTimeJets st;        // jets at quadrature/collocation times
        Eigen::MatrixXd n_of_w;  // fast path: N applied to coefficients
    };

    JetRequest jet_request() const {
        const OperatorNeeds needs = problem_->needs();
        return JetRequest{needs.gradient || needs.laplacian, needs.laplacian};
    }

    void contract_jets(const NetJets& jets, const Eigen::MatrixXd& basis_vals,
                       SpaceTimeJets& st) const {
        const OperatorNeeds needs = problem_->needs();
        const int d = static_cast<int>(jets.dx.size());
        st.u.noalias() = jets.value * basis_vals.transpose();
        if (needs.laplacian) {
            Eigen::MatrixXd lap_w = jets.dxx[0];
            for (int j = 1; j < static_cast<int>(jets.dxx.size()); ++j) lap_w += jets.dxx[j];
            st.lap.noalias() = lap_w * basis_vals.transpose();
        }
        st.grad.clear();
        if (needs.gradient)
            for (int j = 0; j < d; ++j) st.grad.emplace_back(jets.dx[j] * basis_vals.transpose());
    }

    void forward_residual(const Eigen::MatrixXd& X, const NetJets& jets,
                          Eigen::MatrixXd& R, ResidualCache* cache) const {
        ResidualCache local;
        ResidualCache& c = cache ? *cache : local;
        if (projection_->kind == Projection::Kind::Galerkin) {
            const auto& sys = *projection_->galerkin;
            if (use_fast_path_) {
                apply_linear(*problem_, X, jets, c.n_of_w);
                R.noalias() = jets.value * sys.A.transpose();
                R.noalias() += c.n_of_w * sys.B.transpose();
            } else {
                contract_jets(jets, sys.trial_vals_q, c.st);
                Eigen::MatrixXd nu;
                apply_operator(*problem_, X, c.st, nu);
                R.noalias() = jets.value * sys.A.transpose();
                R.noalias() += nu * sys.test_weighted.transpose();
            }
            if (!problem_->source_is_zero) {
                Eigen::MatrixXd fq;
                problem_->source(X, quad_times_, fq);
                R.noalias() -= fq * sys.test_weighted.transpose();
            }
        } else {
            const auto& grid = *projection_->collocation;
            contract_jets(jets, grid.Phi, c.st);
            Eigen::MatrixXd nu;
            apply_operator(*problem_, X, c.st, nu);
            R.noalias() = jets.value * grid.D.transpose();
            R += nu;
            if (!problem_->source_is_zero) {
                Eigen::MatrixXd fq;
                problem_->source(X, quad_times_, fq);
                R -= fq;
            }
        }
    }

    void backward_residual(const Eigen::MatrixXd& X, const NetJets& jets,
                           const ResidualCache& c, const Eigen::MatrixXd& rbar,
                           NetJets& jet_bar) const {
        const OperatorNeeds needs = problem_->needs();
        if (projection_->kind == Projection::Kind::Galerkin) {
            const auto& sys = *projection_->galerkin;
            jet_bar.value.noalias() += rbar * sys.A;
            if (use_fast_path_) {
                apply_linear_adjoint(*problem_, X, rbar * sys.B, jet_bar);
                return;
            }
            const Eigen::MatrixXd nbar = rbar * sys.test_weighted;
            scatter_operator_adjoint(X, c.st, nbar, sys.trial_vals_q, needs, jet_bar);
        } else {
            const auto& grid = *projection_->collocation;
            jet_bar.value.noalias() += rbar * grid.D;
            scatter_operator_adjoint(X, c.st, rbar, grid.Phi, needs, jet_bar);
        }
    }

    void scatter_operator_adjoint(const Eigen::MatrixXd& X, const SpaceTimeJets& st,
                                  const Eigen::MatrixXd& nbar,
                                  const Eigen::MatrixXd& basis_vals,
                                  const OperatorNeeds& needs, NetJets& jet_bar) const {
        SpaceTimeJets stbar;
        stbar.u.setZero(nbar.rows(), nbar.cols());
        if (needs.laplacian) stbar.lap.setZero(nbar.rows(), nbar.cols());
        if (needs.gradient)
            stbar.grad.assign(jet_bar.dx.size(),
                              Eigen::MatrixXd::Zero(nbar.rows(), nbar.cols()));
        detail::operator_adjoint(*problem_, X, st, nbar, stbar);
        if (needs.value) jet_bar.value.noalias() += stbar.u * basis_vals;
        if (needs.laplacian) {
            const Eigen::MatrixXd lap_bar = stbar.lap * basis_vals;
            for (auto& m : jet_bar.dxx) m += lap_bar;
        }
        if (needs.gradient)
            for (std::size_t j = 0; j < stbar.grad.size(); ++j)
                jet_bar.dx[j].noalias() += stbar.grad[j] * basis_vals;
    }

    const PdeProblem* problem_;
    const Projection* projection_;
    double gamma_bc_, gamma_ic_;
    bool use_fast_path_ = false;
    std::vector<double> quad_times_;
    Eigen::VectorXd phi_t0_;
};

// ---------------------------------------------------------------------------
// Public residual operations

/// Projected Galerkin residual r^g at one spatial point.
inline Eigen::VectorXd galerkin_residual(const PdeProblem& problem,
                                         const Projection& projection,
                                         const SolutionModel& model,
                                         const Eigen::VectorXd& x) {
    if (projection.kind != Projection::Kind::Galerkin)
        throw std::invalid_argument("galerkin_residual: projection is not Galerkin");
    ResidualEngine engine(problem, projection);
    return engine.residual_at(model, x);
}

/// Collocation residual r^c at one spatial point.
inline Eigen::VectorXd collocation_residual(const PdeProblem& problem,
                                            const Projection& projection,
                                            const SolutionModel& model,
                                            const Eigen::VectorXd& x) {
    if (projection.kind != Projection::Kind::Collocation)
        throw std::invalid_argument("collocation_residual: projection is not collocation");
    ResidualEngine engine(problem, projection);
    return engine.residual_at(model, x);
}

/// Empirical loss of the spec'd weighted form.
inline double empirical_loss(const PdeProblem& problem, const Projection& projection,
                             const SolutionModel& model, const TrainingSet& data,
                             double gamma_boundary = 1.0, double gamma_initial = 1.0) {
    ResidualEngine engine(problem, projection, gamma_boundary, gamma_initial);
    return engine.loss_value(model, data).total;
}

/// Pointwise continuous residual of u_N at (x, s).
inline double interp_residual(const PdeProblem& problem, const SolutionModel& model,
                              const Eigen::VectorXd& x, double s) {
    SpaceTimeJets st;
    model.jets(x.transpose(), {s}, problem.needs(), st);
    Eigen::MatrixXd nu;
    apply_operator(problem, x.transpose(), st, nu);
    return st.ut(0, 0) + nu(0, 0) - problem.source_at(x, s);
}

/// Batched continuous residuals of u_N at per-point times: one network pass,
/// then per-row temporal contraction.
inline Eigen::VectorXd interp_residual_batch(const PdeProblem& problem,
                                             const SolutionModel& model,
                                             const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& times) {
    const OperatorNeeds needs = problem.needs();
    NetJets nj;
    model.net.forward(X, JetRequest{needs.gradient || needs.laplacian, needs.laplacian}, nj);
    const int d = model.net.spatial_dim();
    Eigen::MatrixXd lap_w;
    if (needs.laplacian) {
        lap_w = nj.dxx[0];
        for (int j = 1; j < d; ++j) lap_w += nj.dxx[j];
    }
    Eigen::VectorXd out(X.rows());
    Eigen::VectorXd v, dv;
    SpaceTimeJets st;
    st.u.resize(1, 1);
    st.ut.resize(1, 1);
    if (needs.laplacian) st.lap.resize(1, 1);
    st.grad.assign(needs.gradient ? d : 0, Eigen::MatrixXd(1, 1));
    Eigen::MatrixXd nu, fq;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        model.basis.eval(times[i], v, dv);
        st.u(0, 0) = nj.value.row(i).dot(v);
        st.ut(0, 0) = nj.value.row(i).dot(dv);
        if (needs.laplacian) st.lap(0, 0) = lap_w.row(i).dot(v);
        for (int j = 0; needs.gradient && j < d; ++j) st.grad[j](0, 0) = nj.dx[j].row(i).dot(v);
        apply_operator(problem, X.row(i), st, nu);
        out[i] = st.ut(0, 0) + nu(0, 0);
        if (!problem.source_is_zero) {
            problem.source(X.row(i), {times[i]}, fq);
            out[i] -= fq(0, 0);
        }
    }
    return out;
}

/// Residual rows with the exact solution substituted for u_N: the
/// manufactured-solution oracle.
inline Eigen::VectorXd exact_field_residual(const PdeProblem& problem,
                                            const Projection& projection,
                                            const Eigen::VectorXd& x) {
    if (!problem.has_exact_jets)
        throw std::invalid_argument("exact_field_residual: problem has no exact jets");
    const std::vector<double>& times = projection.kind == Projection::Kind::Galerkin
                                           ? projection.galerkin->quad_times
                                           : projection.collocation->time_points;
    SpaceTimeJets st;
    problem.exact_jets(x.transpose(), times, st);
    Eigen::MatrixXd nu;
    apply_operator(problem, x.transpose(), st, nu);
    Eigen::MatrixXd strong = st.ut + nu;  // 1 x T
    if (!problem.source_is_zero) {
        Eigen::MatrixXd fq;
        problem.source(x.transpose(), times, fq);
        strong -= fq;
    }
    if (projection.kind == Projection::Kind::Galerkin)
        return projection.galerkin->test_weighted * strong.row(0).transpose();
    return strong.row(0).transpose();
}

/// Pointwise continuous residual of the exact solution at (x, s).
inline double exact_interp_residual(const PdeProblem& problem, const Eigen::VectorXd& x,
                                    double s) {
    if (!problem.has_exact_jets)
        throw std::invalid_argument("exact_interp_residual: problem has no exact jets");
    SpaceTimeJets st;
    problem.exact_jets(x.transpose(), {s}, st);
    Eigen::MatrixXd nu;
    apply_operator(problem, x.transpose(), st, nu);
    return st.ut(0, 0) + nu(0, 0) - problem.source_at(x, s);
}

}  // namespace evopinn
