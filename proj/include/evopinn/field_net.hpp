#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evopinn/rng.hpp"

namespace evopinn {

// ---------------------------------------------------------------------------
// Parameters

/// Fully-connected tanh network x -> a^T h_{L-1}(...h_1(x)). Hidden layers
/// carry weights and biases; the output layer is a bias-free linear map.
/// weights[l] has shape dims[l+1] x dims[l].
struct MlpParams {
    std::vector<int> dims;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;  // one per hidden layer

    int num_layers() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }

    long num_scalars() const {
        long n = 0;
        for (const auto& w : weights) n += w.size();
        for (const auto& b : biases) n += b.size();
        return n;
    }

    bool all_finite() const {
        for (const auto& w : weights)
            if (!w.array().isFinite().all()) return false;
        for (const auto& b : biases)
            if (!b.array().isFinite().all()) return false;
        return true;
    }

    void set_zero() {
        for (auto& w : weights) w.setZero();
        for (auto& b : biases) b.setZero();
    }

    static MlpParams zeros(const std::vector<int>& dims) {
        MlpParams p;
        p.dims = dims;
        const int layers = static_cast<int>(dims.size()) - 1;
        for (int l = 0; l < layers; ++l) {
            p.weights.emplace_back(Eigen::MatrixXd::Zero(dims[l + 1], dims[l]));
            if (l + 1 < layers) p.biases.emplace_back(Eigen::VectorXd::Zero(dims[l + 1]));
        }
        return p;
    }

    static MlpParams zeros_like(const MlpParams& other) { return zeros(other.dims); }

    /// Flat view in declaration order W_1, b_1, ..., W_{L-1}, b_{L-1}, a;
    /// matrices are stored row-major (by output unit).
    void to_flat(std::vector<double>& out) const {
        out.clear();
        out.reserve(static_cast<std::size_t>(num_scalars()));
        for (int l = 0; l < num_layers(); ++l) {
            const auto& w = weights[l];
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                for (Eigen::Index c = 0; c < w.cols(); ++c) out.push_back(w(r, c));
            if (l < static_cast<int>(biases.size()))
                for (Eigen::Index r = 0; r < biases[l].size(); ++r)
                    out.push_back(biases[l][r]);
        }
    }

    void from_flat(const double* data, std::size_t count) {
        std::size_t k = 0;
        for (int l = 0; l < num_layers(); ++l) {
            auto& w = weights[l];
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = data[k++];
            if (l < static_cast<int>(biases.size()))
                for (Eigen::Index r = 0; r < biases[l].size(); ++r)
                    biases[l][r] = data[k++];
        }
        if (k != count)
            throw std::invalid_argument("MlpParams::from_flat: size mismatch");
    }
};

/// Glorot-normal weights, zero biases; deterministic per seed.
inline MlpParams init_glorot(std::uint64_t seed, const std::vector<int>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("init_glorot: need input and output dims");
    for (int m : dims)
        if (m < 1) throw std::invalid_argument("init_glorot: non-positive layer width");
    MlpParams p = MlpParams::zeros(dims);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& w : p.weights) {
        const double stddev = std::sqrt(2.0 / static_cast<double>(w.rows() + w.cols()));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = stddev * normal(rng);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Input embedding

/// {1, cos(k*w*x), sin(k*w*x)}_{k=1..modes} with w = 2*pi/period.
inline Eigen::VectorXd fourier_embed(double x, double period, int modes = 10) {
    if (!(period > 0.0)) throw std::invalid_argument("fourier_embed: period must be positive");
    Eigen::VectorXd v(2 * modes + 1);
    v[0] = 1.0;
    const double w = 2.0 * M_PI / period;
    for (int k = 1; k <= modes; ++k) {
        v[2 * k - 1] = std::cos(k * w * x);
        v[2 * k] = std::sin(k * w * x);
    }
    return v;
}

enum class EmbeddingKind { Identity, Fourier };

struct EmbeddingSpec {
    EmbeddingKind kind = EmbeddingKind::Identity;
    double x_min = 0.0;   // Fourier phase reference: embeds x - x_min
    double period = 1.0;
    int modes = 10;

    int output_dim(int spatial_dim) const {
        return kind == EmbeddingKind::Identity ? spatial_dim : 2 * modes + 1;
    }
};

// ---------------------------------------------------------------------------
// Constraints

/// Jets of a scalar field over a batch: value (B), gradient (B x d),
/// diagonal second derivatives (B x d).
struct ScalarJetBatch {
    Eigen::VectorXd value;
    Eigen::MatrixXd grad;
    Eigen::MatrixXd hess_diag;
};

/// Batched jet-evaluable scalar field: used for prescribed initial data.
/// Implementations fill grad/hess_diag only when requested.
using ScalarFieldFn = std::function<void(const Eigen::MatrixXd& X, bool need_grad,
                                         bool need_hess, ScalarJetBatch& out)>;

inline ScalarFieldFn zero_field() {
    return [](const Eigen::MatrixXd& X, bool, bool, ScalarJetBatch& out) {
        out.value.setZero(X.rows());
        out.grad.setZero(X.rows(), X.cols());
        out.hess_diag.setZero(X.rows(), X.cols());
    };
}

enum class BoundaryFactor { None, UnitBall, Box };

/// Hard constraints applied inside the network: an optional multiplicative
/// boundary factor, and optional pinning of output coefficients to a
/// prescribed field (exact initial data).
struct ConstraintSpec {
    BoundaryFactor factor = BoundaryFactor::None;
    Eigen::VectorXd box_lo, box_hi;  // Box factor bounds
    std::vector<int> pinned;         // output indices replaced by `initial`
    ScalarFieldFn initial;           // required when pinned is non-empty

    static ConstraintSpec none() { return {}; }
    static ConstraintSpec unit_ball() {
        ConstraintSpec c;
        c.factor = BoundaryFactor::UnitBall;
        return c;
    }
    static ConstraintSpec box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
        ConstraintSpec c;
        c.factor = BoundaryFactor::Box;
        c.box_lo = std::move(lo);
        c.box_hi = std::move(hi);
        return c;
    }
    ConstraintSpec with_pinned(std::vector<int> indices, ScalarFieldFn field) const {
        ConstraintSpec c = *this;
        c.pinned = std::move(indices);
        c.initial = std::move(field);
        return c;
    }
};

// ---------------------------------------------------------------------------
// Jets

struct JetRequest {
    bool dx = true;
    bool dxx = true;
    static JetRequest value_only() { return {false, false}; }
    static JetRequest first_order() { return {true, false}; }
    static JetRequest full() { return {true, true}; }
};

/// Batched network jets: each matrix is B x (N+1); dx/dxx hold one matrix
/// per spatial coordinate (empty when not requested).
struct NetJets {
    Eigen::MatrixXd value;
    std::vector<Eigen::MatrixXd> dx;
    std::vector<Eigen::MatrixXd> dxx;

    void setZero(Eigen::Index rows, Eigen::Index cols, int d, const JetRequest& req) {
        value.setZero(rows, cols);
        dx.assign(req.dx ? d : 0, Eigen::MatrixXd::Zero(rows, cols));
        dxx.assign(req.dxx ? d : 0, Eigen::MatrixXd::Zero(rows, cols));
    }
};

/// Single-point jet of the constrained output.
struct SpatialJet {
    Eigen::VectorXd value;       // N+1
    Eigen::MatrixXd gradient;    // (N+1) x d
    Eigen::MatrixXd hessian_diag;
};

// ---------------------------------------------------------------------------
// FieldNet

/// Spatial coefficient network omega(x; theta) in R^{N+1} with exact input
/// jets (value, gradient, Hessian diagonal) and an exact reverse pass for
/// parameter gradients through those jets. Hard constraints (boundary factor,
/// pinned coefficients) are applied inside the differentiation.
class FieldNet {
public:
    FieldNet() = default;
    FieldNet(MlpParams params, int spatial_dim, EmbeddingSpec embed = {},
             ConstraintSpec constraint = {})
        : params_(std::move(params)),
          dim_(spatial_dim),
          embed_(embed),
          constraint_(std::move(constraint)) {
        if (embed_.output_dim(dim_) != params_.input_dim())
            throw std::invalid_argument("FieldNet: embedding output dim " +
                                        std::to_string(embed_.output_dim(dim_)) +
                                        " does not match network input dim " +
                                        std::to_string(params_.input_dim()));
        if (embed_.kind == EmbeddingKind::Fourier && dim_ != 1)
            throw std::invalid_argument("FieldNet: Fourier embedding requires d = 1");
        for (int p : constraint_.pinned)
            if (p < 0 || p >= params_.output_dim())
                throw std::invalid_argument("FieldNet: pinned index out of range");
        if (!constraint_.pinned.empty() && !constraint_.initial)
            throw std::invalid_argument("FieldNet: pinned coefficients need an initial field");
    }

    const MlpParams& params() const { return params_; }
    MlpParams& params() { return params_; }
    int spatial_dim() const { return dim_; }
    int output_dim() const { return params_.output_dim(); }
    const EmbeddingSpec& embedding() const { return embed_; }
    const ConstraintSpec& constraint() const { return constraint_; }
    void set_constraint(ConstraintSpec c) { constraint_ = std::move(c); }

    struct Workspace {
        // per hidden layer: inputs (P streams), activation A, pre-activation tangents
        struct Layer {
            Eigen::MatrixXd P;
            std::vector<Eigen::MatrixXd> Pj, Pjj;
            Eigen::MatrixXd A;
            std::vector<Eigen::MatrixXd> Zj, Zjj;
        };
        std::vector<Layer> layers;
        Eigen::MatrixXd last;                      // input of the output layer
        std::vector<Eigen::MatrixXd> lastj, lastjj;
        Eigen::MatrixXd raw;                       // unconstrained output value
        std::vector<Eigen::MatrixXd> rawj, rawjj;
        Eigen::VectorXd psi;                       // boundary factor jets
        Eigen::MatrixXd psij, psijj;               // B x d
        JetRequest req;
        int batch = 0;
    };

    /// Constrained output jets for a batch X (B x d). A workspace is required
    /// to run backward() afterwards.
    void forward(const Eigen::MatrixXd& X, const JetRequest& req, NetJets& out,
                 Workspace* ws = nullptr) const {
        if (X.cols() != dim_)
            throw std::invalid_argument("FieldNet::forward: batch has " +
                                        std::to_string(X.cols()) + " columns, expected " +
                                        std::to_string(dim_));
        const int B = static_cast<int>(X.rows());
        const int d = dim_;
        Workspace local;
        Workspace& w = ws ? *ws : local;
        w.req = req;
        w.batch = B;

        // Embedding jets
        Eigen::MatrixXd E;
        std::vector<Eigen::MatrixXd> Ej, Ejj;
        embed_jets(X, req, E, Ej, Ejj);

        // Hidden layers
        const int hidden = params_.num_layers() - 1;
        w.layers.assign(hidden, {});
        Eigen::MatrixXd cur = std::move(E);
        std::vector<Eigen::MatrixXd> curj = std::move(Ej), curjj = std::move(Ejj);
        for (int l = 0; l < hidden; ++l) {
            auto& L = w.layers[l];
            const auto& W = params_.weights[l];
            const auto& b = params_.biases[l];
            L.P = std::move(cur);
            L.Pj = std::move(curj);
            L.Pjj = std::move(curjj);

            Eigen::MatrixXd Z = (L.P * W.transpose()).rowwise() + b.transpose();
            L.A = Z.array().tanh().matrix();
            const Eigen::ArrayXXd S = 1.0 - L.A.array().square();
            if (req.dx) {
                L.Zj.resize(d);
                for (int j = 0; j < d; ++j) L.Zj[j].noalias() = L.Pj[j] * W.transpose();
            }
            if (req.dxx) {
                L.Zjj.resize(d);
                for (int j = 0; j < d; ++j) L.Zjj[j].noalias() = L.Pjj[j] * W.transpose();
            }
            cur = L.A;
            curj.assign(req.dx ? d : 0, Eigen::MatrixXd());
            curjj.assign(req.dxx ? d : 0, Eigen::MatrixXd());
            if (req.dx)
                for (int j = 0; j < d; ++j) curj[j] = (S * L.Zj[j].array()).matrix();
            if (req.dxx) {
                const Eigen::ArrayXXd G = -2.0 * L.A.array() * S;
                for (int j = 0; j < d; ++j)
                    curjj[j] = (S * L.Zjj[j].array() + G * L.Zj[j].array().square()).matrix();
            }
        }

        // Output layer (no bias)
        const auto& Wout = params_.weights.back();
        w.last = std::move(cur);
        w.lastj = std::move(curj);
        w.lastjj = std::move(curjj);
        w.raw.noalias() = w.last * Wout.transpose();
        w.rawj.assign(req.dx ? d : 0, Eigen::MatrixXd());
        w.rawjj.assign(req.dxx ? d : 0, Eigen::MatrixXd());
        for (int j = 0; req.dx && j < d; ++j) w.rawj[j].noalias() = w.lastj[j] * Wout.transpose();
        for (int j = 0; req.dxx && j < d; ++j)
            w.rawjj[j].noalias() = w.lastjj[j] * Wout.transpose();

        // Boundary factor
        out.value = w.raw;
        out.dx.assign(req.dx ? d : 0, Eigen::MatrixXd());
        out.dxx.assign(req.dxx ? d : 0, Eigen::MatrixXd());
        for (int j = 0; req.dx && j < d; ++j) out.dx[j] = w.rawj[j];
        for (int j = 0; req.dxx && j < d; ++j) out.dxx[j] = w.rawjj[j];
        if (constraint_.factor != BoundaryFactor::None) {
            factor_jets(X, req, w.psi, w.psij, w.psijj);
            for (int j = 0; req.dxx && j < d; ++j) {
                out.dxx[j] = w.rawjj[j].array().colwise() * w.psi.array();
                out.dxx[j].noalias() += 2.0 * (w.rawj[j].array().colwise() *
                                               w.psij.col(j).array()).matrix();
                out.dxx[j] += (w.raw.array().colwise() * w.psijj.col(j).array()).matrix();
            }
            for (int j = 0; req.dx && j < d; ++j) {
                out.dx[j] = w.rawj[j].array().colwise() * w.psi.array();
                out.dx[j] += (w.raw.array().colwise() * w.psij.col(j).array()).matrix();
            }
            out.value = w.raw.array().colwise() * w.psi.array();
        }

        // Pinned coefficients: exact initial data, outside the factor
        if (!constraint_.pinned.empty()) {
            ScalarJetBatch g;
            constraint_.initial(X, req.dx, req.dxx, g);
            for (int p : constraint_.pinned) {
                out.value.col(p) = g.value;
                for (int j = 0; req.dx && j < d; ++j) out.dx[j].col(p) = g.grad.col(j);
                for (int j = 0; req.dxx && j < d; ++j) out.dxx[j].col(p) = g.hess_diag.col(j);
            }
        }
    }

    /// Reverse pass: accumulates d(loss)/d(theta) into grad for the adjoint
    /// jets `bar` (same shapes as the forward output, zero where unused).
    void backward(const Workspace& w, const NetJets& bar, MlpParams& grad) const {
        const int d = dim_;
        const JetRequest req = w.req;
        Eigen::MatrixXd cbar = bar.value;
        std::vector<Eigen::MatrixXd> cbarj(req.dx ? d : 0), cbarjj(req.dxx ? d : 0);
        for (int j = 0; req.dx && j < d; ++j) cbarj[j] = bar.dx[j];
        for (int j = 0; req.dxx && j < d; ++j) cbarjj[j] = bar.dxx[j];

        // Pinned outputs carry no parameter dependence
        for (int p : constraint_.pinned) {
            cbar.col(p).setZero();
            for (auto& m : cbarj) m.col(p).setZero();
            for (auto& m : cbarjj) m.col(p).setZero();
        }

        // Boundary factor adjoint
        Eigen::MatrixXd obar;
        std::vector<Eigen::MatrixXd> obarj(req.dx ? d : 0), obarjj(req.dxx ? d : 0);
        if (constraint_.factor != BoundaryFactor::None) {
            obar = cbar.array().colwise() * w.psi.array();
            for (int j = 0; req.dx && j < d; ++j)
                obar += (cbarj[j].array().colwise() * w.psij.col(j).array()).matrix();
            for (int j = 0; req.dxx && j < d; ++j)
                obar += (cbarjj[j].array().colwise() * w.psijj.col(j).array()).matrix();
            for (int j = 0; req.dx && j < d; ++j) {
                obarj[j] = cbarj[j].array().colwise() * w.psi.array();
                if (req.dxx)
                    obarj[j] += 2.0 * (cbarjj[j].array().colwise() *
                                       w.psij.col(j).array()).matrix();
            }
            for (int j = 0; req.dxx && j < d; ++j)
                obarjj[j] = cbarjj[j].array().colwise() * w.psi.array();
        } else {
            obar = std::move(cbar);
            obarj = std::move(cbarj);
            obarjj = std::move(cbarjj);
        }

        // Output layer
        const auto& Wout = params_.weights.back();
        auto& gWout = grad.weights.back();
        gWout.noalias() += obar.transpose() * w.last;
        for (int j = 0; req.dx && j < d; ++j) gWout.noalias() += obarj[j].transpose() * w.lastj[j];
        for (int j = 0; req.dxx && j < d; ++j)
            gWout.noalias() += obarjj[j].transpose() * w.lastjj[j];
        Eigen::MatrixXd abar = obar * Wout;
        std::vector<Eigen::MatrixXd> abarj(req.dx ? d : 0), abarjj(req.dxx ? d : 0);
        for (int j = 0; req.dx && j < d; ++j) abarj[j] = obarj[j] * Wout;
        for (int j = 0; req.dxx && j < d; ++j) abarjj[j] = obarjj[j] * Wout;

        // Hidden layers in reverse
        for (int l = params_.num_layers() - 2; l >= 0; --l) {
            const auto& L = w.layers[l];
            const auto& W = params_.weights[l];
            const Eigen::ArrayXXd A = L.A.array();
            const Eigen::ArrayXXd S = 1.0 - A.square();

            Eigen::MatrixXd zbar = (abar.array() * S).matrix();
            std::vector<Eigen::MatrixXd> zbarj(req.dx ? d : 0), zbarjj(req.dxx ? d : 0);
            if (req.dx) {
                const Eigen::ArrayXXd G = -2.0 * A * S;
                for (int j = 0; j < d; ++j)
                    zbar += (abarj[j].array() * G * L.Zj[j].array()).matrix();
                if (req.dxx) {
                    const Eigen::ArrayXXd H = 2.0 * S * (2.0 * A.square() - S);
                    for (int j = 0; j < d; ++j) {
                        zbar += (abarjj[j].array() *
                                 (G * L.Zjj[j].array() + H * L.Zj[j].array().square()))
                                    .matrix();
                        zbarj[j] = (abarj[j].array() * S +
                                    abarjj[j].array() * 2.0 * G * L.Zj[j].array())
                                       .matrix();
                        zbarjj[j] = (abarjj[j].array() * S).matrix();
                    }
                } else {
                    for (int j = 0; j < d; ++j) zbarj[j] = (abarj[j].array() * S).matrix();
                }
            }

            auto& gW = grad.weights[l];
            gW.noalias() += zbar.transpose() * L.P;
            for (int j = 0; req.dx && j < d; ++j) gW.noalias() += zbarj[j].transpose() * L.Pj[j];
            for (int j = 0; req.dxx && j < d; ++j)
                gW.noalias() += zbarjj[j].transpose() * L.Pjj[j];
            grad.biases[l].noalias() += zbar.colwise().sum().transpose();

            if (l > 0) {
                abar.noalias() = zbar * W;
                for (int j = 0; req.dx && j < d; ++j) abarj[j].noalias() = zbarj[j] * W;
                for (int j = 0; req.dxx && j < d; ++j) abarjj[j].noalias() = zbarjj[j] * W;
            }
        }
    }

    /// Full jet at a single point.
    SpatialJet forward_jet(const Eigen::VectorXd& x) const {
        if (x.size() != dim_)
            throw std::invalid_argument("forward_jet: dimension mismatch");
        NetJets jets;
        forward(x.transpose(), JetRequest::full(), jets);
        SpatialJet out;
        const int n = output_dim();
        out.value = jets.value.row(0).transpose();
        out.gradient.resize(n, dim_);
        out.hessian_diag.resize(n, dim_);
        for (int j = 0; j < dim_; ++j) {
            out.gradient.col(j) = jets.dx[j].row(0).transpose();
            out.hessian_diag.col(j) = jets.dxx[j].row(0).transpose();
        }
        return out;
    }

private:
    void embed_jets(const Eigen::MatrixXd& X, const JetRequest& req, Eigen::MatrixXd& E,
                    std::vector<Eigen::MatrixXd>& Ej, std::vector<Eigen::MatrixXd>& Ejj) const {
        const int B = static_cast<int>(X.rows());
        const int d = dim_;
        if (embed_.kind == EmbeddingKind::Identity) {
            E = X;
            if (req.dx) {
                Ej.assign(d, Eigen::MatrixXd::Zero(B, d));
                for (int j = 0; j < d; ++j) Ej[j].col(j).setOnes();
            }
            if (req.dxx) Ejj.assign(d, Eigen::MatrixXd::Zero(B, d));
            return;
        }
        const int m = embed_.modes;
        const double w = 2.0 * M_PI / embed_.period;
        E.resize(B, 2 * m + 1);
        if (req.dx) Ej.assign(1, Eigen::MatrixXd::Zero(B, 2 * m + 1));
        if (req.dxx) Ejj.assign(1, Eigen::MatrixXd::Zero(B, 2 * m + 1));
        const Eigen::ArrayXd u = X.col(0).array() - embed_.x_min;
        E.col(0).setOnes();
        for (int k = 1; k <= m; ++k) {
            const double kw = k * w;
            const Eigen::ArrayXd c = (kw * u).cos();
            const Eigen::ArrayXd s = (kw * u).sin();
            E.col(2 * k - 1) = c;
            E.col(2 * k) = s;
            if (req.dx) {
                Ej[0].col(2 * k - 1) = -kw * s;
                Ej[0].col(2 * k) = kw * c;
            }
            if (req.dxx) {
                Ejj[0].col(2 * k - 1) = -kw * kw * c;
                Ejj[0].col(2 * k) = -kw * kw * s;
            }
        }
    }

    void factor_jets(const Eigen::MatrixXd& X, const JetRequest& req, Eigen::VectorXd& psi,
                     Eigen::MatrixXd& psij, Eigen::MatrixXd& psijj) const {
        const int B = static_cast<int>(X.rows());
        const int d = dim_;
        psi.resize(B);
        if (req.dx) psij.resize(B, d);
        if (req.dxx) psijj.resize(B, d);
        if (constraint_.factor == BoundaryFactor::UnitBall) {
            const Eigen::ArrayXd r =
                X.rowwise().norm().array().max(1e-150);  // |x|-1 kinks at the origin
            psi = (r - 1.0).matrix();
            if (req.dx) psij = X.array().colwise() / r;
            if (req.dxx)
                psijj = ((-X.array().square()).colwise() / (r * r * r)).colwise() + 1.0 / r;
        } else {
            // product of per-coordinate parabolas, assembled via prefix and
            // suffix products so boundary points stay exact
            Eigen::MatrixXd q(B, d), dq(B, d);
            for (int j = 0; j < d; ++j) {
                const auto xj = X.col(j).array();
                q.col(j) = (xj - constraint_.box_lo[j]) * (constraint_.box_hi[j] - xj);
                dq.col(j) = constraint_.box_lo[j] + constraint_.box_hi[j] - 2.0 * xj;
            }
            Eigen::MatrixXd prefix = Eigen::MatrixXd::Ones(B, d + 1);
            Eigen::MatrixXd suffix = Eigen::MatrixXd::Ones(B, d + 1);
            for (int j = 0; j < d; ++j)
                prefix.col(j + 1) = prefix.col(j).cwiseProduct(q.col(j));
            for (int j = d - 1; j >= 0; --j)
                suffix.col(j) = suffix.col(j + 1).cwiseProduct(q.col(j));
            psi = prefix.col(d);
            for (int j = 0; j < d; ++j) {
                const Eigen::VectorXd rest = prefix.col(j).cwiseProduct(suffix.col(j + 1));
                if (req.dx) psij.col(j) = dq.col(j).cwiseProduct(rest);
                if (req.dxx) psijj.col(j) = -2.0 * rest;
            }
        }
    }

    MlpParams params_;
    int dim_ = 0;
    EmbeddingSpec embed_;
    ConstraintSpec constraint_;
};

}  // namespace evopinn
