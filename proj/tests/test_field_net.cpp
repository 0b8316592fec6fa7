#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "evopinn/field_net.hpp"

using namespace evopinn;

namespace {

FieldNet make_net(int dim, ConstraintSpec constraint, EmbeddingSpec embed = {},
                  std::uint64_t seed = 42, int width = 8, int outputs = 5) {
    std::vector<int> dims{embed.output_dim(dim), width, width, outputs};
    return FieldNet(init_glorot(seed, dims), dim, embed, std::move(constraint));
}

// 4th-order central stencils; exact-jet agreement is gated at 1e-6 relative.
void check_jets_fd(const FieldNet& net, const Eigen::VectorXd& x, double h = 1e-3) {
    const SpatialJet jet = net.forward_jet(x);
    const int n = static_cast<int>(jet.value.size());
    const int d = static_cast<int>(x.size());
    auto value_at = [&](const Eigen::VectorXd& p) {
        NetJets j;
        net.forward(p.transpose(), JetRequest::value_only(), j);
        return Eigen::VectorXd(j.value.row(0).transpose());
    };
    for (int j = 0; j < d; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e[j] = 1.0;
        const Eigen::VectorXd fp2 = value_at(x + 2 * h * e), fp1 = value_at(x + h * e);
        const Eigen::VectorXd fm1 = value_at(x - h * e), fm2 = value_at(x - 2 * h * e);
        const Eigen::VectorXd f0 = value_at(x);
        const Eigen::VectorXd d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
        const Eigen::VectorXd d2 =
            (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(d1[i] - jet.gradient(i, j)) /
                      std::max(1.0, std::abs(jet.gradient(i, j))) <
                  1e-6);
            CHECK(std::abs(d2[i] - jet.hessian_diag(i, j)) /
                      std::max(1.0, std::abs(jet.hessian_diag(i, j))) <
                  1e-6);
        }
    }
}

}  // namespace

TEST_CASE("glorot init is deterministic with zero biases", "[field_net]") {
    auto a = init_glorot(123, {2, 16, 5});
    auto b = init_glorot(123, {2, 16, 5});
    for (int l = 0; l < a.num_layers(); ++l) CHECK(a.weights[l] == b.weights[l]);
    for (const auto& bias : a.biases) CHECK(bias.cwiseAbs().maxCoeff() == 0.0);
    auto c = init_glorot(124, {2, 16, 5});
    CHECK(a.weights[0] != c.weights[0]);
}

TEST_CASE("glorot variance matches the fan rule", "[field_net]") {
    auto p = init_glorot(7, {2, 128, 128, 5});
    const auto& w = p.weights[1];  // 128x128: 16384 samples
    const double target = 2.0 / (128 + 128);
    const double mean = w.mean();
    const double var = (w.array() - mean).square().sum() / (w.size() - 1);
    CHECK(std::abs(var - target) / target < 0.10);
}

TEST_CASE("fourier embedding basics", "[field_net]") {
    auto v = fourier_embed(0.0, 2.0 * M_PI);
    REQUIRE(v.size() == 21);
    CHECK(v[0] == 1.0);
    for (int k = 1; k <= 10; ++k) {
        CHECK(v[2 * k - 1] == Catch::Approx(1.0).margin(1e-14));  // cos terms
        CHECK(std::abs(v[2 * k]) < 1e-14);                        // sin terms
    }
    const double L = 1.7;
    auto a = fourier_embed(0.3, L);
    auto b = fourier_embed(0.3 + L, L);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(fourier_embed(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("periodic embedding makes endpoint values coincide", "[field_net]") {
    EmbeddingSpec embed{EmbeddingKind::Fourier, 0.0, 2.0 * M_PI, 10};
    auto net = make_net(1, ConstraintSpec::none(), embed);
    NetJets lo, hi;
    net.forward(Eigen::MatrixXd::Constant(1, 1, 0.0), JetRequest::value_only(), lo);
    net.forward(Eigen::MatrixXd::Constant(1, 1, 2.0 * M_PI), JetRequest::value_only(), hi);
    CHECK((lo.value - hi.value).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dirichlet factors vanish on the boundary exactly", "[field_net]") {
    auto ball = make_net(3, ConstraintSpec::unit_ball());
    Eigen::VectorXd x(3);
    x << 1.0, 0.0, 0.0;
    CHECK(ball.forward_jet(x).value.cwiseAbs().maxCoeff() == 0.0);

    auto box = make_net(2, ConstraintSpec::box(Eigen::VectorXd::Zero(2),
                                               Eigen::VectorXd::Ones(2)));
    Eigen::VectorXd y(2);
    y << 0.0, 0.37;
    CHECK(box.forward_jet(y).value.cwiseAbs().maxCoeff() == 0.0);
    y << 0.37, 1.0;
    CHECK(box.forward_jet(y).value.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pinned coefficients reproduce the prescribed field", "[field_net]") {
    ScalarFieldFn g = [](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                         ScalarJetBatch& out) {
        out.value = X.col(0).array().sin() * X.col(1).array();
        if (need_grad) {
            out.grad.resize(X.rows(), 2);
            out.grad.col(0) = X.col(0).array().cos() * X.col(1).array();
            out.grad.col(1) = X.col(0).array().sin();
        }
        if (need_hess) {
            out.hess_diag.resize(X.rows(), 2);
            out.hess_diag.col(0) = -X.col(0).array().sin() * X.col(1).array();
            out.hess_diag.col(1).setZero();
        }
    };
    auto net = make_net(2, ConstraintSpec::none().with_pinned({0}, g));
    Eigen::VectorXd x(2);
    x << 0.4, -0.8;
    auto jet = net.forward_jet(x);
    CHECK(jet.value[0] == Catch::Approx(std::sin(0.4) * -0.8).margin(1e-15));
    CHECK(jet.gradient(0, 0) == Catch::Approx(std::cos(0.4) * -0.8).margin(1e-15));
    CHECK(jet.hessian_diag(0, 0) == Catch::Approx(-std::sin(0.4) * -0.8).margin(1e-15));
}

TEST_CASE("input jets match finite differences for every constraint kind", "[field_net]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);

    SECTION("none") {
        auto net = make_net(3, ConstraintSpec::none());
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x(3);
            for (int j = 0; j < 3; ++j) x[j] = uni(rng);
            check_jets_fd(net, x);
        }
    }
    SECTION("periodic-fourier") {
        EmbeddingSpec embed{EmbeddingKind::Fourier, 0.0, 2.0 * M_PI, 10};
        auto net = make_net(1, ConstraintSpec::none(), embed);
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x(1);
            x[0] = 3.0 + uni(rng);
            check_jets_fd(net, x);
        }
    }
    SECTION("dirichlet-ball") {
        auto net = make_net(3, ConstraintSpec::unit_ball());
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x(3);
            for (int j = 0; j < 3; ++j) x[j] = uni(rng) * 0.8;
            check_jets_fd(net, x);
        }
    }
    SECTION("dirichlet-box") {
        auto net = make_net(2, ConstraintSpec::box(Eigen::VectorXd::Zero(2),
                                                   Eigen::VectorXd::Ones(2)));
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x(2);
            for (int j = 0; j < 2; ++j) x[j] = 0.5 + 0.6 * uni(rng);
            check_jets_fd(net, x);
        }
    }
    SECTION("pinned initial coefficient") {
        auto net = make_net(
            2, ConstraintSpec::none().with_pinned(
                   {0}, [](const Eigen::MatrixXd& X, bool need_grad, bool need_hess,
                           ScalarJetBatch& out) {
                       out.value = (X.col(0).array() * X.col(1).array()).cos();
                       if (need_grad) {
                           out.grad.resize(X.rows(), 2);
                           const Eigen::ArrayXd s = (X.col(0).array() * X.col(1).array()).sin();
                           out.grad.col(0) = -s * X.col(1).array();
                           out.grad.col(1) = -s * X.col(0).array();
                       }
                       if (need_hess) {
                           out.hess_diag.resize(X.rows(), 2);
                           const Eigen::ArrayXd c = (X.col(0).array() * X.col(1).array()).cos();
                           out.hess_diag.col(0) = -c * X.col(1).array().square();
                           out.hess_diag.col(1) = -c * X.col(0).array().square();
                       }
                   }));
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd x(2);
            for (int j = 0; j < 2; ++j) x[j] = uni(rng);
            check_jets_fd(net, x);
        }
    }
}

namespace {

// Scalar loss through the full jet pipeline; exercises value, gradient and
// second-derivative adjoints at once.
double jet_loss(const FieldNet& net, const Eigen::MatrixXd& X, MlpParams* grad) {
    NetJets jets;
    FieldNet::Workspace ws;
    net.forward(X, JetRequest::full(), jets, grad ? &ws : nullptr);
    const double b = static_cast<double>(X.rows());
    double loss = jets.value.squaredNorm() / b;
    for (const auto& m : jets.dx) loss += 0.5 * m.squaredNorm() / b;
    for (const auto& m : jets.dxx) loss += 0.25 * m.squaredNorm() / b;
    if (grad) {
        NetJets bar;
        bar.setZero(X.rows(), net.output_dim(), net.spatial_dim(), JetRequest::full());
        bar.value = 2.0 / b * jets.value;
        for (std::size_t j = 0; j < jets.dx.size(); ++j) bar.dx[j] = 1.0 / b * jets.dx[j];
        for (std::size_t j = 0; j < jets.dxx.size(); ++j) bar.dxx[j] = 0.5 / b * jets.dxx[j];
        net.backward(ws, bar, *grad);
    }
    return loss;
}

}  // namespace

TEST_CASE("parameter gradients match finite differences", "[field_net]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto constraint :
         {ConstraintSpec::none(), ConstraintSpec::unit_ball(),
          ConstraintSpec::box(-Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2))}) {
        FieldNet net = make_net(2, constraint);
        Eigen::MatrixXd X(6, 2);
        for (int i = 0; i < X.size(); ++i) X.data()[i] = 0.7 * uni(rng);

        MlpParams grad = MlpParams::zeros_like(net.params());
        jet_loss(net, X, &grad);

        std::vector<double> gflat;
        grad.to_flat(gflat);
        std::vector<double> pflat;
        net.params().to_flat(pflat);
        std::uniform_int_distribution<std::size_t> pick(0, pflat.size() - 1);
        const double h = 1e-5;
        for (int probe = 0; probe < 20; ++probe) {
            const std::size_t k = pick(rng);
            auto perturbed = [&](double delta) {
                std::vector<double> q = pflat;
                q[k] += delta;
                FieldNet other = net;
                other.params().from_flat(q.data(), q.size());
                return jet_loss(other, X, nullptr);
            };
            const double fd = (perturbed(h) - perturbed(-h)) / (2 * h);
            CHECK(std::abs(fd - gflat[k]) / std::max(1.0, std::abs(gflat[k])) < 1e-5);
        }
    }
}

TEST_CASE("pinned outputs receive no parameter gradient", "[field_net]") {
    auto net = make_net(1, ConstraintSpec::none().with_pinned({0}, zero_field()));
    Eigen::MatrixXd X(4, 1);
    X << 0.1, 0.2, 0.3, 0.4;
    NetJets jets;
    FieldNet::Workspace ws;
    net.forward(X, JetRequest::full(), jets, &ws);
    // adjoint touching only the pinned column
    NetJets bar;
    bar.setZero(4, net.output_dim(), 1, JetRequest::full());
    bar.value.col(0).setOnes();
    MlpParams grad = MlpParams::zeros_like(net.params());
    net.backward(ws, bar, grad);
    std::vector<double> flat;
    grad.to_flat(flat);
    for (double v : flat) CHECK(v == 0.0);
}

TEST_CASE("forward is bit-deterministic", "[field_net]") {
    auto net = make_net(2, ConstraintSpec::unit_ball(), {}, 99);
    Eigen::MatrixXd X(8, 2);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(-0.7, 0.7);
    for (int i = 0; i < X.size(); ++i) X.data()[i] = uni(rng);
    NetJets a, b;
    net.forward(X, JetRequest::full(), a);
    net.forward(X, JetRequest::full(), b);
    CHECK(a.value == b.value);
    for (std::size_t j = 0; j < a.dx.size(); ++j) CHECK(a.dx[j] == b.dx[j]);
    for (std::size_t j = 0; j < a.dxx.size(); ++j) CHECK(a.dxx[j] == b.dxx[j]);
}

TEST_CASE("dimension mismatch rejected", "[field_net]") {
    auto net = make_net(2, ConstraintSpec::none());
    Eigen::VectorXd x(3);
    x.setZero();
    CHECK_THROWS_AS(net.forward_jet(x), std::invalid_argument);
}
