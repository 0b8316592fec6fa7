#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace evopinn {

/// Fourier-collocation reference solution of the periodic reaction-diffusion
/// problem u_t = c1sq * u_xx - c2 (u^3 - u) on [-1, 1] with
/// u(x,0) = x^2 cos(pi x). Classic RK4 in time (the diffusion coefficient is
/// small enough that the system is not stiff at this resolution); spectra are
/// snapshotted on a uniform time grid and interpolated linearly for queries.
class AllenCahn1dReference {
public:
    AllenCahn1dReference(double c1_sq, double c2, double t_end, int modes = 512,
                         int steps = 5000, int snapshots = 400)
        : c1_sq_(c1_sq), c2_(c2), t_end_(t_end), n_(modes), snap_count_(snapshots + 1) {
        solve(steps);
    }

    double value(double x, double t) const {
        if (t < -1e-12 || t > t_end_ + 1e-12)
            throw std::domain_error("AllenCahn1dReference: t outside [0, T]");
        t = std::min(std::max(t, 0.0), t_end_);
        const double pos = t / t_end_ * (snap_count_ - 1);
        const int lo = std::min(static_cast<int>(pos), snap_count_ - 2);
        const double w = pos - lo;
        return (1.0 - w) * eval_snapshot(lo, x) + w * eval_snapshot(lo + 1, x);
    }

private:
    void solve(int steps) {
        std::vector<double> u(n_);
        for (int j = 0; j < n_; ++j) {
            const double x = -1.0 + 2.0 * j / n_;
            u[j] = x * x * std::cos(M_PI * x);
        }
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> uh(n_);
        fft.fwd(uh, u);

        lam_.resize(n_);
        for (int m = 0; m < n_; ++m) {
            const int freq = m <= n_ / 2 ? m : m - n_;
            const double k = M_PI * freq;  // 2*pi*freq / L with L = 2
            lam_[m] = -c1_sq_ * k * k;
        }

        auto rhs = [&](const std::vector<std::complex<double>>& state,
                       std::vector<std::complex<double>>& out) {
            std::vector<std::complex<double>> tmp(state);
            std::vector<double> phys(n_);
            fft.inv(phys, tmp);
            for (int j = 0; j < n_; ++j) {
                const double v = phys[j];
                phys[j] = -c2_ * (v * v * v - v);
            }
            fft.fwd(out, phys);
            for (int m = 0; m < n_; ++m) out[m] += lam_[m] * state[m];
        };

        const double dt = t_end_ / steps;
        const int snap_every = steps / (snap_count_ - 1);
        if (snap_every * (snap_count_ - 1) != steps)
            throw std::invalid_argument("AllenCahn1dReference: steps must divide snapshots");
        snaps_.assign(snap_count_, {});
        snaps_[0] = uh;
        std::vector<std::complex<double>> k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_);
        for (int s = 1; s <= steps; ++s) {
            rhs(uh, k1);
            for (int m = 0; m < n_; ++m) tmp[m] = uh[m] + 0.5 * dt * k1[m];
            rhs(tmp, k2);
            for (int m = 0; m < n_; ++m) tmp[m] = uh[m] + 0.5 * dt * k2[m];
            rhs(tmp, k3);
            for (int m = 0; m < n_; ++m) tmp[m] = uh[m] + dt * k3[m];
            rhs(tmp, k4);
            for (int m = 0; m < n_; ++m)
                uh[m] += dt / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
            if (s % snap_every == 0) snaps_[s / snap_every] = uh;
        }
    }

    double eval_snapshot(int snap, double x) const {
        // trigonometric interpolation of the stored spectrum at arbitrary x
        const auto& uh = snaps_[snap];
        const double theta = M_PI * (x + 1.0);  // k * (x+1) with k = pi * freq
        std::complex<double> acc = uh[0];
        for (int m = 1; m < n_ / 2; ++m) {
            const std::complex<double> phase(std::cos(m * theta), std::sin(m * theta));
            acc += uh[m] * phase + uh[n_ - m] * std::conj(phase);
        }
        acc += uh[n_ / 2] * std::cos(n_ / 2 * theta);
        return acc.real() / n_;
    }

    double c1_sq_, c2_, t_end_;
    int n_, snap_count_;
    std::vector<double> lam_;
    std::vector<std::vector<std::complex<double>>> snaps_;
};

}  // namespace evopinn
