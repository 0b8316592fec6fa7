#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evopinn {

/// Temporal mesh 0-indexed: elements m = 0..num_elements()-1 span
/// [node(m), node(m+1)].
class TimePartition {
public:
    explicit TimePartition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.size() < 2)
            throw std::invalid_argument("TimePartition: need at least two nodes");
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (!(nodes_[i] > nodes_[i - 1]))
                throw std::invalid_argument("TimePartition: nodes must be strictly increasing");
    }

    int num_elements() const { return static_cast<int>(nodes_.size()) - 1; }
    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    double width(int element) const { return nodes_[element + 1] - nodes_[element]; }
    double t_begin() const { return nodes_.front(); }
    double t_end() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Element containing t. Interior mesh nodes belong to the element on
    /// their left (one-sided limits are taken from the left); t_begin belongs
    /// to element 0. Accepts |t - endpoint| <= tol overshoot.
    int element_containing(double t, double tol = 1e-12) const {
        if (t < t_begin() - tol || t > t_end() + tol)
            throw std::domain_error("TimePartition: t=" + std::to_string(t) +
                                    " outside [" + std::to_string(t_begin()) + ", " +
                                    std::to_string(t_end()) + "]");
        if (t <= t_begin()) return 0;
        if (t >= t_end()) return num_elements() - 1;
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
        return static_cast<int>(it - nodes_.begin()) - 1;
    }

    bool same_as(const TimePartition& other, double tol = 0.0) const {
        if (nodes_.size() != other.nodes_.size()) return false;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (std::abs(nodes_[i] - other.nodes_[i]) > tol) return false;
        return true;
    }

private:
    std::vector<double> nodes_;
};

inline TimePartition build_partition(double t_start, double t_end, int num_elements) {
    if (!(t_end > t_start))
        throw std::invalid_argument("build_partition: t_end must exceed t_start");
    if (num_elements < 1)
        throw std::invalid_argument("build_partition: need at least one element");
    std::vector<double> nodes(static_cast<std::size_t>(num_elements) + 1);
    const double h = (t_end - t_start) / num_elements;
    for (int i = 0; i <= num_elements; ++i) nodes[i] = t_start + i * h;
    nodes.front() = t_start;
    nodes.back() = t_end;
    return TimePartition(std::move(nodes));
}

/// Gauss-Legendre rule mapped to [0,1]; weights sum to 1 and the rule is
/// exact for polynomials up to degree 2K-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

inline QuadratureRule gauss_rule(int num_points) {
    if (num_points < 1 || num_points > 16)
        throw std::invalid_argument("gauss_rule: K must be in [1,16], got " +
                                    std::to_string(num_points));
    const int n = num_points;
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = 0.5 * (1.0 - x);  // descending root order -> ascending node
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.5;
        rule.weights[0] = 1.0;
    }
    return rule;
}

enum class BasisFamily { LagrangeP1, LagrangeP2, HermiteC1, SplineC2 };

inline std::string to_string(BasisFamily f) {
    switch (f) {
        case BasisFamily::LagrangeP1: return "lagrange-p1";
        case BasisFamily::LagrangeP2: return "lagrange-p2";
        case BasisFamily::HermiteC1: return "hermite-c1";
        case BasisFamily::SplineC2: return "spline-c2";
    }
    return "?";
}

inline BasisFamily basis_family_from_string(const std::string& s) {
    if (s == "lagrange-p1") return BasisFamily::LagrangeP1;
    if (s == "lagrange-p2") return BasisFamily::LagrangeP2;
    if (s == "hermite-c1") return BasisFamily::HermiteC1;
    if (s == "spline-c2") return BasisFamily::SplineC2;
    throw std::invalid_argument("unknown basis family '" + s + "'");
}

/// Piecewise-polynomial temporal basis over a partition. Index convention:
///  - lagrange-p1: one hat per mesh node, left to right (N = M).
///  - lagrange-p2: interpolation nodes t_0, mid_1, t_1, mid_2, ... (N = 2M).
///  - hermite-c1: per mesh node, (value, slope) interleaved (N = 2M+1).
///  - spline-c2: cubic B-splines on a clamped knot vector (N = M+2).
/// Evaluation at interior mesh nodes takes the left element's polynomial.
class TimeBasis {
public:
    TimeBasis(TimePartition partition, BasisFamily family)
        : partition_(std::move(partition)), family_(family) {
        const int m = partition_.num_elements();
        switch (family_) {
            case BasisFamily::LagrangeP1: last_index_ = m; break;
            case BasisFamily::LagrangeP2: last_index_ = 2 * m; break;
            case BasisFamily::HermiteC1: last_index_ = 2 * m + 1; break;
            case BasisFamily::SplineC2: last_index_ = m + 2; break;
        }
        if (family_ == BasisFamily::SplineC2) build_spline_knots();
    }

    const TimePartition& partition() const { return partition_; }
    BasisFamily family() const { return family_; }
    int last_index() const { return last_index_; }      // N
    int size() const { return last_index_ + 1; }        // N + 1
    int polynomial_degree() const {
        switch (family_) {
            case BasisFamily::LagrangeP1: return 1;
            case BasisFamily::LagrangeP2: return 2;
            default: return 3;
        }
    }

    /// phi_i(t) and phi_i'(t) for all i; vectors are resized to N+1.
    void eval(double t, Eigen::VectorXd& values, Eigen::VectorXd& derivs) const {
        eval_in_element(t, partition_.element_containing(t), values, derivs);
    }

    /// One-sided evaluation: uses the polynomial of the given element even
    /// when t sits exactly on one of its endpoints.
    void eval_in_element(double t, int m, Eigen::VectorXd& values,
                         Eigen::VectorXd& derivs) const {
        const int n = size();
        values.setZero(n);
        derivs.setZero(n);
        t = std::min(std::max(t, partition_.t_begin()), partition_.t_end());
        const double h = partition_.width(m);
        const double xi = clamp_unit((t - partition_.node(m)) / h);
        switch (family_) {
            case BasisFamily::LagrangeP1: {
                values[m] = 1.0 - xi;
                values[m + 1] = xi;
                derivs[m] = -1.0 / h;
                derivs[m + 1] = 1.0 / h;
                break;
            }
            case BasisFamily::LagrangeP2: {
                const int base = 2 * m;
                values[base] = (1.0 - xi) * (1.0 - 2.0 * xi);
                values[base + 1] = 4.0 * xi * (1.0 - xi);
                values[base + 2] = xi * (2.0 * xi - 1.0);
                derivs[base] = (4.0 * xi - 3.0) / h;
                derivs[base + 1] = (4.0 - 8.0 * xi) / h;
                derivs[base + 2] = (4.0 * xi - 1.0) / h;
                break;
            }
            case BasisFamily::HermiteC1: {
                const int base = 2 * m;
                const double xi2 = xi * xi, xi3 = xi2 * xi;
                values[base] = 2.0 * xi3 - 3.0 * xi2 + 1.0;         // value @ left node
                values[base + 1] = h * (xi3 - 2.0 * xi2 + xi);      // slope @ left node
                values[base + 2] = -2.0 * xi3 + 3.0 * xi2;          // value @ right node
                values[base + 3] = h * (xi3 - xi2);                 // slope @ right node
                derivs[base] = (6.0 * xi2 - 6.0 * xi) / h;
                derivs[base + 1] = 3.0 * xi2 - 4.0 * xi + 1.0;
                derivs[base + 2] = (6.0 * xi - 6.0 * xi2) / h;
                derivs[base + 3] = 3.0 * xi2 - 2.0 * xi;
                break;
            }
            case BasisFamily::SplineC2: {
                eval_spline(t, m, values, derivs);
                break;
            }
        }
    }

    std::pair<Eigen::VectorXd, Eigen::VectorXd> eval(double t) const {
        Eigen::VectorXd v, d;
        eval(t, v, d);
        return {std::move(v), std::move(d)};
    }

    /// Inclusive element range [first, last] on which phi_i is supported.
    std::pair<int, int> support_elements(int i) const {
        const int m = partition_.num_elements();
        switch (family_) {
            case BasisFamily::LagrangeP1:
                return {std::max(0, i - 1), std::min(m - 1, i)};
            case BasisFamily::LagrangeP2: {
                const int node = i / 2;  // node index for even i, element midpoint for odd i
                if (i % 2 == 1) return {node, node};
                return {std::max(0, node - 1), std::min(m - 1, node)};
            }
            case BasisFamily::HermiteC1: {
                const int node = i / 2;
                return {std::max(0, node - 1), std::min(m - 1, node)};
            }
            case BasisFamily::SplineC2: {
                // B-spline i lives on knot span [knot_i, knot_{i+4}].
                const int first = std::max(0, i - 3);
                const int last = std::min(m - 1, i);
                return {first, last};
            }
        }
        return {0, m - 1};
    }

    /// Representative time per basis function (interpolation node for
    /// Lagrange, owning mesh node for Hermite DOFs, Greville abscissa for
    /// B-splines). Used by the temporal discrete distributions.
    double representative_time(int i) const {
        switch (family_) {
            case BasisFamily::LagrangeP1:
                return partition_.node(i);
            case BasisFamily::LagrangeP2: {
                const int node = i / 2;
                if (i % 2 == 0) return partition_.node(node);
                return 0.5 * (partition_.node(node) + partition_.node(node + 1));
            }
            case BasisFamily::HermiteC1:
                return partition_.node(i / 2);
            case BasisFamily::SplineC2:
                return (knots_[i + 1] + knots_[i + 2] + knots_[i + 3]) / 3.0;
        }
        return partition_.t_begin();
    }

private:
    static double clamp_unit(double xi) { return std::min(1.0, std::max(0.0, xi)); }

    void build_spline_knots() {
        const auto& nodes = partition_.nodes();
        knots_.clear();
        knots_.insert(knots_.end(), 3, nodes.front());
        knots_.insert(knots_.end(), nodes.begin(), nodes.end());
        knots_.insert(knots_.end(), 3, nodes.back());
        // size = M + 7; basis count = size - 4 = M + 3 = N + 1
    }

    // Cox-de Boor on the clamped knot vector; only the 4 splines supported on
    // element m are nonzero there.
    void eval_spline(double t, int element, Eigen::VectorXd& values,
                     Eigen::VectorXd& derivs) const {
        const int first = element;  // global index of the first spline alive on this element
        for (int local = 0; local < 4; ++local) {
            const int i = first + local;
            values[i] = bspline_value(i, 3, t);
            derivs[i] = bspline_deriv(i, t);
        }
    }

    double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }

    double bspline_value(int i, int p, double t) const {
        if (p == 0) {
            // half-open spans, except the last nonempty span absorbs t_end
            const double lo = knot(i), hi = knot(i + 1);
            if (lo == hi) return 0.0;
            if (t < lo || t > hi) return 0.0;
            if (t < hi) return 1.0;
            return hi == partition_.t_end() ? 1.0 : 0.0;
        }
        double acc = 0.0;
        const double dl = knot(i + p) - knot(i);
        if (dl > 0.0) acc += (t - knot(i)) / dl * bspline_value(i, p - 1, t);
        const double dr = knot(i + p + 1) - knot(i + 1);
        if (dr > 0.0) acc += (knot(i + p + 1) - t) / dr * bspline_value(i + 1, p - 1, t);
        return acc;
    }

    double bspline_deriv(int i, double t) const {
        double acc = 0.0;
        const double dl = knot(i + 3) - knot(i);
        if (dl > 0.0) acc += bspline_value(i, 2, t) / dl;
        const double dr = knot(i + 4) - knot(i + 1);
        if (dr > 0.0) acc -= bspline_value(i + 1, 2, t) / dr;
        return 3.0 * acc;
    }

    TimePartition partition_;
    BasisFamily family_;
    int last_index_ = 0;
    std::vector<double> knots_;  // spline only
};

}  // namespace evopinn
