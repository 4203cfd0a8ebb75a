#pragma once

// Gauss-Legendre rules on [-1, 1] by Newton iteration on the Legendre
// recurrence, plus barycentric Lagrange interpolation on a fixed node set.
// Nodes and weights are deterministic for a given count, so nested
// quadratures can share and cache them.

#include <cmath>
#include <vector>

#include "core.hpp"

namespace liehodge {

struct Quadrature {
    RVec nodes;    // ascending in (-1, 1)
    RVec weights;  // positive, sum to 2
};

inline Quadrature gauss_legendre(int count) {
    if (count < 1) throw input_error("gauss_legendre: node count must be positive");
    Quadrature q;
    q.nodes.resize(count);
    q.weights.resize(count);
    const int half = (count + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess
        double x = std::cos(M_PI * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes(i) = -x;
        q.nodes(count - 1 - i) = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights(i) = w;
        q.weights(count - 1 - i) = w;
    }
    return q;
}

// Map a canonical rule to [a, b].
inline void map_interval(const Quadrature& q, double a, double b, RVec& nodes, RVec& weights) {
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    nodes = (rad * q.nodes).array() + mid;
    weights = rad * q.weights;
}

// Barycentric interpolation weights for the canonical nodes; scale-free, so
// the same table serves any affine image of the node set.
class Barycentric {
  public:
    explicit Barycentric(const RVec& nodes) : nodes_(nodes), w_(nodes.size()) {
        const Eigen::Index n = nodes.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            double prod = 1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) prod *= (nodes_(i) - nodes_(j));
            w_(i) = 1.0 / prod;
        }
        w_ /= w_.cwiseAbs().maxCoeff();
    }

    // Interpolate samples given at an affine image a + (b-a)*(nodes+1)/2 by
    // mapping the query back to canonical coordinates first.
    double eval(const RVec& samples, double x) const {
        const Eigen::Index n = nodes_.size();
        double num = 0.0, den = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dx = x - nodes_(i);
            if (std::abs(dx) < 1e-14) return samples(i);
            const double c = w_(i) / dx;
            num += c * samples(i);
            den += c;
        }
        return num / den;
    }

    Mat eval(const std::vector<Mat>& samples, double x) const {
        const Eigen::Index n = nodes_.size();
        Mat num = Mat::Zero(samples.front().rows(), samples.front().cols());
        double den = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dx = x - nodes_(i);
            if (std::abs(dx) < 1e-14) return samples[static_cast<std::size_t>(i)];
            const double c = w_(i) / dx;
            num += c * samples[static_cast<std::size_t>(i)];
            den += c;
        }
        return Mat(num / den);
    }

    const RVec& nodes() const { return nodes_; }

  private:
    RVec nodes_;
    RVec w_;
};

}  // namespace liehodge
