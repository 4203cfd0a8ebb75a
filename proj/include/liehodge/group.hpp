#pragma once

// Numerics on the 2x2 split group: triangular and polar decompositions, the
// restricted-root displacement norm, and the basic spherical function
// computed by averaging over the compact direction.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"

namespace liehodge {

inline RMat rotation(double theta) {
    RMat k(2, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    k << c, -s, s, c;
    return k;
}

inline RMat diag_exp(double h) {
    RMat a = RMat::Zero(2, 2);
    a(0, 0) = std::exp(h);
    a(1, 1) = std::exp(-h);
    return a;
}

struct GroupElement {
    std::string model;  // "sl2r" or "su2"
    Mat matrix;
};

inline void validate_group_element(const GroupElement& g) {
    if (g.matrix.rows() != 2 || g.matrix.cols() != 2)
        throw input_error("group element must be a 2x2 matrix");
    const cdouble det = g.matrix(0, 0) * g.matrix(1, 1) - g.matrix(0, 1) * g.matrix(1, 0);
    if (g.model == "sl2r") {
        if (g.matrix.imag().cwiseAbs().maxCoeff() > 1e-12)
            throw input_error("split model element must be real");
        if (std::abs(det - 1.0) > 1e-10)
            throw input_error("group element must have unit determinant");
    } else if (g.model == "su2") {
        if (max_abs(Mat(g.matrix.adjoint() * g.matrix - Mat::Identity(2, 2))) > 1e-12)
            throw input_error("compact model element must be unitary");
        if (std::abs(det - 1.0) > 1e-12)
            throw input_error("group element must have unit determinant");
    } else {
        throw input_error("unknown group model '" + g.model + "'");
    }
}

// Decompositions below exist for the split model; the compact model is
// accepted as data but has no triangular decomposition here.
inline RMat require_split_real(const GroupElement& g) {
    validate_group_element(g);
    if (g.model != "sl2r")
        throw model_error("decompositions are implemented for the split model only");
    return g.matrix.real();
}

namespace detail {

inline void check_unimodular(const RMat& x) {
    if (x.rows() != 2 || x.cols() != 2)
        throw input_error("group element must be a 2x2 matrix");
    if (std::abs(x.determinant() - 1.0) > 1e-10)
        throw input_error("group element must have unit determinant");
}

}  // namespace detail

struct IwasawaNAK {
    RMat n;         // unit upper triangular
    RMat a;         // positive diagonal
    RMat k;         // rotation
    double xi = 0;  // off-diagonal entry of n
    double h = 0;   // a = diag(e^h, e^{-h})
    RMat h_mat;     // diag(h, -h)
};

// x = n a k read off the bottom row: the rotation aligning it with e2, then
// the diagonal scale, then the unipotent rest.
inline IwasawaNAK iwasawa_nak(const RMat& x) {
    detail::check_unimodular(x);
    IwasawaNAK r;
    const double rr = std::hypot(x(1, 0), x(1, 1));
    const double s = x(1, 0) / rr, c = x(1, 1) / rr;
    r.k.resize(2, 2);
    r.k << c, -s, s, c;
    r.a = RMat::Zero(2, 2);
    r.a(0, 0) = 1.0 / rr;
    r.a(1, 1) = rr;
    r.h = -std::log(rr);
    r.h_mat = RMat::Zero(2, 2);
    r.h_mat(0, 0) = r.h;
    r.h_mat(1, 1) = -r.h;
    RMat ainv = RMat::Zero(2, 2);
    ainv(0, 0) = rr;
    ainv(1, 1) = 1.0 / rr;
    r.n = x * r.k.transpose() * ainv;
    r.xi = r.n(0, 1);
    return r;
}

// Same decomposition by triangularizing from below: orthonormalize the rows
// bottom-first, which produces x = R Q with R upper triangular and Q a
// rotation after the determinant fix.
inline IwasawaNAK iwasawa_nak_rq(const RMat& x) {
    detail::check_unimodular(x);
    RVec e1(2);
    e1 << x(1, 0), x(1, 1);
    const double r11 = e1.norm();
    e1 /= r11;
    RVec row0(2);
    row0 << x(0, 0), x(0, 1);
    const double r01 = row0.dot(e1);
    RVec e0 = row0 - r01 * e1;
    double r00 = e0.norm();
    e0 /= r00;
    // det(Q) = +1 required for a rotation; flipping e0 flips r00 with it
    if (e0(0) * e1(1) - e0(1) * e1(0) < 0.0) {
        e0 = -e0;
        r00 = -r00;
    }
    IwasawaNAK r;
    r.k.resize(2, 2);
    r.k << e0(0), e0(1), e1(0), e1(1);
    r.a = RMat::Zero(2, 2);
    r.a(0, 0) = r00;
    r.a(1, 1) = r11;
    r.h = std::log(r00);
    r.h_mat = RMat::Zero(2, 2);
    r.h_mat(0, 0) = r.h;
    r.h_mat(1, 1) = -r.h;
    r.n = RMat::Identity(2, 2);
    r.n(0, 1) = r01 / r11;
    r.xi = r.n(0, 1);
    return r;
}

struct CartanKAK {
    RMat k1;
    RMat a;  // diag(sigma1, sigma2), sigma1 >= 1
    RMat k2;
    double sigma1 = 1.0;
};

// Polar decomposition x = k1 a k2 with both factors rotations: singular
// value decomposition with a joint determinant-sign fix.
inline CartanKAK cartan_kak(const RMat& x) {
    detail::check_unimodular(x);
    Eigen::JacobiSVD<RMat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RMat u = svd.matrixU();
    RMat v = svd.matrixV();
    if (u.determinant() < 0.0) {
        u.col(1) *= -1.0;
        v.col(1) *= -1.0;
    }
    CartanKAK r;
    r.k1 = u;
    r.k2 = v.transpose();
    r.a = RMat::Zero(2, 2);
    r.a(0, 0) = svd.singularValues()(0);
    r.a(1, 1) = svd.singularValues()(1);
    r.sigma1 = r.a(0, 0);
    return r;
}

// Displacement seminorm: with x = k1 e^X k2 and X in the split directions,
// the invariant length of X under the form B(X, Y) = 4 tr(XY) is twice the
// Frobenius norm of X, i.e. 2 sqrt(sum log^2 sigma_i).
inline double norm_p(const RMat& x) {
    detail::check_unimodular(x);
    Eigen::JacobiSVD<RMat> svd(x);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < 2; ++i) {
        const double l = std::log(svd.singularValues()(i));
        acc += l * l;
    }
    return 2.0 * std::sqrt(acc);
}

inline void check_spherical_nodes(int nodes) {
    if (nodes < 8 || nodes % 2 != 0)
        throw input_error("spherical quadrature needs an even node count of at least 8");
}

// Basic spherical function: the average over the compact direction of the
// reciprocal length of the first column,
//   phi0(x) = (1/2pi) Int_0^{2pi} || x u(theta) e1 ||^{-1} dtheta,
// computed with the periodic trapezoid rule (the uniform mean).
inline double spherical_phi0(const RMat& x, int nodes = 256) {
    detail::check_unimodular(x);
    check_spherical_nodes(nodes);
    const double x00 = x(0, 0), x01 = x(0, 1), x10 = x(1, 0), x11 = x(1, 1);
    auto term = [&](int j) {
        const double th = 2.0 * M_PI * j / nodes;
        const double c = std::cos(th), s = std::sin(th);
        const double v0 = x00 * c + x01 * s;
        const double v1 = x10 * c + x11 * s;
        // normalize by the rounded length of u(theta) itself so the identity
        // element integrates to exactly one
        return std::hypot(c, s) / std::hypot(v0, v1);
    };
    double acc = 0.0;
    if (nodes >= 4096) {
        // per-node storage plus an index-ordered reduction: bit-identical to
        // the serial loop at any worker count
        std::vector<double> vals(static_cast<std::size_t>(nodes));
        parallel_for(vals.size(),
                     [&](std::size_t j) { vals[j] = term(static_cast<int>(j)); });
        for (const double v : vals) acc += v;
    } else {
        for (int j = 0; j < nodes; ++j) acc += term(j);
    }
    return acc / nodes;
}

struct RichardsonCheck {
    double phi_n = 0.0;
    double phi_2n = 0.0;
    double phi_4n = 0.0;
    double diff_coarse = 0.0;
    double diff_fine = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

// Node-doubling convergence check: either both refinements agree to near
// machine level, or the error contracts at least fourth-fold per doubling.
inline RichardsonCheck richardson_check(const RMat& x, int base_nodes = 64) {
    RichardsonCheck r;
    r.phi_n = spherical_phi0(x, base_nodes);
    r.phi_2n = spherical_phi0(x, 2 * base_nodes);
    r.phi_4n = spherical_phi0(x, 4 * base_nodes);
    r.diff_coarse = std::abs(r.phi_n - r.phi_2n);
    r.diff_fine = std::abs(r.phi_2n - r.phi_4n);
    if (r.diff_fine < 1e-13 && r.diff_coarse < 1e-13) {
        r.pass = true;
        r.ratio = std::numeric_limits<double>::infinity();
    } else if (r.diff_fine == 0.0) {
        r.pass = true;
        r.ratio = std::numeric_limits<double>::infinity();
    } else {
        r.ratio = r.diff_coarse / r.diff_fine;
        r.pass = r.ratio >= 4.0;
    }
    return r;
}

struct GrowthFit {
    double exponent = 0.0;      // fitted power of (1 + t)
    double log_c_fit = 0.0;     // least-squares intercept
    double log_c_bound = 0.0;   // intercept inflated to dominate every sample
    double max_abs_residual = 0.0;
    bool pass = false;
};

// Fit log phi0(a_t) + t = log C + d log(1 + t) and inflate the constant so
// the bound holds pointwise on the sampled window.
inline GrowthFit growth_fit(const std::vector<double>& ts, const std::vector<double>& phis) {
    if (ts.size() != phis.size() || ts.size() < 3)
        throw input_error("growth fit needs at least three samples");
    const auto count = static_cast<Eigen::Index>(ts.size());
    RMat design(count, 2);
    RVec z(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double t = ts[static_cast<std::size_t>(i)];
        const double phi = phis[static_cast<std::size_t>(i)];
        if (t <= 0.0 || phi <= 0.0) throw input_error("growth fit needs positive samples");
        design(i, 0) = 1.0;
        design(i, 1) = std::log1p(t);
        z(i) = std::log(phi) + t;
    }
    const RVec coef = design.colPivHouseholderQr().solve(z);
    GrowthFit g;
    g.log_c_fit = coef(0);
    g.exponent = coef(1);
    const RVec res = z - design * coef;
    double worst_over = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        g.max_abs_residual = std::max(g.max_abs_residual, std::abs(res(i)));
        worst_over = std::max(worst_over, res(i));
    }
    g.log_c_bound = g.log_c_fit + worst_over;
    // goodness-of-fit gate: the model explains honest samples to ~1e-2 on
    // this window while a spurious e^t factor leaves ~0.45
    g.pass = g.max_abs_residual <= 0.25;
    return g;
}

// Weight used by the Schwartz-type seminorms: polynomial growth in the
// displacement against the spherical decay.
inline double seminorm_weight(const RMat& x, double r, double p, int nodes = 256) {
    if (p <= 0.0) throw input_error("integrability exponent must be positive");
    const double np = norm_p(x);
    const double phi = spherical_phi0(x, nodes);
    return std::pow(1.0 + np, r) * std::pow(phi, -2.0 / p);
}

// Deterministic sampler for split group elements: explicit Box-Muller over
// mt19937_64 so the stream is identical across platforms.
class Sl2Sampler {
  public:
    explicit Sl2Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() {
        return static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double gauss() {
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // n(x) a(h) k(theta) with x gaussian, h and theta uniform
    RMat next() {
        const double x = gauss();
        const double h = 2.0 * uniform() - 1.0;
        const double th = 2.0 * M_PI * uniform();
        RMat n = RMat::Identity(2, 2);
        n(0, 1) = x;
        return n * diag_exp(h) * rotation(th);
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace liehodge
