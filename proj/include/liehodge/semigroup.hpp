#pragma once

// Perturbed heat semigroups.  e^{-t(A+B)} is rebuilt from the unperturbed
// semigroup e^{-tA} by the iterated integral recursion
//
//   Per^0(t) = e^{-tA},
//   Per^k(t) = -Int_0^t e^{-(t-s)A} B Per^{k-1}(s) ds,
//
// truncated at a configurable order.  Every integral is Gauss-Legendre on a
// fixed master grid over [0, t]; values of the previous term between grid
// nodes come from barycentric interpolation, so the quadrature geometry (and
// the cache of e^{-gap*A} factors, keyed by the time gap) is shared by all
// orders.
//
// The truncation error is certified by a scalar majorant: given phi >=
// ||e^{-tA}|| and psi >= ||e^{-tA} B||, term k is dominated by the iterated
// convolution phi * psi^{*k}, and the tail beyond order K by
// max(conv_{K+1}) / (1 - Int psi) when the integral is below one.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "cochain.hpp"
#include "core.hpp"
#include "expm.hpp"
#include "quadrature.hpp"

namespace liehodge {

struct MajorantModel {
    std::function<double(double)> phi;  // bound on the unperturbed semigroup
    std::function<double(double)> psi;  // bound on the perturbed kernel
    double alpha = 0.0;                 // psi(t) ~ t^{-alpha} near zero, alpha <= 1/2
};

// Scalar model with an integrable inverse-square-root singularity.
inline MajorantModel sqrt_singular_model() {
    MajorantModel m;
    m.phi = [](double t) { return std::exp(-t); };
    m.psi = [](double t) { return std::exp(-t) / std::sqrt(t); };
    m.alpha = 0.5;
    return m;
}

// Rigorous default model from the logarithmic norm of A and the norm of B:
// ||e^{-tA}|| <= e^{-mu t} with mu the smallest eigenvalue of the hermitian
// part of A.
inline MajorantModel lognorm_model(const Mat& a, const Mat& b) {
    const Mat h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_error("eigensolver failed");
    const double mu = es.eigenvalues().minCoeff();
    const double bn = op_norm(b);
    MajorantModel m;
    m.phi = [mu](double t) { return std::exp(-mu * t); };
    m.psi = [mu, bn](double t) { return bn * std::exp(-mu * t); };
    m.alpha = 0.0;
    return m;
}

namespace detail {

// Integral of f over [0, upper] when f carries a t^{-alpha} endpoint
// singularity, absorbed by the substitution t = u^2.  Valid for alpha <= 1/2.
inline double singular_integral(const std::function<double(double)>& f, double upper,
                                double alpha, const Quadrature& q) {
    if (alpha > 0.5) throw input_error("singularity exponent must be at most 1/2");
    if (upper <= 0.0) return 0.0;
    RVec nodes, weights;
    map_interval(q, 0.0, std::sqrt(upper), nodes, weights);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        const double u = nodes(i);
        acc += weights(i) * 2.0 * u * f(u * u);
    }
    return acc;
}

}  // namespace detail

// Laplace-type integral Int_0^inf e^{-omega t} f(t) dt.  The variable is
// rescaled so the e^{-s} mass always sits at unit scale, the singular cell
// [0, 1] is handled by substitution, and dyadic cells follow until they stop
// contributing.
inline double laplace_integral(const std::function<double(double)>& f, double omega,
                               double alpha, const Quadrature& q) {
    if (omega <= 0.0) throw input_error("Laplace integral needs a positive rate");
    auto g = [&](double s) { return std::exp(-s) * f(s / omega) / omega; };
    double acc = detail::singular_integral(g, 1.0, alpha, q);
    double lo = 1.0;
    for (int cell = 0; cell < 64; ++cell) {
        RVec nodes, weights;
        map_interval(q, lo, 2.0 * lo, nodes, weights);
        double piece = 0.0;
        for (Eigen::Index i = 0; i < nodes.size(); ++i) piece += weights(i) * g(nodes(i));
        acc += piece;
        lo *= 2.0;
        if (std::abs(piece) < 1e-17 * std::max(1e-300, std::abs(acc))) break;
    }
    return acc;
}

// Smallest rate omega1 at which the two Laplace conditions of the tail
// estimate hold: the transform of 2*phi at most one, the transform of
// phi + psi at most one sixteenth.
inline double find_omega1(const MajorantModel& mdl, const Quadrature& q, double cap = 1e6) {
    auto admissible = [&](double w) {
        const double lphi = laplace_integral(mdl.phi, w, 0.0, q);
        const double lpsi = laplace_integral(mdl.psi, w, mdl.alpha, q);
        return 2.0 * lphi <= 1.0 && lphi + lpsi <= 1.0 / 16.0;
    };
    double hi = 1.0;
    while (!admissible(hi)) {
        hi *= 2.0;
        if (hi > cap)
            throw majorant_error("no admissible rate below " + std::to_string(cap));
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (admissible(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

struct ConvolutionChain {
    double t = 0.0;
    std::vector<double> at_t;                  // conv_k(t), k = 0..depth
    std::vector<std::vector<double>> at_grid;  // conv_k at the master grid nodes
    std::vector<double> grid;                  // master grid, sqrt-adapted on [0, t]
};

// Iterated convolutions conv_0 = phi, conv_k = conv_{k-1} * psi at a fixed
// time.  The master grid is quadratic near zero so interpolation stays
// accurate where the chain has square-root behaviour.
inline ConvolutionChain convolution_chain(const MajorantModel& mdl, double t, int depth,
                                          const Quadrature& q) {
    if (t <= 0.0) throw input_error("convolution chain needs a positive time");
    ConvolutionChain ch;
    ch.t = t;
    const Eigen::Index nn = q.nodes.size();
    // master grid s_i = t * y_i^2 with y_i Gauss nodes on [0, 1]
    RVec y(nn);
    for (Eigen::Index i = 0; i < nn; ++i) y(i) = 0.5 * (q.nodes(i) + 1.0);
    for (Eigen::Index i = 0; i < nn; ++i) ch.grid.push_back(t * y(i) * y(i));
    const Barycentric bary(q.nodes);

    auto canonical = [&](double s) { return 2.0 * std::sqrt(s / t) - 1.0; };

    RVec cur(nn);
    for (Eigen::Index i = 0; i < nn; ++i) cur(i) = mdl.phi(ch.grid[static_cast<std::size_t>(i)]);
    double cur_t = mdl.phi(t);
    ch.at_t.push_back(cur_t);
    ch.at_grid.emplace_back(cur.data(), cur.data() + nn);

    auto layer = [&](const RVec& prev, double upper) {
        // Int_0^upper psi(upper - sigma) prev(sigma) dsigma, substituting
        // upper - sigma = u^2
        RVec un, uw;
        map_interval(q, 0.0, std::sqrt(upper), un, uw);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < un.size(); ++j) {
            const double u = un(j);
            const double sigma = upper - u * u;
            const double prev_val = bary.eval(prev, canonical(std::max(sigma, 0.0)));
            acc += uw(j) * 2.0 * u * mdl.psi(u * u) * prev_val;
        }
        return acc;
    };

    for (int k = 1; k <= depth; ++k) {
        RVec next(nn);
        for (Eigen::Index i = 0; i < nn; ++i) next(i) = layer(cur, ch.grid[static_cast<std::size_t>(i)]);
        cur_t = layer(cur, t);
        cur = next;
        ch.at_t.push_back(cur_t);
        ch.at_grid.emplace_back(cur.data(), cur.data() + nn);
    }
    return ch;
}

struct MajorantCertificate {
    double omega1 = 0.0;
    double laplace_phi2 = 0.0;   // transform of 2*phi at omega1
    double laplace_mixed = 0.0;  // transform of phi + psi at omega1
    struct Sample {
        double t = 0.0;
        int depth = 0;
        double log_conv = 0.0;   // log conv_n(t)
        double log_bound = 0.0;  // -n log 2 - 2 log t + t omega1
        bool ok = false;
    };
    std::vector<Sample> samples;
    bool all_ok = true;
};

// Verify, in log space, that the iterated convolutions respect the closed
// tail bound conv_n(t) <= 2^{-n} t^{-2} e^{t omega1}.  Log space matters:
// the right side overflows double for realistic rates.
inline MajorantCertificate majorant_certificate(const MajorantModel& mdl,
                                                const std::vector<double>& times,
                                                int max_depth, int quad_nodes = 32) {
    const Quadrature q = gauss_legendre(quad_nodes);
    MajorantCertificate cert;
    cert.omega1 = find_omega1(mdl, q);
    cert.laplace_phi2 = 2.0 * laplace_integral(mdl.phi, cert.omega1, 0.0, q);
    cert.laplace_mixed = laplace_integral(mdl.phi, cert.omega1, 0.0, q) +
                         laplace_integral(mdl.psi, cert.omega1, mdl.alpha, q);
    for (double t : times) {
        const ConvolutionChain ch = convolution_chain(mdl, t, max_depth, q);
        for (int n = 0; n <= max_depth; ++n) {
            MajorantCertificate::Sample s;
            s.t = t;
            s.depth = n;
            const double cv = ch.at_t[static_cast<std::size_t>(n)];
            s.log_conv = (cv > 0.0) ? std::log(cv) : -std::numeric_limits<double>::infinity();
            s.log_bound = -n * std::log(2.0) - 2.0 * std::log(t) + t * cert.omega1;
            s.ok = s.log_conv <= s.log_bound + 1e-9;
            cert.all_ok = cert.all_ok && s.ok;
            cert.samples.push_back(s);
        }
    }
    return cert;
}

struct DysonPhillipsOptions {
    int order = 12;
    int quad_nodes = 32;
    std::optional<MajorantModel> majorant;  // default: logarithmic-norm model
};

struct DysonPhillipsResult {
    double t = 0.0;
    int order = 0;
    Mat approx;
    Mat exact;
    double error = 0.0;                  // operator norm of approx - exact
    std::vector<double> term_norms;      // ||Per^k(t)||, k = 0..order
    std::vector<double> partial_errors;  // error after truncating at each order
    double rho = 0.0;                    // Int_0^t psi
    double tail_bound = 0.0;             // certified truncation bound
    bool convergence_warning = false;    // rho >= 1: the tail estimate fails
};

inline DysonPhillipsResult dyson_phillips(const Mat& a, const Mat& b, double t,
                                          const DysonPhillipsOptions& opt = {}) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw input_error("semigroup split needs two square matrices of equal size");
    if (t <= 0.0) throw input_error("evolution time must be positive");
    if (opt.order < 0) throw input_error("expansion order must be nonnegative");
    if (opt.quad_nodes < 4) throw input_error("need at least four quadrature nodes");

    const Eigen::Index d = a.rows();
    DysonPhillipsResult res;
    res.t = t;
    res.order = opt.order;
    res.exact = expm(Mat(-t * (a + b)));

    const Quadrature q = gauss_legendre(opt.quad_nodes);
    const Eigen::Index nn = q.nodes.size();
    RVec s_nodes, s_weights;
    map_interval(q, 0.0, t, s_nodes, s_weights);
    const Barycentric bary(q.nodes);
    auto canonical = [&](double s) { return 2.0 * s / t - 1.0; };

    // inner quadratures over [0, s_i], fixed once so the gap cache is shared
    std::vector<RVec> inner_nodes(static_cast<std::size_t>(nn)),
        inner_weights(static_cast<std::size_t>(nn));
    for (Eigen::Index i = 0; i < nn; ++i)
        map_interval(q, 0.0, s_nodes(i), inner_nodes[static_cast<std::size_t>(i)],
                     inner_weights[static_cast<std::size_t>(i)]);

    std::map<double, Mat> cache;
    auto em = [&](double gap) -> const Mat& {
        auto it = cache.find(gap);
        if (it == cache.end()) it = cache.emplace(gap, expm(Mat(-gap * a))).first;
        return it->second;
    };

    std::vector<Mat> cur(static_cast<std::size_t>(nn));
    for (Eigen::Index i = 0; i < nn; ++i) cur[static_cast<std::size_t>(i)] = em(s_nodes(i));
    Mat cur_t = em(t);
    res.approx = cur_t;
    res.term_norms.push_back(op_norm(cur_t));
    res.partial_errors.push_back(op_norm(Mat(res.approx - res.exact)));

    for (int k = 1; k <= opt.order; ++k) {
        std::vector<Mat> next(static_cast<std::size_t>(nn));
        for (Eigen::Index i = 0; i < nn; ++i) {
            Mat acc = Mat::Zero(d, d);
            const RVec& xn = inner_nodes[static_cast<std::size_t>(i)];
            const RVec& xw = inner_weights[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < xn.size(); ++j) {
                const Mat prev = bary.eval(cur, canonical(xn(j)));
                acc += xw(j) * (em(s_nodes(i) - xn(j)) * (b * prev));
            }
            next[static_cast<std::size_t>(i)] = -acc;
        }
        Mat acc_t = Mat::Zero(d, d);
        for (Eigen::Index j = 0; j < nn; ++j)
            acc_t += s_weights(j) * (em(t - s_nodes(j)) * (b * cur[static_cast<std::size_t>(j)]));
        cur_t = -acc_t;
        cur = std::move(next);
        res.approx += cur_t;
        res.term_norms.push_back(op_norm(cur_t));
        res.partial_errors.push_back(op_norm(Mat(res.approx - res.exact)));
    }
    res.error = res.partial_errors.back();

    const MajorantModel mdl = opt.majorant ? *opt.majorant : lognorm_model(a, b);
    res.rho = detail::singular_integral(mdl.psi, t, mdl.alpha, q);
    const ConvolutionChain ch = convolution_chain(mdl, t, opt.order + 1, q);
    double m_next = ch.at_t.back();
    for (double v : ch.at_grid.back()) m_next = std::max(m_next, v);
    if (res.rho < 1.0) {
        res.tail_bound = m_next / (1.0 - res.rho);
    } else {
        res.tail_bound = std::numeric_limits<double>::infinity();
        res.convergence_warning = true;
    }
    return res;
}

struct HeatSplit {
    Mat a;  // block-diagonal degree-zero part, one copy per tuple
    Mat b;  // everything else in the degree-q Laplacian
};

// Split the degree-q Laplacian for semigroup perturbation: A is the
// degree-zero block acting identically on every tuple, B the remainder.
inline HeatSplit heat_split(const CartanFrame& fr, const ModuleRep& rep, int q) {
    const auto count = static_cast<Eigen::Index>(degree_tuples(fr.n, q).size());
    HeatSplit hs;
    hs.a = kron(Mat(Mat::Identity(count, count)), delta_zero(fr, rep));
    hs.b = laplacian(fr, rep, q).mat - hs.a;
    return hs;
}

inline RVec log_grid(double lo, double hi, int count) {
    if (count < 2 || lo <= 0.0 || hi <= lo) throw input_error("bad log grid parameters");
    RVec g(count);
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) g(i) = std::exp(std::log(lo) + step * i);
    return g;
}

}  // namespace liehodge
