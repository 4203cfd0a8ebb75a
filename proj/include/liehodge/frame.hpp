#pragma once

// Adapted orthonormal frames. A Cartan frame eigen-splits the algebra along
// an involution theta and orthonormalizes with respect to the inner product
// B^theta(X, Y) = -B(X, theta Y); sign convention fixed so that a compact
// form with B equal to its (negative definite) Killing form produces a
// positive definite metric. A metric frame orthonormalizes against a plain
// positive definite matrix when no invariant form exists.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "core.hpp"

namespace liehodge {

struct CartanFrame {
    int n = 0;
    bool cartan = true;
    // Columns are the adapted basis vectors in input coordinates.
    RMat change_of_basis;
    RMat change_of_basis_inv;
    std::vector<int> k_indices, p_indices;
    // B restricted to the adapted basis: -1 on the k block, +1 on the p
    // block. Metric frames carry +1 everywhere and cartan = false.
    std::vector<double> eps;
    std::vector<double> structure;  // adapted structure tensor, same layout as AlgebraSpec
    std::vector<std::string> labels;
    double gram_residual = 0.0;
    double tolerance = 1e-9;

    double c(int i, int j, int k) const {
        return structure[static_cast<std::size_t>((i * n + j)) * n + k];
    }
    double& c(int i, int j, int k) {
        return structure[static_cast<std::size_t>((i * n + j)) * n + k];
    }

    bool in_k(int i) const {
        return std::find(k_indices.begin(), k_indices.end(), i) != k_indices.end();
    }

    RMat ad(int i) const {
        RMat m = RMat::Zero(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) m(k, j) = c(i, j, k);
        return m;
    }

    // Coadjoint action on dual coordinates: (cadj X_i)_{g b} = C^b_{g i}.
    RMat cadj(int i) const {
        RMat m = RMat::Zero(n, n);
        for (int g = 0; g < n; ++g)
            for (int b = 0; b < n; ++b) m(g, b) = c(g, i, b);
        return m;
    }

    // Metric adjoint of cadj; the frame is orthonormal so this is the
    // transpose, and it coincides with -ad.
    RMat cadj_star(int i) const { return cadj(i).transpose(); }
};

namespace detail {

// C'^c_{ab} = sum_{ijk} P(i,a) P(j,b) C^k_{ij} Pinv(c,k)
inline std::vector<double> rotate_structure(const AlgebraSpec& spec, const RMat& p,
                                            const RMat& pinv) {
    const int n = spec.n;
    std::vector<double> out(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            RVec image = RVec::Zero(n);
            for (int i = 0; i < n; ++i) {
                if (p(i, a) == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    if (p(j, b) == 0.0) continue;
                    for (int k = 0; k < n; ++k)
                        image(k) += p(i, a) * p(j, b) * spec.c(i, j, k);
                }
            }
            for (int cdx = 0; cdx < n; ++cdx) {
                double v = 0.0;
                for (int k = 0; k < n; ++k) v += pinv(cdx, k) * image(k);
                out[static_cast<std::size_t>((a * n + b)) * n + cdx] = v;
            }
        }
    return out;
}

// Stable Gram-Schmidt in input order against the inner product ip,
// appending accepted unit vectors to basis. Near-null candidates (the part
// living in the other eigenspace) are dropped.
inline void gram_schmidt_append(std::vector<RVec>& basis, const std::vector<RVec>& candidates,
                                const RMat& ip, double drop) {
    for (const RVec& cand : candidates) {
        RVec v = cand;
        for (const RVec& b : basis) v -= (b.dot(ip * v)) * b;
        // second pass for orthogonality at roundoff scale
        for (const RVec& b : basis) v -= (b.dot(ip * v)) * b;
        const double norm2 = v.dot(ip * v);
        if (norm2 > drop) basis.push_back(v / std::sqrt(norm2));
    }
}

}  // namespace detail

inline CartanFrame cartan_frame(const AlgebraSpec& spec, const RMat& theta, const RMat& b) {
    const int n = spec.n;
    const double tol = spec.tolerance;
    if (theta.rows() != n || theta.cols() != n || b.rows() != n || b.cols() != n)
        throw input_error("cartan_frame: involution/form must be dim x dim");

    const double thmax = std::max(1.0, max_abs(theta));
    if (max_abs(RMat(theta * theta - RMat::Identity(n, n))) / (thmax * thmax) > tol)
        throw input_error("cartan_frame: involution does not square to the identity");

    AlgebraSpec probe = spec;
    probe.involution = theta;
    probe.form = b;
    ValidationReport vr = validate_algebra(probe);
    for (const auto& chk : vr.checks) {
        if (!chk.pass) {
            if (chk.name == "involution_automorphism")
                throw frame_error("cartan_frame: involution is not a Lie algebra automorphism");
            if (chk.name == "form_symmetric" || chk.name == "form_invariant")
                throw form_error("cartan_frame: form is not symmetric ad-invariant");
            throw input_error("cartan_frame: algebra fails validation at check " + chk.name);
        }
    }

    RMat btheta = -b * theta;
    if (max_abs(RMat(btheta - btheta.transpose())) > tol * std::max(1.0, max_abs(btheta)) * 10)
        throw frame_error("cartan_frame: B^theta is not symmetric");
    btheta = 0.5 * (btheta + RMat(btheta.transpose()));
    Eigen::SelfAdjointEigenSolver<RMat> es(btheta);
    if (es.eigenvalues().minCoeff() <= tol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
        throw frame_error(
            "cartan_frame: B^theta is not positive definite; the involution/form pair is not "
            "of Cartan type");

    // theta-eigenprojections of the input basis, k block first
    std::vector<RVec> kc, pc;
    for (int i = 0; i < n; ++i) {
        RVec e = RVec::Zero(n);
        e(i) = 1.0;
        kc.push_back(0.5 * (e + theta * e));
        pc.push_back(0.5 * (e - theta * e));
    }
    const double drop = 1e-8 * std::max(1.0, max_abs(btheta));
    std::vector<RVec> basis;
    detail::gram_schmidt_append(basis, kc, btheta, drop);
    const int dim_k = static_cast<int>(basis.size());
    detail::gram_schmidt_append(basis, pc, btheta, drop);
    if (static_cast<int>(basis.size()) != n)
        throw frame_error("cartan_frame: eigenspace split does not span the algebra");

    CartanFrame fr;
    fr.n = n;
    fr.cartan = true;
    fr.tolerance = tol;
    fr.change_of_basis.resize(n, n);
    for (int i = 0; i < n; ++i) fr.change_of_basis.col(i) = basis[static_cast<std::size_t>(i)];
    fr.change_of_basis_inv = fr.change_of_basis.inverse();
    for (int i = 0; i < n; ++i)
        (i < dim_k ? fr.k_indices : fr.p_indices).push_back(i);

    fr.gram_residual = max_abs(
        RMat(fr.change_of_basis.transpose() * btheta * fr.change_of_basis - RMat::Identity(n, n)));
    if (fr.gram_residual > 100 * std::max(tol, 1e-14))
        throw frame_error("cartan_frame: adapted basis failed orthonormality");

    const RMat b_adapted = fr.change_of_basis.transpose() * b * fr.change_of_basis;
    for (int i = 0; i < n; ++i) {
        const double expected = fr.in_k(i) ? -1.0 : 1.0;
        if (std::abs(b_adapted(i, i) - expected) > 1e-8)
            throw frame_error("cartan_frame: form does not restrict to +-1 on the adapted basis");
        fr.eps.push_back(expected);
    }

    fr.structure = detail::rotate_structure(spec, fr.change_of_basis, fr.change_of_basis_inv);
    int nk = 0, np = 0;
    for (int i = 0; i < n; ++i)
        fr.labels.push_back(fr.in_k(i) ? "K" + std::to_string(++nk)
                                       : "P" + std::to_string(++np));
    return fr;
}

inline CartanFrame cartan_frame(const AlgebraSpec& spec) {
    if (!spec.involution || !spec.form)
        throw frame_error("cartan_frame: spec carries no involution/form pair");
    return cartan_frame(spec, *spec.involution, *spec.form);
}

// Orthonormalizes the input basis against a plain positive definite metric.
// No invariant form is claimed: eps is +1 everywhere, both index sets stay
// empty and downstream Cartan-only operations refuse the frame.
inline CartanFrame metric_frame(const AlgebraSpec& spec, const RMat& metric) {
    const int n = spec.n;
    if (metric.rows() != n || metric.cols() != n)
        throw input_error("metric_frame: metric must be dim x dim");
    if (max_abs(RMat(metric - metric.transpose())) > spec.tolerance * 10)
        throw form_error("metric_frame: metric is not symmetric");
    Eigen::LLT<RMat> llt(metric);
    if (llt.info() != Eigen::Success)
        throw form_error("metric_frame: metric is not positive definite");

    CartanFrame fr;
    fr.n = n;
    fr.cartan = false;
    fr.tolerance = spec.tolerance;
    // upper-triangular change of basis = Gram-Schmidt of the input order
    RMat lt = llt.matrixL();
    fr.change_of_basis = lt.transpose().inverse();
    fr.change_of_basis_inv = lt.transpose();
    fr.eps.assign(static_cast<std::size_t>(n), 1.0);
    fr.gram_residual = max_abs(RMat(fr.change_of_basis.transpose() * metric * fr.change_of_basis -
                                    RMat::Identity(n, n)));
    fr.structure = detail::rotate_structure(spec, fr.change_of_basis, fr.change_of_basis_inv);
    for (int i = 0; i < n; ++i) fr.labels.push_back("Z" + std::to_string(i + 1));
    return fr;
}

inline CartanFrame metric_frame(const AlgebraSpec& spec) {
    return metric_frame(spec, RMat::Identity(spec.n, spec.n));
}

// Builds the Cartan frame when the spec carries an involution/form pair and
// falls back to the identity metric frame otherwise.
inline CartanFrame build_frame(const AlgebraSpec& spec) {
    if (spec.involution && spec.form) return cartan_frame(spec);
    return metric_frame(spec);
}

// Structural invariants of an adapted frame, reported with the same
// mechanics as validate_algebra. For Cartan frames this includes the
// bracket compatibility of the splitting, the adapted-constant symmetries
// and the coadjoint restriction identities.
inline ValidationReport frame_invariants(const CartanFrame& fr) {
    ValidationReport report;
    const int n = fr.n;
    double cmax = 1.0;
    for (double v : fr.structure) cmax = std::max(cmax, std::abs(v));

    report.add("orthonormality", fr.gram_residual, std::max(fr.tolerance, 1e-12) * 100);

    // musical identity in an orthonormal frame
    double musical = 0.0;
    for (int i = 0; i < n; ++i)
        musical = std::max(musical, max_abs(RMat(fr.cadj_star(i) + fr.ad(i))));
    report.add("cadj_star_is_minus_ad", musical / cmax, 1e-12);

    // ad and cadj are bracket homomorphisms
    double hom = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RMat lhs_ad = RMat::Zero(n, n), lhs_cadj = RMat::Zero(n, n);
            for (int k = 0; k < n; ++k) {
                if (fr.c(i, j, k) == 0.0) continue;
                lhs_ad += fr.c(i, j, k) * fr.ad(k);
                lhs_cadj += fr.c(i, j, k) * fr.cadj(k);
            }
            hom = std::max(hom, max_abs(RMat(lhs_ad - (fr.ad(i) * fr.ad(j) - fr.ad(j) * fr.ad(i)))));
            hom = std::max(hom,
                           max_abs(RMat(lhs_cadj - (fr.cadj(i) * fr.cadj(j) - fr.cadj(j) * fr.cadj(i)))));
        }
    report.add("adjoint_families_homomorphism", hom / (cmax * cmax), 1e-12);

    if (fr.cartan) {
        // [k,k] in k, [k,p] in p, [p,p] in k
        double compat = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const bool ik = fr.in_k(i), jk = fr.in_k(j), kk = fr.in_k(k);
                    const bool allowed = (ik && jk) ? kk : (ik != jk) ? !kk : kk;
                    if (!allowed) compat = std::max(compat, std::abs(fr.c(i, j, k)));
                }
        report.add("bracket_compatibility", compat / cmax, 1e-12);

        // adapted-constant symmetries across the splitting:
        //   C^beta_{alpha i} = C^alpha_{i beta} = -C^i_{beta alpha}
        //   C^k_{ij} = C^i_{jk};  C^i_{alpha j} = 0
        double sym = 0.0;
        for (int i : fr.k_indices)
            for (int al : fr.p_indices)
                for (int be : fr.p_indices) {
                    sym = std::max(sym, std::abs(fr.c(al, i, be) - fr.c(i, be, al)));
                    sym = std::max(sym, std::abs(fr.c(al, i, be) + fr.c(be, al, i)));
                }
        for (int i : fr.k_indices)
            for (int j : fr.k_indices)
                for (int k : fr.k_indices)
                    sym = std::max(sym, std::abs(fr.c(i, j, k) - fr.c(j, k, i)));
        for (int i : fr.k_indices)
            for (int al : fr.p_indices)
                for (int j : fr.k_indices)
                    sym = std::max(sym, std::abs(fr.c(al, j, i)));
        report.add("adapted_symmetries", sym / cmax, 1e-12);

        // restriction identity: cadj = -cadj* on k, cadj = +cadj* on p
        double restr = 0.0;
        for (int i : fr.k_indices)
            restr = std::max(restr, max_abs(RMat(fr.cadj(i) + fr.cadj_star(i))));
        for (int al : fr.p_indices)
            restr = std::max(restr, max_abs(RMat(fr.cadj(al) - fr.cadj_star(al))));
        report.add("coadjoint_restriction", restr / cmax, 1e-12);
    }
    return report;
}

}  // namespace liehodge
