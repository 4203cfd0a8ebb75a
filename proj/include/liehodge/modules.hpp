#pragma once

// Finite-dimensional modules over the algebra: generator matrices in the
// adapted frame, a hermitian positive definite Gram matrix, and the metric
// adjoints tau* = G^{-1} tau^dagger G. Non-unitary modules are first class;
// the unitary flag only records whether every generator is skew-adjoint.

#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "frame.hpp"
#include "json_io.hpp"

namespace liehodge {

struct ModuleRep {
    int dim_v = 0;
    std::vector<Mat> tau;  // generator matrices in the adapted basis
    Mat gram;
    bool unitary = false;

    Mat tau_star(int i) const {
        return gram.llt().solve(Mat(tau[static_cast<std::size_t>(i)].adjoint() * gram));
    }
};

inline bool compute_unitary_flag(const ModuleRep& rep, double tol) {
    for (const Mat& t : rep.tau)
        if (max_abs(Mat(t.adjoint() * rep.gram + rep.gram * t)) > tol) return false;
    return true;
}

inline double homomorphism_residual(const CartanFrame& fr, const ModuleRep& rep) {
    double worst = 0.0;
    for (int i = 0; i < fr.n; ++i)
        for (int j = 0; j < fr.n; ++j) {
            Mat expect = Mat::Zero(rep.dim_v, rep.dim_v);
            for (int k = 0; k < fr.n; ++k)
                if (fr.c(i, j, k) != 0.0)
                    expect += fr.c(i, j, k) * rep.tau[static_cast<std::size_t>(k)];
            const Mat got = rep.tau[static_cast<std::size_t>(i)] * rep.tau[static_cast<std::size_t>(j)] -
                            rep.tau[static_cast<std::size_t>(j)] * rep.tau[static_cast<std::size_t>(i)];
            worst = std::max(worst, max_abs(Mat(got - expect)));
        }
    return worst;
}

inline ValidationReport validate_module(const CartanFrame& fr, const ModuleRep& rep) {
    ValidationReport report;
    report.add("gram_hermitian", max_abs(Mat(rep.gram - rep.gram.adjoint())), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rep.gram + Mat(rep.gram.adjoint())));
    const double mineig = es.eigenvalues().minCoeff();
    report.add("gram_positive_definite", mineig > 0 ? 0.0 : -mineig + 1.0, 1e-12);
    report.add("homomorphism", homomorphism_residual(fr, rep), std::max(fr.tolerance, 1e-12) * 100);
    if (rep.unitary) {
        double skew = 0.0;
        for (const Mat& t : rep.tau)
            skew = std::max(skew, max_abs(Mat(t.adjoint() * rep.gram + rep.gram * t)));
        report.add("unitary_skew_adjoint", skew, 1e-12);
    }
    return report;
}

inline ModuleRep trivial_rep(const CartanFrame& fr) {
    ModuleRep rep;
    rep.dim_v = 1;
    rep.tau.assign(static_cast<std::size_t>(fr.n), Mat::Zero(1, 1));
    rep.gram = Mat::Identity(1, 1);
    rep.unitary = true;
    return rep;
}

// Complexified adjoint module in the adapted basis with the frame metric as
// Gram matrix. Unitary exactly when the frame is compact.
inline ModuleRep adjoint_rep(const CartanFrame& fr) {
    ModuleRep rep;
    rep.dim_v = fr.n;
    for (int i = 0; i < fr.n; ++i) rep.tau.push_back(fr.ad(i).cast<cdouble>());
    rep.gram = Mat::Identity(fr.n, fr.n);
    rep.unitary = compute_unitary_flag(rep, 1e-12);
    return rep;
}

// Wire format:
// {"dim_v": m, "generators": [n matrices of [re, im] entries], "gram": [[...]],
//  "unitary": bool}. Generators are given in the adapted basis. The unitary
// flag is verified against the data, never trusted.
inline ModuleRep module_from_json(const ordered_json& j, const std::string& what = "module") {
    ModuleRep rep;
    rep.dim_v = expect_field(j, "dim_v", what).get<int>();
    if (rep.dim_v < 1) throw input_error(what + ": dim_v must be positive");
    const auto& gens = expect_field(j, "generators", what);
    if (!gens.is_array() || gens.empty())
        throw input_error(what + ": generators must be a nonempty array");
    for (const auto& g : gens) {
        Mat t = json_to_cmat(g, what + ": generator");
        if (t.rows() != rep.dim_v || t.cols() != rep.dim_v)
            throw input_error(what + ": generator is not dim_v x dim_v");
        rep.tau.push_back(std::move(t));
    }
    if (auto it = j.find("gram"); it != j.end())
        rep.gram = json_to_cmat(*it, what + ": gram");
    else
        rep.gram = Mat::Identity(rep.dim_v, rep.dim_v);
    if (rep.gram.rows() != rep.dim_v || rep.gram.cols() != rep.dim_v)
        throw input_error(what + ": gram is not dim_v x dim_v");
    if (!hermitian_within(rep.gram, 1e-10))
        throw input_error(what + ": gram is not hermitian");
    if (Eigen::SelfAdjointEigenSolver<Mat>(rep.gram).eigenvalues().minCoeff() <= 0)
        throw input_error(what + ": gram is not positive definite");

    rep.unitary = compute_unitary_flag(rep, 1e-10);
    if (auto it = j.find("unitary"); it != j.end()) {
        if (it->get<bool>() != rep.unitary)
            throw input_error(what + ": unitary flag contradicts the generator data");
    }
    return rep;
}

inline ordered_json module_to_json(const ModuleRep& rep) {
    ordered_json j;
    j["dim_v"] = rep.dim_v;
    ordered_json gens = ordered_json::array();
    for (const Mat& t : rep.tau) gens.push_back(cmat_to_json(t));
    j["generators"] = std::move(gens);
    j["gram"] = cmat_to_json(rep.gram);
    j["unitary"] = rep.unitary;
    return j;
}

// CLI-facing resolver: keyword ("trivial", "adjoint") or a file path.
inline ModuleRep resolve_module(const CartanFrame& fr, const std::string& spec_text) {
    if (spec_text == "trivial") return trivial_rep(fr);
    if (spec_text == "adjoint") return adjoint_rep(fr);
    ModuleRep rep = module_from_json(load_json_file(spec_text), spec_text);
    if (static_cast<int>(rep.tau.size()) != fr.n)
        throw input_error(spec_text + ": generator count does not match algebra dimension");
    return rep;
}

}  // namespace liehodge
