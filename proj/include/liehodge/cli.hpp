#pragma once

// Command implementations behind the liehodge executable. Everything is
// stream-parameterized so the test suite can drive commands in process.
//
// Exit codes: 0 all checks passed, 1 a verification failed or the data does
// not support the requested operation, 2 warnings escalated by --strict,
// 3 malformed input (bad flags, unreadable files, parse errors).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "report.hpp"

namespace liehodge {

struct RunConfig {
    std::string command;
    std::string target;  // algebra name/path, or a group element path
    std::string module = "trivial";
    int degree = -1;  // -1 means every admissible degree
    double t = 0.5;
    int order = 8;
    int nodes = 256;
    int dim = 8;
    std::uint64_t seed = 7;
    bool strict = false;
    std::string out_path;
    double tolerance = -1.0;  // <= 0 keeps the per-check defaults
    double threshold_scale = 1.0;
};

namespace detail {

inline AlgebraSpec resolve_algebra(const std::string& name) {
    if (name.empty()) throw input_error("an algebra name or file path is required");
    for (const auto& [key, spec] : builtin::corpus())
        if (key == name) return algebra_from_json(spec, key);
    return algebra_from_json(load_json_file(name), name);
}

inline ModuleRep module_for(const CartanFrame& fr, const std::string& text) {
    if (text == "spin_half") {
        ModuleRep rep = module_from_json(builtin::su2_spinhalf_module(), "spin_half");
        if (static_cast<int>(rep.tau.size()) != fr.n)
            throw input_error("spin_half: generator count does not match algebra dimension");
        return rep;
    }
    return resolve_module(fr, text);
}

inline void emit(const ordered_json& doc, const RunConfig& cfg, std::ostream& out,
                 bool to_stdout = true) {
    const std::string text = doc.dump(2);
    if (to_stdout) out << text << "\n";
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw input_error("cannot write " + cfg.out_path);
        f << text << "\n";
    }
}

inline int finish(bool pass, const std::vector<std::string>& warnings, const RunConfig& cfg,
                  std::ostream& err) {
    for (const std::string& w : warnings) err << "warning: " << w << "\n";
    if (!pass) return 1;
    if (cfg.strict && !warnings.empty()) return 2;
    return 0;
}

inline double gate(const RunConfig& cfg, double dflt) {
    return cfg.tolerance > 0.0 ? cfg.tolerance : dflt;
}

}  // namespace detail

inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
    const ValidationReport vr = validate_algebra(spec);
    ordered_json doc;
    doc["algebra"] = vr.to_json();
    bool pass = vr.pass;
    if (pass) {
        const CartanFrame fr = build_frame(spec);
        const ValidationReport fi = frame_invariants(fr);
        ordered_json fj;
        fj["cartan"] = fr.cartan;
        fj["labels"] = fr.labels;
        fj["eps"] = fr.eps;
        fj["invariants"] = fi.to_json();
        doc["frame"] = fj;
        pass = pass && fi.pass;
        if (!cfg.module.empty()) {
            const ModuleRep rep = detail::module_for(fr, cfg.module);
            const ValidationReport mv = validate_module(fr, rep);
            doc["module"] = mv.to_json();
            pass = pass && mv.pass;
        }
    }
    doc["pass"] = pass;
    detail::emit(doc, cfg, out);
    return detail::finish(pass, {}, cfg, err);
}

inline int cmd_laplacian(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
    const CartanFrame fr = build_frame(spec);
    const ModuleRep rep = detail::module_for(fr, cfg.module);
    if (cfg.degree > fr.n)
        throw input_error("degree exceeds the algebra dimension " + std::to_string(fr.n));

    const ValidationReport mv = validate_module(fr, rep);
    const IdentitySuite suite = identity_suite(fr, rep, fr.n);
    const double tight = detail::gate(cfg, 1e-12);
    const double loose = detail::gate(cfg, 1e-10);
    bool pass = mv.pass && suite.d_square <= tight && suite.adjoint_residual <= loose &&
                suite.component_sum <= loose &&
                (!suite.closed_applicable || suite.closed_residual <= loose) &&
                suite.top_wedge <= tight;
    for (double r : suite.derivation) pass = pass && r <= tight;

    ordered_json doc;
    doc["module_validation"] = mv.to_json();
    doc["identities"] = identity_suite_json(suite);
    ordered_json dims = ordered_json::array();
    for (int q = 0; q <= fr.n; ++q) dims.push_back(cochain_basis(fr, rep.dim_v, q).dim());
    doc["cochain_dims"] = dims;
    doc["pass"] = pass;

    if (!cfg.out_path.empty()) {
        // full operator export next to the residual summary
        ordered_json ops = ordered_json::array();
        const int lo = cfg.degree >= 0 ? cfg.degree : 0;
        const int hi = cfg.degree >= 0 ? cfg.degree : fr.n;
        for (int q = lo; q <= hi; ++q) {
            ordered_json oq;
            oq["degree"] = q;
            oq["gram"] = cmat_to_json(gram_op(fr, rep, q));
            oq["d"] = linop_to_json(d_full(fr, rep, q));
            if (q >= 1) oq["delta"] = linop_to_json(delta_full(fr, rep, q));
            oq["laplacian"] = linop_to_json(laplacian(fr, rep, q));
            const LaplacianComponents comps = laplacian_components(fr, rep, q);
            oq["component_module"] = linop_to_json(comps.circ);
            oq["component_exterior"] = linop_to_json(comps.wedge);
            oq["component_mixed_mod_ext"] = linop_to_json(comps.circ_wedge);
            oq["component_mixed_ext_mod"] = linop_to_json(comps.wedge_circ);
            ops.push_back(std::move(oq));
        }
        doc["operators"] = std::move(ops);
    }
    detail::emit(doc, cfg, out);
    return detail::finish(pass, {}, cfg, err);
}

inline int cmd_kuga(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
    const CartanFrame fr = build_frame(spec);
    const ModuleRep rep = detail::module_for(fr, cfg.module);
    const KugaBlocks kb = kuga_blocks(fr, rep);
    const double tol = detail::gate(cfg, 1e-10);
    const bool pass = kb.residual_total <= tol && kb.residual_circ <= tol &&
                      kb.residual_wedge <= tol && kb.residual_mixed_cw <= tol &&
                      kb.residual_mixed_wc <= tol;
    ordered_json doc;
    doc["residual_total"] = kb.residual_total;
    doc["residual_module"] = kb.residual_circ;
    doc["residual_exterior"] = kb.residual_wedge;
    doc["residual_mixed_mod_ext"] = kb.residual_mixed_cw;
    doc["residual_mixed_ext_mod"] = kb.residual_mixed_wc;
    doc["tolerance"] = tol;
    doc["pass"] = pass;
    if (!cfg.out_path.empty()) {
        doc["blocks"] = ordered_json();
        doc["blocks"]["a"] = linop_to_json(LinOp{1, 1, kb.a});
        doc["blocks"]["b"] = linop_to_json(LinOp{1, 1, kb.b});
        doc["blocks"]["c"] = linop_to_json(LinOp{1, 1, kb.c});
        doc["blocks"]["d"] = linop_to_json(LinOp{1, 1, kb.d});
        doc["blocks"]["delta1"] = linop_to_json(LinOp{1, 1, kb.delta1});
    }
    detail::emit(doc, cfg, out);
    return detail::finish(pass, {}, cfg, err);
}

inline int cmd_betti(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
    const CartanFrame fr = build_frame(spec);
    const ModuleRep rep = detail::module_for(fr, cfg.module);
    const std::vector<BettiResult> table = betti_all(fr, rep, cfg.threshold_scale);

    bool pass = true;
    std::vector<std::string> warnings;
    std::string line;
    for (const BettiResult& b : table) {
        if (!line.empty()) line += " ";
        line += std::to_string(b.betti_spectral);
        pass = pass && b.agreement;
        if (b.near_threshold_warning)
            warnings.push_back("degree " + std::to_string(b.q) +
                               ": eigenvalue within a decade of the kernel threshold");
    }
    out << line << "\n";

    if (!cfg.out_path.empty()) {
        ordered_json doc;
        ordered_json rows = ordered_json::array();
        for (const BettiResult& b : table) {
            ordered_json r;
            r["degree"] = b.q;
            r["dim"] = b.dim;
            r["betti_spectral"] = b.betti_spectral;
            r["betti_rank"] = b.betti_rank;
            r["lambda_max"] = b.lambda_max;
            r["threshold"] = b.threshold;
            r["eigenvalues"] = b.eigenvalues;
            r["agreement"] = b.agreement;
            r["near_threshold_warning"] = b.near_threshold_warning;
            rows.push_back(std::move(r));
        }
        doc["table"] = std::move(rows);
        doc["pass"] = pass;
        detail::emit(doc, cfg, out, false);
    }
    return detail::finish(pass, warnings, cfg, err);
}

inline int cmd_casimir(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
    const CartanFrame fr = build_frame(spec);
    if (!fr.cartan)
        throw frame_error("the quadratic-element identity needs a Cartan frame");
    const GenContext ctx = GenContext::from_frame(fr);
    RMat adapted_form = RMat::Zero(fr.n, fr.n);
    for (int i = 0; i < fr.n; ++i) adapted_form(i, i) = fr.eps[static_cast<std::size_t>(i)];
    const PbwElement omega_g = casimir(ctx, adapted_form);
    const PbwElement omega_k = casimir_sub(ctx, adapted_form, fr.k_indices);
    const PbwElement bar = omega_bar(ctx);
    const PbwElement residual =
        pbw_add(pbw_add(omega_g, pbw_scale(omega_k, -2.0)), pbw_scale(bar, -1.0));

    const double tol = detail::gate(cfg, 1e-12);
    const double identity_res = coeff_max_abs(residual);
    const double central_res = centrality_residual(ctx, omega_g);
    const bool pass = identity_res <= tol && central_res <= tol;

    ordered_json doc;
    doc["identity_residual"] = identity_res;
    doc["centrality_residual"] = central_res;
    doc["tolerance"] = tol;
    doc["casimir_adapted"] = pbw_to_json(omega_g);
    if (spec.form) {
        const GenContext raw = GenContext::from_spec(spec);
        doc["casimir_input_basis"] = pbw_to_json(casimir(raw, *spec.form));
    }
    doc["pass"] = pass;
    detail::emit(doc, cfg, out);
    return detail::finish(pass, {}, cfg, err);
}

inline int cmd_semigroup(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Mat a, b;
    ordered_json source;
    if (!cfg.target.empty()) {
        const AlgebraSpec spec = detail::resolve_algebra(cfg.target);
        const CartanFrame fr = build_frame(spec);
        const ModuleRep rep = detail::module_for(fr, cfg.module);
        const int q = cfg.degree >= 0 ? cfg.degree : 1;
        const HeatSplit hs = heat_split(fr, rep, q);
        a = hs.a;
        b = hs.b;
        source["kind"] = "cochain";
        source["degree"] = q;
    } else {
        if (cfg.dim < 1) throw input_error("--dim must be positive");
        Sl2Sampler smp(cfg.seed);
        const Mat h = detail::random_hermitian(smp, cfg.dim);
        a = h * h.adjoint();
        a /= static_cast<double>(cfg.dim);
        a += Mat::Identity(cfg.dim, cfg.dim);
        b = detail::random_hermitian(smp, cfg.dim);
        b *= 0.1 * op_norm(a) / std::max(op_norm(b), 1e-300);
        source["kind"] = "random";
        source["dim"] = cfg.dim;
        source["seed"] = cfg.seed;
    }

    const DysonPhillipsResult dp =
        dyson_phillips(a, b, cfg.t, DysonPhillipsOptions{cfg.order, 32, {}});
    const double tol = detail::gate(cfg, 1e-6);
    const bool pass = dp.error <= tol;
    std::vector<std::string> warnings;
    if (dp.convergence_warning)
        warnings.push_back("the grand sum of the tail majorant diverges at this horizon; "
                           "the truncation bound is not certified");

    ordered_json doc;
    doc["source"] = source;
    doc["t"] = dp.t;
    doc["order"] = dp.order;
    doc["error"] = dp.error;
    doc["tolerance"] = tol;
    doc["tail_bound"] = dp.tail_bound;
    doc["rho"] = dp.rho;
    doc["term_norms"] = dp.term_norms;
    doc["partial_errors"] = dp.partial_errors;
    doc["convergence_warning"] = dp.convergence_warning;
    doc["pass"] = pass;
    detail::emit(doc, cfg, out);
    return detail::finish(pass, warnings, cfg, err);
}

inline int cmd_spherical(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    RMat x;
    if (!cfg.target.empty()) {
        const ordered_json j = load_json_file(cfg.target);
        GroupElement g;
        g.model = expect_field(j, "model", cfg.target).get<std::string>();
        g.matrix = json_to_cmat(expect_field(j, "matrix", cfg.target), cfg.target + ": matrix");
        x = require_split_real(g);
    } else {
        x = diag_exp(cfg.t);
    }

    const double phi = spherical_phi0(x, cfg.nodes);
    const IwasawaNAK nak = iwasawa_nak(x);
    const IwasawaNAK nak_rq = iwasawa_nak_rq(x);
    const CartanKAK kak = cartan_kak(x);
    const double recon =
        std::max({max_abs(RMat(nak.n * nak.a * nak.k - x)),
                  max_abs(RMat(nak_rq.n * nak_rq.a * nak_rq.k - x)),
                  max_abs(RMat(kak.k1 * kak.a * kak.k2 - x))});
    const double agree = std::max({max_abs(RMat(nak.n - nak_rq.n)),
                                   max_abs(RMat(nak.a - nak_rq.a)),
                                   max_abs(RMat(nak.k - nak_rq.k))});
    const RichardsonCheck rich = richardson_check(x, std::max(8, cfg.nodes / 4));

    const double tol = detail::gate(cfg, 1e-12);
    const bool pass = recon <= tol && agree <= std::max(tol, 1e-10) && phi > 0.0 &&
                      phi <= 1.0 + 1e-12;
    std::vector<std::string> warnings;
    if (!rich.pass)
        warnings.push_back("node doubling does not contract the quadrature error; "
                           "the spherical value may be unresolved at this node count");

    ordered_json doc;
    doc["phi0"] = phi;
    doc["nodes"] = cfg.nodes;
    doc["norm_p"] = norm_p(x);
    ordered_json ij;
    ij["h"] = nak.h;
    ij["xi"] = nak.xi;
    ij["reconstruction"] = recon;
    ij["path_agreement"] = agree;
    doc["iwasawa"] = ij;
    ordered_json kj;
    kj["sigma1"] = kak.sigma1;
    doc["kak"] = kj;
    ordered_json rj;
    rj["phi_n"] = rich.phi_n;
    rj["phi_2n"] = rich.phi_2n;
    rj["phi_4n"] = rich.phi_4n;
    rj["ratio"] = rich.ratio;
    rj["pass"] = rich.pass;
    doc["richardson"] = rj;
    doc["pass"] = pass;
    detail::emit(doc, cfg, out);
    return detail::finish(pass, warnings, cfg, err);
}

inline int cmd_report_all(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ReportOptions opt;
    opt.seed = cfg.seed;
    const ReportResult rr = report_all(opt);
    detail::emit(rr.doc, cfg, out);
    return detail::finish(rr.pass, rr.warnings, cfg, err);
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.degree < -1) throw input_error("--degree must be nonnegative");
        if (cfg.command == "validate") return cmd_validate(cfg, out, err);
        if (cfg.command == "laplacian") return cmd_laplacian(cfg, out, err);
        if (cfg.command == "kuga") return cmd_kuga(cfg, out, err);
        if (cfg.command == "betti") return cmd_betti(cfg, out, err);
        if (cfg.command == "casimir") return cmd_casimir(cfg, out, err);
        if (cfg.command == "semigroup") return cmd_semigroup(cfg, out, err);
        if (cfg.command == "spherical") return cmd_spherical(cfg, out, err);
        if (cfg.command == "report-all") return cmd_report_all(cfg, out, err);
        throw input_error("unknown command '" + cfg.command + "'");
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace liehodge
