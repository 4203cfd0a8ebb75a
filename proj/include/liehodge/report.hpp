#pragma once

// Built-in example corpus and the aggregate report.  The report runs every
// identity suite on the corpus with a fixed seed and emits one ordered JSON
// document; two runs with the same seed produce byte-identical output, which
// downstream tooling relies on.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "cochain.hpp"
#include "core.hpp"
#include "frame.hpp"
#include "group.hpp"
#include "json_io.hpp"
#include "modules.hpp"
#include "pbw.hpp"
#include "semigroup.hpp"

namespace liehodge {
namespace builtin {

inline ordered_json identity_matrix(int n) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < n; ++j) row.push_back(i == j ? 1.0 : 0.0);
        rows.push_back(row);
    }
    return rows;
}

inline ordered_json su2_spec() {
    ordered_json j;
    j["name"] = "su2";
    j["dim"] = 3;
    j["labels"] = {"X1", "X2", "X3"};
    j["structure"] = ordered_json::array({
        ordered_json::array({1, 2, 3, 1.0}),
        ordered_json::array({2, 1, 3, -1.0}),
        ordered_json::array({2, 3, 1, 1.0}),
        ordered_json::array({3, 2, 1, -1.0}),
        ordered_json::array({3, 1, 2, 1.0}),
        ordered_json::array({1, 3, 2, -1.0}),
    });
    j["involution"] = identity_matrix(3);
    j["form"] = ordered_json::array({
        ordered_json::array({-2.0, 0.0, 0.0}),
        ordered_json::array({0.0, -2.0, 0.0}),
        ordered_json::array({0.0, 0.0, -2.0}),
    });
    j["tolerance"] = 1e-9;
    return j;
}

inline ordered_json sl2r_spec() {
    ordered_json j;
    j["name"] = "sl2r";
    j["dim"] = 3;
    j["labels"] = {"H", "E", "F"};
    j["structure"] = ordered_json::array({
        ordered_json::array({1, 2, 2, 2.0}),
        ordered_json::array({2, 1, 2, -2.0}),
        ordered_json::array({1, 3, 3, -2.0}),
        ordered_json::array({3, 1, 3, 2.0}),
        ordered_json::array({2, 3, 1, 1.0}),
        ordered_json::array({3, 2, 1, -1.0}),
    });
    j["involution"] = ordered_json::array({
        ordered_json::array({-1.0, 0.0, 0.0}),
        ordered_json::array({0.0, 0.0, -1.0}),
        ordered_json::array({0.0, -1.0, 0.0}),
    });
    j["form"] = ordered_json::array({
        ordered_json::array({8.0, 0.0, 0.0}),
        ordered_json::array({0.0, 0.0, 4.0}),
        ordered_json::array({0.0, 4.0, 0.0}),
    });
    j["tolerance"] = 1e-9;
    return j;
}

inline ordered_json heisenberg_spec() {
    ordered_json j;
    j["name"] = "heisenberg";
    j["dim"] = 3;
    j["labels"] = {"X", "Y", "Z"};
    j["structure"] = ordered_json::array({
        ordered_json::array({1, 2, 3, 1.0}),
        ordered_json::array({2, 1, 3, -1.0}),
    });
    j["tolerance"] = 1e-9;
    return j;
}

inline ordered_json abelian2_spec() {
    ordered_json j;
    j["name"] = "abelian2";
    j["dim"] = 2;
    j["labels"] = {"X1", "X2"};
    j["structure"] = ordered_json::array();
    j["involution"] = ordered_json::array({
        ordered_json::array({1.0, 0.0}),
        ordered_json::array({0.0, -1.0}),
    });
    j["form"] = ordered_json::array({
        ordered_json::array({-1.0, 0.0}),
        ordered_json::array({0.0, 1.0}),
    });
    j["tolerance"] = 1e-9;
    return j;
}

inline ordered_json abelian3_spec() {
    ordered_json j;
    j["name"] = "abelian3";
    j["dim"] = 3;
    j["labels"] = {"X1", "X2", "X3"};
    j["structure"] = ordered_json::array();
    j["involution"] = identity_matrix(3);
    j["form"] = ordered_json::array({
        ordered_json::array({-1.0, 0.0, 0.0}),
        ordered_json::array({0.0, -1.0, 0.0}),
        ordered_json::array({0.0, 0.0, -1.0}),
    });
    j["tolerance"] = 1e-9;
    return j;
}

inline ordered_json complex_entry(double re, double im) {
    return ordered_json::array({re, im});
}

// Spin one-half generators adapted to the orthonormal su2 frame.
inline ordered_json su2_spinhalf_module() {
    const double s = 0.35355339059327373;
    ordered_json j;
    j["name"] = "spin_half";
    j["dim_v"] = 2;
    ordered_json gens = ordered_json::array();
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({complex_entry(0, 0), complex_entry(0, -s)}));
        g.push_back(ordered_json::array({complex_entry(0, -s), complex_entry(0, 0)}));
        gens.push_back(g);
    }
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({complex_entry(0, 0), complex_entry(-s, 0)}));
        g.push_back(ordered_json::array({complex_entry(s, 0), complex_entry(0, 0)}));
        gens.push_back(g);
    }
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({complex_entry(0, -s), complex_entry(0, 0)}));
        g.push_back(ordered_json::array({complex_entry(0, 0), complex_entry(0, s)}));
        gens.push_back(g);
    }
    j["generators"] = gens;
    j["gram"] = identity_matrix(2);
    j["unitary"] = true;
    return j;
}

inline ordered_json sl2r_trivial_module() {
    ordered_json j;
    j["name"] = "trivial";
    j["dim_v"] = 1;
    ordered_json zero = ordered_json::array();
    zero.push_back(ordered_json::array({complex_entry(0, 0)}));
    j["generators"] = ordered_json::array({zero, zero, zero});
    j["gram"] = identity_matrix(1);
    j["unitary"] = true;
    return j;
}

// Adjoint generators in the adapted sl2r frame.
inline ordered_json sl2r_adjoint_module() {
    const double c = 0.7071067811865476;
    auto entry = [](double v) { return complex_entry(v, 0.0); };
    ordered_json j;
    j["name"] = "adjoint";
    j["dim_v"] = 3;
    ordered_json gens = ordered_json::array();
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({entry(0), entry(0), entry(0)}));
        g.push_back(ordered_json::array({entry(0), entry(0), entry(c)}));
        g.push_back(ordered_json::array({entry(0), entry(-c), entry(0)}));
        gens.push_back(g);
    }
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({entry(0), entry(0), entry(c)}));
        g.push_back(ordered_json::array({entry(0), entry(0), entry(0)}));
        g.push_back(ordered_json::array({entry(c), entry(0), entry(0)}));
        gens.push_back(g);
    }
    {
        ordered_json g = ordered_json::array();
        g.push_back(ordered_json::array({entry(0), entry(-c), entry(0)}));
        g.push_back(ordered_json::array({entry(-c), entry(0), entry(0)}));
        g.push_back(ordered_json::array({entry(0), entry(0), entry(0)}));
        gens.push_back(g);
    }
    j["generators"] = gens;
    j["gram"] = identity_matrix(3);
    j["unitary"] = false;
    return j;
}

inline std::vector<std::pair<std::string, ordered_json>> corpus() {
    return {
        {"su2", su2_spec()},           {"sl2r", sl2r_spec()},
        {"heisenberg", heisenberg_spec()}, {"abelian2", abelian2_spec()},
        {"abelian3", abelian3_spec()},
    };
}

}  // namespace builtin

// Residuals of the operator identities on one frame/module pair, every
// number taken as a max over all admissible degrees.
struct IdentitySuite {
    double d_square = 0.0;          // composing the differential twice
    double adjoint_residual = 0.0;  // structured adjoint against the oracle
    double component_sum = 0.0;     // four components against the Laplacian
    double closed_residual = 0.0;   // closed forms against assembled components
    bool closed_applicable = true;  // false on metric frames, see below
    double top_wedge = 0.0;         // exterior component at top degree
    std::vector<double> derivation;  // slotwise derivation residual per degree
};

inline IdentitySuite identity_suite(const CartanFrame& fr, const ModuleRep& rep,
                                    int max_derivation_degree = 3) {
    IdentitySuite s;
    const int n = fr.n;
    // The closed component expressions are a theorem for invariant pairings
    // only; a metric frame (no invariant inner product exists, e.g. any
    // nilpotent algebra) genuinely violates them, so they are not asserted
    // there.  Everything assembled is checked regardless.
    s.closed_applicable = fr.cartan;
    for (int q = 0; q + 1 < n; ++q)
        s.d_square = std::max(
            s.d_square, max_abs(Mat(d_full(fr, rep, q + 1).mat * d_full(fr, rep, q).mat)));
    if (n == 1)
        s.d_square = 0.0;
    for (int q = 1; q <= n; ++q) {
        const Mat closed = delta_full(fr, rep, q).mat;
        s.adjoint_residual =
            std::max(s.adjoint_residual, max_abs(Mat(closed - delta_oracle(fr, rep, q).mat)));
    }
    for (int q = 0; q <= n; ++q) {
        const Mat l = laplacian(fr, rep, q).mat;
        const LaplacianComponents asm_c = laplacian_components(fr, rep, q);
        s.component_sum = std::max(
            s.component_sum,
            max_abs(Mat(asm_c.circ.mat + asm_c.wedge.mat + asm_c.circ_wedge.mat +
                        asm_c.wedge_circ.mat - l)));
        if (s.closed_applicable) {
            const LaplacianComponents cls_c = laplacian_components_closed(fr, rep, q);
            s.closed_residual = std::max(s.closed_residual, max_abs(Mat(asm_c.circ.mat - cls_c.circ.mat)));
            s.closed_residual = std::max(s.closed_residual, max_abs(Mat(asm_c.wedge.mat - cls_c.wedge.mat)));
            s.closed_residual =
                std::max(s.closed_residual, max_abs(Mat(asm_c.circ_wedge.mat - cls_c.circ_wedge.mat)));
            s.closed_residual =
                std::max(s.closed_residual, max_abs(Mat(asm_c.wedge_circ.mat - cls_c.wedge_circ.mat)));
        }
        if (q == n) s.top_wedge = max_abs(asm_c.wedge.mat);
    }
    for (int q = 0; q <= std::min(n, max_derivation_degree); ++q)
        s.derivation.push_back(derivation_residual(fr, rep, q));
    return s;
}

inline ordered_json identity_suite_json(const IdentitySuite& s) {
    ordered_json j;
    j["d_square"] = s.d_square;
    j["adjoint_vs_oracle"] = s.adjoint_residual;
    j["component_sum"] = s.component_sum;
    if (s.closed_applicable)
        j["closed_vs_assembled"] = s.closed_residual;
    else
        j["closed_vs_assembled"] = nullptr;
    j["top_wedge"] = s.top_wedge;
    j["derivation"] = s.derivation;
    return j;
}

struct ReportOptions {
    std::uint64_t seed = 7;
    int dp_dim = 6;
    int dp_order = 8;
    double dp_t = 0.5;
    int nodes = 256;
};

struct ReportResult {
    ordered_json doc;
    bool pass = true;
    std::vector<std::string> warnings;
};

namespace detail {

inline Mat random_hermitian(Sl2Sampler& smp, int dim) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cdouble(smp.gauss(), smp.gauss());
    return Mat(0.5 * (m + m.adjoint()));
}

inline ordered_json betti_json(const std::vector<BettiResult>& table) {
    ordered_json j;
    ordered_json vals = ordered_json::array();
    ordered_json ranks = ordered_json::array();
    bool agree = true;
    int warns = 0;
    for (const BettiResult& b : table) {
        vals.push_back(b.betti_spectral);
        ranks.push_back(b.betti_rank);
        agree = agree && b.agreement;
        if (b.near_threshold_warning) ++warns;
    }
    j["values"] = vals;
    j["rank_values"] = ranks;
    j["agreement"] = agree;
    j["near_threshold_warnings"] = warns;
    return j;
}

}  // namespace detail

inline ReportResult report_all(const ReportOptions& opt = {}) {
    ReportResult rr;
    ordered_json& doc = rr.doc;
    doc["report"] = "liehodge";
    doc["seed"] = opt.seed;

    ordered_json tol;
    tol["exact"] = 1e-12;
    tol["assembled"] = 1e-10;
    tol["semigroup"] = 1e-6;
    tol["group_exact"] = 1e-12;
    tol["group_paths"] = 1e-10;
    tol["spherical"] = 1e-8;
    doc["tolerances"] = tol;

    ordered_json conv;
    conv["metric_sign"] =
        "frame inner product is minus the invariant form twisted by the involution; "
        "compact directions carry form sign -1, split directions +1";
    conv["cochain_layout"] =
        "strictly increasing tuples in lex order; vector index = tuple rank times module "
        "dimension plus module index; kron order is tuple factor times module factor";
    conv["component_pairing"] =
        "mixed component with module differential pairs the transposed coadjoint action on "
        "the exterior factor with the module action; the opposite mixed component pairs the "
        "coadjoint action with the module adjoint";
    conv["degree_one_blocks"] =
        "module component = a - b - c, exterior component = d, each mixed component = b + c";
    conv["closed_components"] =
        "closed component expressions are asserted on frames built from an invariant "
        "pairing; metric frames report null there and verify the assembled identities only";
    conv["recursion_sign"] =
        "perturbation terms carry an explicit minus sign in the integral recursion";
    conv["spherical_normalization"] =
        "average of the reciprocal first-column length over the compact direction; the "
        "identity element maps to exactly one";
    ordered_json roots;
    roots["alpha_h0"] = 2.0;
    roots["rho_h0"] = 1.0;
    conv["restricted_root"] = roots;
    doc["conventions"] = conv;

    auto fail = [&rr](bool ok) {
        rr.pass = rr.pass && ok;
        return ok;
    };

    const std::vector<std::vector<int>> expected_trivial_betti = {
        {1, 0, 0, 1}, {1, 0, 0, 1}, {1, 2, 2, 1}, {1, 2, 1}, {1, 3, 3, 1}};

    ordered_json algebras;
    std::vector<CartanFrame> frames;
    const auto corpus = builtin::corpus();
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
        const auto& [name, spec_json] = corpus[ci];
        const AlgebraSpec spec = algebra_from_json(spec_json);
        ordered_json entry;
        const ValidationReport vr = validate_algebra(spec);
        entry["validation"] = vr.to_json();
        fail(vr.pass);

        const CartanFrame fr = build_frame(spec);
        frames.push_back(fr);
        ordered_json fj;
        fj["cartan"] = fr.cartan;
        fj["labels"] = fr.labels;
        fj["eps"] = fr.eps;
        fj["gram_residual"] = fr.gram_residual;
        const ValidationReport fi = frame_invariants(fr);
        fj["invariants"] = fi.to_json();
        fail(fi.pass);
        entry["frame"] = fj;

        ordered_json modules;
        std::vector<std::pair<std::string, ModuleRep>> reps;
        reps.emplace_back("trivial", trivial_rep(fr));
        reps.emplace_back("adjoint", adjoint_rep(fr));
        if (name == "su2")
            reps.emplace_back("spin_half", module_from_json(builtin::su2_spinhalf_module()));
        for (const auto& [mod_name, rep] : reps) {
            ordered_json mj;
            const ValidationReport mv = validate_module(fr, rep);
            mj["validation_pass"] = mv.pass;
            fail(mv.pass);
            const IdentitySuite suite = identity_suite(fr, rep);
            mj["identities"] = identity_suite_json(suite);
            fail(suite.d_square <= 1e-12);
            fail(suite.adjoint_residual <= 1e-10);
            fail(suite.component_sum <= 1e-10);
            if (suite.closed_applicable) fail(suite.closed_residual <= 1e-10);
            fail(suite.top_wedge <= 1e-12);
            for (double dres : suite.derivation) fail(dres <= 1e-12);

            const auto table = betti_all(fr, rep);
            mj["betti"] = detail::betti_json(table);
            for (const BettiResult& b : table) {
                fail(b.agreement);
                if (b.near_threshold_warning)
                    rr.warnings.push_back(name + "/" + mod_name + ": eigenvalue within a decade of the kernel threshold");
            }
            if (mod_name == "trivial") {
                std::vector<int> got;
                for (const BettiResult& b : table) got.push_back(b.betti_spectral);
                fail(got == expected_trivial_betti[ci]);
            }
            if (fr.cartan) {
                const KugaBlocks kb = kuga_blocks(fr, rep);
                ordered_json kj;
                kj["residual_total"] = kb.residual_total;
                kj["residual_circ"] = kb.residual_circ;
                kj["residual_wedge"] = kb.residual_wedge;
                kj["residual_mixed_cw"] = kb.residual_mixed_cw;
                kj["residual_mixed_wc"] = kb.residual_mixed_wc;
                mj["kuga"] = kj;
                fail(kb.residual_total <= 1e-10);
                fail(kb.residual_circ <= 1e-10);
                fail(kb.residual_wedge <= 1e-10);
                fail(kb.residual_mixed_cw <= 1e-10);
                fail(kb.residual_mixed_wc <= 1e-10);
            }
            modules[mod_name] = mj;
        }
        entry["modules"] = modules;
        algebras[name] = entry;
    }
    doc["algebras"] = algebras;

    // Enveloping-algebra identities on the two semisimple examples.
    ordered_json casimir_block;
    for (std::size_t ci : {std::size_t{0}, std::size_t{1}}) {
        const auto& name = corpus[ci].first;
        const CartanFrame& fr = frames[ci];
        const GenContext ctx = GenContext::from_frame(fr);
        RMat adapted_form = RMat::Zero(fr.n, fr.n);
        for (int i = 0; i < fr.n; ++i) adapted_form(i, i) = fr.eps[static_cast<std::size_t>(i)];
        const PbwElement omega_g = casimir(ctx, adapted_form);
        const PbwElement omega_k = casimir_sub(ctx, adapted_form, fr.k_indices);
        const PbwElement bar = omega_bar(ctx);
        const PbwElement lhs =
            pbw_add(pbw_add(omega_g, pbw_scale(omega_k, -2.0)), pbw_scale(bar, -1.0));
        ordered_json cj;
        cj["identity_residual"] = coeff_max_abs(lhs);
        cj["centrality_residual"] = centrality_residual(ctx, omega_g);
        fail(coeff_max_abs(lhs) <= 1e-12);
        fail(centrality_residual(ctx, omega_g) <= 1e-12);
        if (name == "su2") {
            const ModuleRep sh = module_from_json(builtin::su2_spinhalf_module());
            const Mat val = evaluate(bar, sh.tau, sh.dim_v);
            const double dev =
                max_abs(Mat(val + 0.375 * Mat::Identity(sh.dim_v, sh.dim_v)));
            cj["flat_element_value_residual"] = dev;
            fail(dev <= 1e-12);
        }
        casimir_block[name] = cj;
    }
    doc["casimir"] = casimir_block;

    // Conjugation scaling in a triangular order.
    {
        AlgebraSpec iwa;
        iwa.n = 3;
        iwa.labels = {"W", "H", "E"};
        iwa.structure.assign(27, 0.0);
        auto set = [&iwa](int i, int j, int k, double v) {
            iwa.structure[(static_cast<std::size_t>(i) * 3 + j) * 3 + k] = v;
            iwa.structure[(static_cast<std::size_t>(j) * 3 + i) * 3 + k] = -v;
        };
        set(0, 1, 0, 2.0);
        set(0, 1, 2, -4.0);
        set(0, 2, 1, 1.0);
        set(1, 2, 2, 2.0);
        const GenContext ctx = GenContext::from_spec(iwa);
        RVec h = RVec::Zero(3);
        h(1) = 1.0;
        ordered_json sj = ordered_json::array();
        double worst = 0.0;
        for (int l = 1; l <= 3; ++l)
            for (double t : {-1.0, -0.5, 0.5, 1.0}) {
                const std::vector<int> word(static_cast<std::size_t>(l), 2);
                const AdScalingResult res = ad_scaling_check(ctx, h, word, t);
                ordered_json e;
                e["power"] = l;
                e["t"] = t;
                e["residual"] = res.residual;
                sj.push_back(e);
                worst = std::max(worst, res.residual);
            }
        ordered_json block;
        block["samples"] = sj;
        block["worst"] = worst;
        doc["ad_scaling"] = block;
        fail(worst <= 1e-10);
    }

    // Perturbed semigroup on a seeded random split and on a cochain split.
    {
        ordered_json sg;
        Sl2Sampler smp(opt.seed);
        const Mat h = detail::random_hermitian(smp, opt.dp_dim);
        Mat a = h * h.adjoint();
        a /= static_cast<double>(opt.dp_dim);
        a += Mat::Identity(opt.dp_dim, opt.dp_dim);
        Mat b = detail::random_hermitian(smp, opt.dp_dim);
        b *= 0.1 * op_norm(a) / std::max(op_norm(b), 1e-300);
        const DysonPhillipsResult dp = dyson_phillips(a, b, opt.dp_t,
                                                      DysonPhillipsOptions{opt.dp_order, 32, {}});
        ordered_json dj;
        dj["t"] = dp.t;
        dj["order"] = dp.order;
        dj["error"] = dp.error;
        dj["tail_bound"] = dp.tail_bound;
        dj["rho"] = dp.rho;
        dj["term_norms"] = dp.term_norms;
        dj["convergence_warning"] = dp.convergence_warning;
        sg["random_split"] = dj;
        fail(dp.error <= 1e-6);
        if (dp.convergence_warning)
            rr.warnings.push_back("semigroup: tail estimate inconclusive on the random split");

        const CartanFrame& su2 = frames[0];
        const ModuleRep sh = module_from_json(builtin::su2_spinhalf_module());
        const HeatSplit hs = heat_split(su2, sh, 1);
        const DysonPhillipsResult hp =
            dyson_phillips(hs.a, hs.b, opt.dp_t, DysonPhillipsOptions{opt.dp_order, 32, {}});
        ordered_json hj;
        hj["t"] = hp.t;
        hj["error"] = hp.error;
        hj["tail_bound"] = hp.tail_bound;
        hj["rho"] = hp.rho;
        hj["convergence_warning"] = hp.convergence_warning;
        sg["cochain_split"] = hj;
        fail(hp.error <= 1e-6);
        if (hp.convergence_warning)
            rr.warnings.push_back("semigroup: tail estimate inconclusive on the cochain split");

        const MajorantCertificate cert =
            majorant_certificate(sqrt_singular_model(), {0.1, 0.5, 1.0, 2.0, 5.0}, 8);
        ordered_json mj;
        mj["omega1"] = cert.omega1;
        mj["laplace_phi2"] = cert.laplace_phi2;
        mj["laplace_mixed"] = cert.laplace_mixed;
        mj["samples"] = static_cast<int>(cert.samples.size());
        mj["all_ok"] = cert.all_ok;
        sg["majorant"] = mj;
        fail(cert.all_ok);
        doc["semigroup"] = sg;
    }

    // Group decompositions and the spherical function.
    {
        ordered_json gj;
        Sl2Sampler smp(opt.seed + 1);
        double worst_recon = 0.0, worst_agree = 0.0, worst_kak = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const RMat x = smp.next();
            const IwasawaNAK d1 = iwasawa_nak(x);
            const IwasawaNAK d2 = iwasawa_nak_rq(x);
            worst_recon = std::max(worst_recon, max_abs(RMat(d1.n * d1.a * d1.k - x)));
            worst_recon = std::max(worst_recon, max_abs(RMat(d2.n * d2.a * d2.k - x)));
            worst_agree = std::max({worst_agree, max_abs(RMat(d1.n - d2.n)),
                                    max_abs(RMat(d1.a - d2.a)), max_abs(RMat(d1.k - d2.k))});
            const CartanKAK kk = cartan_kak(x);
            worst_kak = std::max(worst_kak, max_abs(RMat(kk.k1 * kk.a * kk.k2 - x)));
        }
        gj["iwasawa_reconstruction"] = worst_recon;
        gj["iwasawa_path_agreement"] = worst_agree;
        gj["kak_reconstruction"] = worst_kak;
        fail(worst_recon <= 1e-12);
        fail(worst_kak <= 1e-12);
        fail(worst_agree <= 1e-10);

        gj["phi0_identity"] = spherical_phi0(RMat(RMat::Identity(2, 2)), opt.nodes);
        fail(spherical_phi0(RMat(RMat::Identity(2, 2)), opt.nodes) == 1.0);

        double phi_min = 1.0, phi_max = 0.0;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const RMat x = rotation(2.0 * M_PI * i / 10.0) * diag_exp(0.3 * j);
                const double p = spherical_phi0(x, opt.nodes);
                phi_min = std::min(phi_min, p);
                phi_max = std::max(phi_max, p);
            }
        gj["phi0_grid_min"] = phi_min;
        gj["phi0_grid_max"] = phi_max;
        fail(phi_min > 0.0 && phi_max <= 1.0 + 1e-12);

        const RichardsonCheck rich = richardson_check(diag_exp(1.0));
        ordered_json rj;
        rj["phi_n"] = rich.phi_n;
        rj["phi_2n"] = rich.phi_2n;
        rj["phi_4n"] = rich.phi_4n;
        rj["ratio"] = rich.ratio;
        rj["pass"] = rich.pass;
        gj["richardson"] = rj;
        fail(rich.pass);

        // the integrand sharpens like e^{-2t}, so the growth samples need a
        // node count far beyond the default to stay resolved at t = 5
        std::vector<double> ts, phis;
        for (int i = 0; i < 10; ++i) {
            const double t = 0.5 + 0.5 * i;
            ts.push_back(t);
            phis.push_back(spherical_phi0(diag_exp(t), 1 << 16));
        }
        const GrowthFit gf = growth_fit(ts, phis);
        ordered_json fj;
        fj["exponent"] = gf.exponent;
        fj["log_c_fit"] = gf.log_c_fit;
        fj["log_c_bound"] = gf.log_c_bound;
        fj["max_abs_residual"] = gf.max_abs_residual;
        fj["pass"] = gf.pass;
        gj["growth_fit"] = fj;
        fail(gf.pass);

        double worst_subadd = 0.0;
        Sl2Sampler smp2(opt.seed + 2);
        for (int i = 0; i < 1000; ++i) {
            const RMat x = smp2.next();
            const RMat y = smp2.next();
            const double viol = norm_p(RMat(x * y)) - norm_p(x) - norm_p(y);
            worst_subadd = std::max(worst_subadd, viol);
        }
        gj["norm_p_subadditivity_worst_violation"] = worst_subadd;
        if (worst_subadd > 1e-9)
            rr.warnings.push_back("group: displacement norm subadditivity violated beyond 1e-9");

        gj["seminorm_weight_sample"] = seminorm_weight(diag_exp(0.5), 2.0, 2.0, opt.nodes);
        doc["group"] = gj;
    }

    doc["warnings"] = rr.warnings;
    doc["pass"] = rr.pass;
    return rr;
}

}  // namespace liehodge
