#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace liehodge;
using Catch::Approx;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("cochain bases enumerate increasing tuples in lex order") {
    const auto tuples = degree_tuples(3, 2);
    REQUIRE(tuples.size() == 3);
    CHECK(tuples[0] == Tuple{0, 1});
    CHECK(tuples[1] == Tuple{0, 2});
    CHECK(tuples[2] == Tuple{1, 2});
    CHECK(degree_tuples(3, 0) == std::vector<Tuple>{Tuple{}});
    CHECK(degree_tuples(3, 4).empty());

    const CartanFrame fr = builtin_frame("sl2r");
    for (int m : {1, 3}) {
        for (int q = 0; q <= 3; ++q) {
            const CochainBasis b = cochain_basis(fr, m, q);
            CHECK(b.dim() == binom(3, q) * m);
            for (int r = 0; r < static_cast<int>(b.tuples.size()); ++r)
                CHECK(b.index.at(b.tuples[static_cast<std::size_t>(r)]) == r);
        }
    }
    CHECK_THROWS_AS(cochain_basis(fr, 1, 4), input_error);
    CHECK_THROWS_AS(cochain_basis(fr, 1, -1), input_error);
}

TEST_CASE("the bigrade counts compact and split slots") {
    const CartanFrame fr = builtin_frame("sl2r");
    const CochainBasis b1 = cochain_basis(fr, 1, 1);
    REQUIRE(b1.bigrade.size() == 3);
    CHECK(b1.bigrade[0] == std::make_pair(1, 0));
    CHECK(b1.bigrade[1] == std::make_pair(0, 1));
    CHECK(b1.bigrade[2] == std::make_pair(0, 1));
    const CochainBasis b2 = cochain_basis(fr, 1, 2);
    CHECK(b2.bigrade[0] == std::make_pair(1, 1));
    CHECK(b2.bigrade[1] == std::make_pair(1, 1));
    CHECK(b2.bigrade[2] == std::make_pair(0, 2));
}

TEST_CASE("the differential squares to zero on the whole corpus") {
    for (const auto& [name, spec] : builtin::corpus()) {
        const CartanFrame fr = build_frame(algebra_from_json(spec, name));
        std::vector<ModuleRep> reps{trivial_rep(fr), adjoint_rep(fr)};
        if (name == "su2") reps.push_back(module_from_json(builtin::su2_spinhalf_module()));
        for (const ModuleRep& rep : reps)
            for (int q = 0; q + 1 < fr.n; ++q) {
                const Mat comp = d_full(fr, rep, q + 1).mat * d_full(fr, rep, q).mat;
                CHECK(max_abs(comp) <= 1e-12);
            }
    }
}

TEST_CASE("structured adjoints match the Gram-pairing oracle") {
    for (const auto& [name, spec] : builtin::corpus()) {
        const CartanFrame fr = build_frame(algebra_from_json(spec, name));
        for (const ModuleRep& rep : {trivial_rep(fr), adjoint_rep(fr)})
            for (int q = 1; q <= fr.n; ++q) {
                const Mat oracle = delta_oracle(fr, rep, q).mat;
                const Mat structured = delta_full(fr, rep, q).mat;
                CHECK(max_abs(Mat(structured - oracle)) <= 1e-12);
            }
    }
}

TEST_CASE("the adjoint identity survives a non-trivial Gram weighting") {
    const CartanFrame fr = builtin_frame("su2");
    ModuleRep rep = adjoint_rep(fr);
    rep.gram = Mat::Zero(3, 3);
    rep.gram.diagonal() << 1.0, 2.0, 3.0;
    for (int q = 1; q <= fr.n; ++q) {
        const Mat oracle = delta_oracle(fr, rep, q).mat;
        const Mat structured = delta_full(fr, rep, q).mat;
        CHECK(max_abs(Mat(structured - oracle)) <= 1e-12);
    }
}

TEST_CASE("trivial-module spectra of the compact and split rank-one algebras") {
    for (const char* name : {"su2", "sl2r"}) {
        const CartanFrame fr = builtin_frame(name);
        const ModuleRep rep = trivial_rep(fr);
        for (int q : {1, 2}) {
            const RVec ev = hermitized_spectrum(fr, rep, q);
            REQUIRE(ev.size() == 3);
            for (Eigen::Index i = 0; i < 3; ++i)
                CHECK(ev(i) == Approx(0.5).margin(1e-12));
        }
        CHECK(hermitized_spectrum(fr, rep, 0).size() == 1);
        CHECK(std::abs(hermitized_spectrum(fr, rep, 0)(0)) <= 1e-12);
    }
}

TEST_CASE("the four components sum to the Laplacian") {
    for (const auto& [name, spec] : builtin::corpus()) {
        const CartanFrame fr = build_frame(algebra_from_json(spec, name));
        for (const ModuleRep& rep : {trivial_rep(fr), adjoint_rep(fr)})
            for (int q = 0; q <= fr.n; ++q) {
                const LaplacianComponents c = laplacian_components(fr, rep, q);
                const Mat total = c.circ.mat + c.wedge.mat + c.circ_wedge.mat + c.wedge_circ.mat;
                CHECK(max_abs(Mat(total - laplacian(fr, rep, q).mat)) <= 1e-12);
            }
    }
}

TEST_CASE("closed component forms match the assembled compositions") {
    const CartanFrame su2 = builtin_frame("su2");
    const CartanFrame sl2 = builtin_frame("sl2r");
    const ModuleRep spin = module_from_json(builtin::su2_spinhalf_module());
    const ModuleRep adj = adjoint_rep(sl2);
    const std::vector<std::pair<const CartanFrame*, const ModuleRep*>> cases{
        {&su2, &spin}, {&sl2, &adj}};
    for (const auto& [fr, rep] : cases)
        for (int q = 0; q <= fr->n; ++q) {
            const LaplacianComponents a = laplacian_components(*fr, *rep, q);
            const LaplacianComponents c = laplacian_components_closed(*fr, *rep, q);
            CHECK(max_abs(Mat(a.circ.mat - c.circ.mat)) <= 1e-12);
            CHECK(max_abs(Mat(a.wedge.mat - c.wedge.mat)) <= 1e-12);
            CHECK(max_abs(Mat(a.circ_wedge.mat - c.circ_wedge.mat)) <= 1e-12);
            CHECK(max_abs(Mat(a.wedge_circ.mat - c.wedge_circ.mat)) <= 1e-12);
        }
}

TEST_CASE("the exterior component vanishes at top degree") {
    for (const auto& [name, spec] : builtin::corpus()) {
        const CartanFrame fr = build_frame(algebra_from_json(spec, name));
        const ModuleRep rep = adjoint_rep(fr);
        const LaplacianComponents c = laplacian_components(fr, rep, fr.n);
        CHECK(max_abs(c.wedge.mat) <= 1e-12);
    }
}

TEST_CASE("the slotwise module component is a derivation over the slots") {
    const CartanFrame su2 = builtin_frame("su2");
    const ModuleRep spin = module_from_json(builtin::su2_spinhalf_module());
    for (int q : {2, 3}) CHECK(derivation_residual(su2, spin, q) <= 1e-12);
    const CartanFrame sl2 = builtin_frame("sl2r");
    const ModuleRep adj = adjoint_rep(sl2);
    for (int q : {2, 3}) CHECK(derivation_residual(sl2, adj, q) <= 1e-12);
}

TEST_CASE("identity suite aggregates every residual over all degrees") {
    const CartanFrame fr = builtin_frame("su2");
    const ModuleRep rep = module_from_json(builtin::su2_spinhalf_module());
    const IdentitySuite s = identity_suite(fr, rep);
    CHECK(s.d_square <= 1e-12);
    CHECK(s.adjoint_residual <= 1e-12);
    CHECK(s.component_sum <= 1e-12);
    CHECK(s.closed_residual <= 1e-12);
    CHECK(s.top_wedge <= 1e-12);
    REQUIRE(s.derivation.size() == 4);
    for (double r : s.derivation) CHECK(r <= 1e-12);
}

TEST_CASE("degree-one blocks reproduce the Laplacian and its components") {
    const CartanFrame sl2 = builtin_frame("sl2r");
    for (const ModuleRep& rep : {trivial_rep(sl2), adjoint_rep(sl2)}) {
        const KugaBlocks kb = kuga_blocks(sl2, rep);
        CHECK(kb.residual_total <= 1e-12);
        CHECK(kb.residual_circ <= 1e-12);
        CHECK(kb.residual_wedge <= 1e-12);
        CHECK(kb.residual_mixed_cw <= 1e-12);
        CHECK(kb.residual_mixed_wc <= 1e-12);
    }
}

TEST_CASE("unitary modules route the block decomposition through the flat element") {
    const CartanFrame fr = builtin_frame("su2");
    const ModuleRep rep = module_from_json(builtin::su2_spinhalf_module());
    REQUIRE(rep.unitary);
    const KugaBlocks kb = kuga_blocks(fr, rep);
    CHECK(kb.residual_total <= 1e-12);
    CHECK(kb.residual_circ <= 1e-12);
    CHECK(kb.residual_wedge <= 1e-12);
    CHECK(kb.residual_mixed_cw <= 1e-12);
    CHECK(kb.residual_mixed_wc <= 1e-12);
    // The V-block equals 3/8 on every slot for the spin one-half module.
    const Mat expected = 0.375 * Mat::Identity(6, 6);
    CHECK(max_abs(Mat(kb.a - expected)) <= 1e-12);
    const Mat d0 = delta_zero(fr, rep);
    CHECK(max_abs(Mat(d0 - 0.375 * Mat::Identity(2, 2))) <= 1e-12);
}

TEST_CASE("block decomposition requires a Cartan frame and a hermitian Gram") {
    const CartanFrame h3 = builtin_frame("heisenberg");
    CHECK_THROWS_AS(kuga_blocks(h3, trivial_rep(h3)), frame_error);

    const CartanFrame fr = builtin_frame("su2");
    ModuleRep rep = adjoint_rep(fr);
    rep.gram(0, 1) = 0.5;
    CHECK_THROWS_AS(kuga_blocks(fr, rep), input_error);
}

TEST_CASE("kernel dimensions of the trivial module match the classical tables") {
    const std::vector<std::pair<const char*, std::vector<int>>> expected{
        {"su2", {1, 0, 0, 1}},
        {"sl2r", {1, 0, 0, 1}},
        {"heisenberg", {1, 2, 2, 1}},
        {"abelian2", {1, 2, 1}},
        {"abelian3", {1, 3, 3, 1}},
    };
    for (const auto& [name, want] : expected) {
        const CartanFrame fr = builtin_frame(name);
        const auto table = betti_all(fr, trivial_rep(fr));
        REQUIRE(static_cast<int>(table.size()) == fr.n + 1);
        long euler_dim = 0, euler_betti = 0;
        for (int q = 0; q <= fr.n; ++q) {
            const BettiResult& b = table[static_cast<std::size_t>(q)];
            INFO(name << " degree " << q);
            CHECK(b.betti_spectral == want[static_cast<std::size_t>(q)]);
            CHECK(b.betti_rank == want[static_cast<std::size_t>(q)]);
            CHECK(b.agreement);
            const long sign = (q % 2 == 0) ? 1 : -1;
            euler_dim += sign * static_cast<long>(b.dim);
            euler_betti += sign * b.betti_spectral;
        }
        CHECK(euler_dim == 0);
        CHECK(euler_betti == 0);
    }
}

TEST_CASE("differential ranks of the nilpotent algebra") {
    const CartanFrame fr = builtin_frame("heisenberg");
    const ModuleRep rep = trivial_rep(fr);
    const BettiResult b1 = betti(fr, rep, 1);
    CHECK(b1.rank_d_qm1 == 0);
    CHECK(b1.rank_d_q == 1);
    const BettiResult b0 = betti(fr, rep, 0);
    CHECK(b0.rank_d_q == 0);
    CHECK(b0.betti_spectral == 1);
}

TEST_CASE("adjoint cohomology of the compact rank-one algebra vanishes") {
    const CartanFrame fr = builtin_frame("su2");
    const auto table = betti_all(fr, adjoint_rep(fr));
    for (const BettiResult& b : table) {
        CHECK(b.betti_spectral == 0);
        CHECK(b.agreement);
    }
    const CartanFrame sl2 = builtin_frame("sl2r");
    for (const BettiResult& b : betti_all(sl2, adjoint_rep(sl2))) CHECK(b.agreement);
}

TEST_CASE("an inflated threshold flags near-threshold eigenvalues") {
    const CartanFrame fr = builtin_frame("su2");
    const ModuleRep rep = trivial_rep(fr);
    CHECK_THROWS_AS(betti(fr, rep, 1, 0.0), input_error);
    const BettiResult clean = betti(fr, rep, 1);
    CHECK_FALSE(clean.near_threshold_warning);
    const BettiResult inflated = betti(fr, rep, 1, 3e14);
    CHECK(inflated.near_threshold_warning);
    CHECK(inflated.betti_spectral == 0);
}

TEST_CASE("operators serialize to JSON and parse back bit for bit") {
    const CartanFrame fr = builtin_frame("sl2r");
    const ModuleRep rep = adjoint_rep(fr);
    const LinOp op = d_full(fr, rep, 1);
    const ordered_json j = linop_to_json(op);
    const LinOp back = linop_from_json(j, "operator");
    REQUIRE(back.mat.rows() == op.mat.rows());
    REQUIRE(back.mat.cols() == op.mat.cols());
    CHECK(max_abs(Mat(back.mat - op.mat)) == 0.0);
    CHECK(back.from_degree == op.from_degree);
    CHECK(back.to_degree == op.to_degree);
}

TEST_CASE("adjoint guards reject out-of-range degrees") {
    const CartanFrame fr = builtin_frame("su2");
    const ModuleRep rep = trivial_rep(fr);
    CHECK_THROWS_AS(delta_oracle(fr, rep, 0), input_error);
    CHECK_THROWS_AS(delta_circ(fr, rep, 4), input_error);
    CHECK_THROWS_AS(delta_wedge(fr, rep, 0), input_error);
}
