#include <catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace liehodge;

TEST_CASE("trivial and adjoint modules validate on every frame") {
    for (const char* name :
         {"su2.json", "sl2r.json", "heisenberg.json", "abelian2.json", "abelian3.json"}) {
        const CartanFrame fr = load_frame(name);
        INFO(name);
        CHECK(validate_module(fr, trivial_rep(fr)).pass);
        CHECK(validate_module(fr, adjoint_rep(fr)).pass);
    }
}

TEST_CASE("adjoint module is unitary exactly on the compact frames") {
    CHECK(adjoint_rep(load_frame("su2.json")).unitary);
    CHECK(adjoint_rep(load_frame("abelian3.json")).unitary);
    CHECK_FALSE(adjoint_rep(load_frame("sl2r.json")).unitary);
    CHECK_FALSE(adjoint_rep(load_frame("heisenberg.json")).unitary);
}

TEST_CASE("spin one-half module") {
    const CartanFrame fr = load_frame("su2.json");
    const ModuleRep rep = module_from_json(load_json_file(data_path("su2_spinhalf.json")));
    CHECK(rep.dim_v == 2);
    CHECK(rep.unitary);
    CHECK(homomorphism_residual(fr, rep) <= 1e-12);
    CHECK(validate_module(fr, rep).pass);
    for (int i = 0; i < 3; ++i)
        CHECK(max_abs(Mat(rep.tau_star(i) + rep.tau[static_cast<std::size_t>(i)])) <= 1e-14);
}

TEST_CASE("file adjoint module matches the generated one") {
    const CartanFrame fr = load_frame("sl2r.json");
    const ModuleRep file = module_from_json(load_json_file(data_path("sl2r_adjoint.json")));
    const ModuleRep gen = adjoint_rep(fr);
    REQUIRE(file.dim_v == gen.dim_v);
    for (int i = 0; i < 3; ++i)
        CHECK(max_abs(Mat(file.tau[static_cast<std::size_t>(i)] -
                          gen.tau[static_cast<std::size_t>(i)])) <= 1e-12);
    CHECK_FALSE(file.unitary);
    CHECK(validate_module(fr, file).pass);
}

TEST_CASE("metric adjoint against a weighted gram matrix") {
    const CartanFrame fr = load_frame("sl2r.json");
    ModuleRep rep = adjoint_rep(fr);
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    g(2, 2) = 3.0;
    rep.gram = g;
    rep.unitary = compute_unitary_flag(rep, 1e-12);
    CHECK(validate_module(fr, rep).pass);
    for (int i = 0; i < 3; ++i) {
        const Mat ts = rep.tau_star(i);
        // defining property: G tau* = tau^dagger G
        CHECK(max_abs(Mat(g * ts - rep.tau[static_cast<std::size_t>(i)].adjoint() * g)) <= 1e-13);
    }
}

TEST_CASE("unitary flag contradictions are rejected") {
    ordered_json j = builtin::su2_spinhalf_module();
    j["unitary"] = false;
    CHECK_THROWS_AS(module_from_json(j), input_error);
}

TEST_CASE("bad gram matrices are rejected") {
    ordered_json j = builtin::su2_spinhalf_module();
    j["gram"] = ordered_json::array({
        ordered_json::array({1.0, 0.5}),
        ordered_json::array({0.0, 1.0}),
    });
    CHECK_THROWS_AS(module_from_json(j), input_error);
    j["gram"] = ordered_json::array({
        ordered_json::array({1.0, 0.0}),
        ordered_json::array({0.0, -1.0}),
    });
    CHECK_THROWS_AS(module_from_json(j), input_error);
}

TEST_CASE("homomorphism failures are caught by validation") {
    const CartanFrame fr = load_frame("su2.json");
    ModuleRep rep = module_from_json(builtin::su2_spinhalf_module());
    rep.tau[0] *= 2.0;
    rep.unitary = compute_unitary_flag(rep, 1e-10);
    CHECK_FALSE(validate_module(fr, rep).pass);
}

TEST_CASE("module resolution") {
    const CartanFrame fr = load_frame("sl2r.json");
    CHECK(resolve_module(fr, "trivial").dim_v == 1);
    CHECK(resolve_module(fr, "adjoint").dim_v == 3);
    CHECK(resolve_module(fr, data_path("sl2r_trivial.json")).dim_v == 1);

    const CartanFrame small = load_frame("abelian2.json");
    CHECK_THROWS_AS(resolve_module(small, data_path("sl2r_trivial.json")), input_error);
    CHECK_THROWS_AS(resolve_module(fr, data_path("no_such_module.json")), input_error);
}

TEST_CASE("module json round trip") {
    const ModuleRep rep = module_from_json(builtin::su2_spinhalf_module());
    const ModuleRep back = module_from_json(module_to_json(rep));
    REQUIRE(back.dim_v == rep.dim_v);
    for (int i = 0; i < 3; ++i)
        CHECK(max_abs(Mat(back.tau[static_cast<std::size_t>(i)] -
                          rep.tau[static_cast<std::size_t>(i)])) == 0.0);
    CHECK(back.unitary == rep.unitary);
}
