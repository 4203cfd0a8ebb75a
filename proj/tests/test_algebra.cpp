#include <catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace liehodge;

TEST_CASE("corpus files validate") {
    for (const char* name :
         {"su2.json", "sl2r.json", "heisenberg.json", "abelian2.json", "abelian3.json"}) {
        const AlgebraSpec spec = load_algebra(name);
        const ValidationReport vr = validate_algebra(spec);
        INFO(name);
        CHECK(vr.pass);
    }
}

TEST_CASE("shipped corpus matches the built-in corpus") {
    for (const auto& [name, spec] : builtin::corpus()) {
        const ordered_json parsed = load_json_file(data_path(name + ".json"));
        INFO(name);
        CHECK(parsed == spec);
    }
    CHECK(load_json_file(data_path("su2_spinhalf.json")) == builtin::su2_spinhalf_module());
    CHECK(load_json_file(data_path("sl2r_trivial.json")) == builtin::sl2r_trivial_module());
    CHECK(load_json_file(data_path("sl2r_adjoint.json")) == builtin::sl2r_adjoint_module());
}

TEST_CASE("killing form of the compact example") {
    const AlgebraSpec su2 = load_algebra("su2.json");
    const RMat k = killing_form(su2);
    CHECK(max_abs(RMat(k + 2.0 * RMat::Identity(3, 3))) <= 1e-14);
    CHECK(max_abs(RMat(k - *su2.form)) <= 1e-14);
}

TEST_CASE("killing form of the split example") {
    const AlgebraSpec sl2 = load_algebra("sl2r.json");
    const RMat k = killing_form(sl2);
    CHECK(max_abs(RMat(k - *sl2.form)) <= 1e-14);
    CHECK(k(0, 0) == 8.0);
    CHECK(k(1, 2) == 4.0);
    CHECK(k(1, 1) == 0.0);
}

TEST_CASE("structure entries accumulate") {
    ordered_json j;
    j["dim"] = 2;
    j["structure"] = ordered_json::array({
        ordered_json::array({1, 2, 1, 0.25}),
        ordered_json::array({1, 2, 1, 0.75}),
        ordered_json::array({2, 1, 1, -1.0}),
    });
    const AlgebraSpec spec = algebra_from_json(j);
    CHECK(spec.c(0, 1, 0) == 1.0);
    CHECK(validate_algebra(spec).pass);
}

TEST_CASE("one-sided structure entry is rejected by validation") {
    ordered_json j;
    j["dim"] = 2;
    j["structure"] = ordered_json::array({ordered_json::array({1, 2, 1, 1.0})});
    const ValidationReport vr = validate_algebra(algebra_from_json(j));
    CHECK_FALSE(vr.pass);
    bool anti_failed = false;
    for (const auto& c : vr.checks)
        if (c.name == "antisymmetry") anti_failed = !c.pass;
    CHECK(anti_failed);
}

TEST_CASE("jacobi violation is detected") {
    ordered_json j;
    j["dim"] = 3;
    j["structure"] = ordered_json::array({
        ordered_json::array({1, 2, 3, 1.0}),
        ordered_json::array({2, 1, 3, -1.0}),
        ordered_json::array({1, 3, 1, 1.0}),
        ordered_json::array({3, 1, 1, -1.0}),
    });
    const ValidationReport vr = validate_algebra(algebra_from_json(j));
    CHECK_FALSE(vr.pass);
    bool jacobi_failed = false;
    for (const auto& c : vr.checks)
        if (c.name == "jacobi") jacobi_failed = !c.pass;
    CHECK(jacobi_failed);
}

TEST_CASE("non-automorphism involution is detected") {
    ordered_json j = builtin::su2_spec();
    j["involution"] = ordered_json::array({
        ordered_json::array({1.0, 0.0, 0.0}),
        ordered_json::array({0.0, 1.0, 0.0}),
        ordered_json::array({0.0, 0.0, -1.0}),
    });
    const ValidationReport vr = validate_algebra(algebra_from_json(j));
    CHECK_FALSE(vr.pass);
}

TEST_CASE("non-invariant form is detected") {
    ordered_json j = builtin::su2_spec();
    j["form"] = ordered_json::array({
        ordered_json::array({1.0, 0.0, 0.0}),
        ordered_json::array({0.0, 2.0, 0.0}),
        ordered_json::array({0.0, 0.0, 3.0}),
    });
    const ValidationReport vr = validate_algebra(algebra_from_json(j));
    CHECK_FALSE(vr.pass);
}

TEST_CASE("malformed algebra input") {
    CHECK_THROWS_AS(algebra_from_json(ordered_json::object()), input_error);
    ordered_json bad_index;
    bad_index["dim"] = 2;
    bad_index["structure"] = ordered_json::array({ordered_json::array({1, 3, 1, 1.0})});
    CHECK_THROWS_AS(algebra_from_json(bad_index), input_error);
    ordered_json bad_dim;
    bad_dim["dim"] = 0;
    bad_dim["structure"] = ordered_json::array();
    CHECK_THROWS_AS(algebra_from_json(bad_dim), input_error);
    ordered_json bad_labels = builtin::su2_spec();
    bad_labels["labels"] = {"A", "B"};
    CHECK_THROWS_AS(algebra_from_json(bad_labels), input_error);
    ordered_json bad_tol = builtin::su2_spec();
    bad_tol["tolerance"] = -1.0;
    CHECK_THROWS_AS(algebra_from_json(bad_tol), input_error);
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_json_text("{\n  \"dim\": 3,,\n}", "bad.json");
        FAIL("expected a parse failure");
    } catch (const input_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.json:2:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_json_file(data_path("no_such_file.json")), input_error);
}

TEST_CASE("algebra json round trip") {
    const AlgebraSpec spec = load_algebra("sl2r.json");
    const AlgebraSpec back = algebra_from_json(algebra_to_json(spec));
    CHECK(back.n == spec.n);
    CHECK(back.labels == spec.labels);
    CHECK(back.structure == spec.structure);
    CHECK(max_abs(RMat(*back.involution - *spec.involution)) == 0.0);
    CHECK(max_abs(RMat(*back.form - *spec.form)) == 0.0);
    CHECK(back.tolerance == spec.tolerance);
}

TEST_CASE("ad matrices match the structure tensor") {
    const AlgebraSpec sl2 = load_algebra("sl2r.json");
    // [H, E] = 2E and [E, F] = H in the input basis
    CHECK(sl2.ad(0)(1, 1) == 2.0);
    CHECK(sl2.ad(1)(0, 2) == 1.0);
    const RVec bracket = sl2.ad(1) * RVec::Unit(3, 2);
    CHECK(bracket(0) == 1.0);
}
