#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <liehodge/liehodge.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Hodge Laplacians on Lie algebra cochains, perturbed heat semigroups and "
                 "split-group spherical numerics"};
    app.require_subcommand(1);

    liehodge::RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub, bool with_target, bool target_required) {
        if (with_target) {
            auto* opt = sub->add_option("target", cfg.target,
                                        "algebra name (su2, sl2r, heisenberg, abelian2, "
                                        "abelian3) or a JSON file path");
            if (target_required) opt->required();
        }
        sub->add_option("--out", cfg.out_path, "write the JSON document to this path");
        sub->add_option("--tolerance", cfg.tolerance, "override the pass/fail threshold");
        sub->add_flag("--strict", cfg.strict, "escalate warnings to exit code 2");
    };
    auto add_module = [&cfg](CLI::App* sub) {
        sub->add_option("--module", cfg.module,
                        "module: trivial, adjoint, spin_half, or a JSON file path");
        sub->add_option("--degree", cfg.degree, "restrict to one cochain degree");
    };

    CLI::App* validate = app.add_subcommand("validate", "check algebra, frame and module data");
    add_common(validate, true, true);
    add_module(validate);

    CLI::App* laplacian =
        app.add_subcommand("laplacian", "assemble the cochain operators and verify their identities");
    add_common(laplacian, true, true);
    add_module(laplacian);

    CLI::App* kuga = app.add_subcommand("kuga", "verify the degree-one curvature block identity");
    add_common(kuga, true, true);
    add_module(kuga);

    CLI::App* betti = app.add_subcommand("betti", "kernel dimensions of the Laplacians");
    add_common(betti, true, true);
    add_module(betti);
    betti->add_option("--threshold-scale", cfg.threshold_scale,
                      "multiplier on the spectral kernel threshold");

    CLI::App* casimir =
        app.add_subcommand("casimir", "quadratic elements and the flat-Laplacian identity");
    add_common(casimir, true, true);

    CLI::App* semigroup =
        app.add_subcommand("semigroup", "perturbation series against the exact semigroup");
    add_common(semigroup, true, false);
    add_module(semigroup);
    semigroup->add_option("--t", cfg.t, "evolution time");
    semigroup->add_option("--order", cfg.order, "truncation order of the series");
    semigroup->add_option("--seed", cfg.seed, "seed for the random split");
    semigroup->add_option("--dim", cfg.dim, "dimension of the random split");

    CLI::App* spherical =
        app.add_subcommand("spherical", "decompositions and the basic spherical function");
    add_common(spherical, true, false);
    spherical->add_option("--t", cfg.t, "evaluate at the diagonal element with this parameter");
    spherical->add_option("--nodes", cfg.nodes, "trapezoid node count (even, at least 8)");

    CLI::App* report = app.add_subcommand("report-all", "run every suite on the built-in corpus");
    add_common(report, false, false);
    report->add_option("--seed", cfg.seed, "seed for the randomized sections");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    for (CLI::App* sub : {validate, laplacian, kuga, betti, casimir, semigroup, spherical, report})
        if (sub->parsed()) cfg.command = sub->get_name();

    return liehodge::run(cfg, std::cout, std::cerr);
}
