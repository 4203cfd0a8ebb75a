#pragma once

// Lie algebra input: structure constants, validation, Killing form and the
// adjoint matrices in the input basis.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "json_io.hpp"

namespace liehodge {

struct AlgebraSpec {
    int n = 0;
    std::vector<std::string> labels;
    // Dense tensor, c(i,j,k) = coefficient of X_k in [X_i, X_j], 0-based.
    std::vector<double> structure;
    std::optional<RMat> involution;
    std::optional<RMat> form;
    double tolerance = 1e-9;

    double c(int i, int j, int k) const {
        return structure[static_cast<std::size_t>((i * n + j)) * n + k];
    }
    double& c(int i, int j, int k) {
        return structure[static_cast<std::size_t>((i * n + j)) * n + k];
    }

    // Columns are bracket images: column j holds the coordinates of [X_i, X_j].
    RMat ad(int i) const {
        RMat m = RMat::Zero(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) m(k, j) = c(i, j, k);
        return m;
    }

    double max_structure_constant() const {
        double mx = 0.0;
        for (double v : structure) mx = std::max(mx, std::abs(v));
        return mx;
    }
};

// Wire format:
// {"dim": n, "labels": [...], "structure": [[i, j, k, c], ...] (1-based),
//  "involution": [[...]], "form": [[...]], "tolerance": t}
// with involution, form, labels and tolerance optional. Structure entries
// accumulate; the antisymmetric partner of every entry must be listed
// explicitly (validation rejects one-sided input).
inline AlgebraSpec algebra_from_json(const ordered_json& j, const std::string& what = "algebra") {
    AlgebraSpec spec;
    spec.n = expect_field(j, "dim", what).get<int>();
    if (spec.n < 1) throw input_error(what + ": dim must be positive");
    spec.structure.assign(static_cast<std::size_t>(spec.n) * spec.n * spec.n, 0.0);

    if (auto it = j.find("labels"); it != j.end()) {
        for (const auto& l : *it) spec.labels.push_back(l.get<std::string>());
        if (static_cast<int>(spec.labels.size()) != spec.n)
            throw input_error(what + ": labels length != dim");
    } else {
        for (int i = 0; i < spec.n; ++i) spec.labels.push_back("X" + std::to_string(i + 1));
    }

    const auto& entries = expect_field(j, "structure", what);
    if (!entries.is_array()) throw input_error(what + ": structure must be an array");
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 4)
            throw input_error(what + ": structure entries are [i, j, k, c]");
        const int i = e[0].get<int>(), jj = e[1].get<int>(), k = e[2].get<int>();
        if (i < 1 || i > spec.n || jj < 1 || jj > spec.n || k < 1 || k > spec.n)
            throw input_error(what + ": structure index out of range 1.." +
                              std::to_string(spec.n));
        spec.c(i - 1, jj - 1, k - 1) += json_to_finite(e[3], what + ": structure value");
    }

    if (auto it = j.find("involution"); it != j.end()) {
        RMat th = json_to_rmat(*it, what + ": involution");
        if (th.rows() != spec.n || th.cols() != spec.n)
            throw input_error(what + ": involution must be dim x dim");
        spec.involution = th;
    }
    if (auto it = j.find("form"); it != j.end()) {
        RMat b = json_to_rmat(*it, what + ": form");
        if (b.rows() != spec.n || b.cols() != spec.n)
            throw input_error(what + ": form must be dim x dim");
        spec.form = b;
    }
    if (auto it = j.find("tolerance"); it != j.end()) {
        spec.tolerance = json_to_finite(*it, what + ": tolerance");
        if (spec.tolerance < 0) throw input_error(what + ": tolerance must be nonnegative");
    }
    return spec;
}

inline ordered_json algebra_to_json(const AlgebraSpec& spec) {
    ordered_json j;
    j["dim"] = spec.n;
    j["labels"] = spec.labels;
    ordered_json entries = ordered_json::array();
    for (int i = 0; i < spec.n; ++i)
        for (int jj = 0; jj < spec.n; ++jj)
            for (int k = 0; k < spec.n; ++k)
                if (spec.c(i, jj, k) != 0.0)
                    entries.push_back(
                        ordered_json::array({i + 1, jj + 1, k + 1, spec.c(i, jj, k)}));
    j["structure"] = std::move(entries);
    if (spec.involution) j["involution"] = rmat_to_json(*spec.involution);
    if (spec.form) j["form"] = rmat_to_json(*spec.form);
    j["tolerance"] = spec.tolerance;
    return j;
}

struct ValidationCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = true;

    void add(const std::string& name, double residual, double tol) {
        bool ok = residual <= tol;
        checks.push_back({name, residual, tol, ok});
        pass = pass && ok;
    }

    ordered_json to_json() const {
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks) {
            ordered_json e;
            e["check"] = c.name;
            e["residual"] = c.residual;
            e["tolerance"] = c.tolerance;
            e["pass"] = c.pass;
            arr.push_back(std::move(e));
        }
        ordered_json out;
        out["checks"] = std::move(arr);
        out["pass"] = pass;
        return out;
    }
};

// Residuals are reported relative to the natural scale of each identity so a
// rescaled algebra validates identically.
inline ValidationReport validate_algebra(const AlgebraSpec& spec) {
    ValidationReport report;
    const int n = spec.n;
    const double tol = spec.tolerance;
    const double cmax = std::max(1.0, spec.max_structure_constant());

    double anti = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                anti = std::max(anti, std::abs(spec.c(i, j, k) + spec.c(j, i, k)));
    report.add("antisymmetry", anti / cmax, tol);

    double jac = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m)
                        s += spec.c(i, j, m) * spec.c(m, k, l) +
                             spec.c(j, k, m) * spec.c(m, i, l) +
                             spec.c(k, i, m) * spec.c(m, j, l);
                    jac = std::max(jac, std::abs(s));
                }
    report.add("jacobi", jac / (cmax * cmax), tol);

    if (spec.involution) {
        const RMat& th = *spec.involution;
        const double thmax = std::max(1.0, max_abs(th));
        report.add("involution_squares_to_identity",
                   max_abs(RMat(th * th - RMat::Identity(n, n))) / (thmax * thmax), tol);
        // theta([X_i, X_j]) vs [theta X_i, theta X_j], columns of theta as images
        double aut = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double lhs = 0.0, rhs = 0.0;
                    for (int m = 0; m < n; ++m) lhs += spec.c(i, j, m) * th(k, m);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            rhs += th(a, i) * th(b, j) * spec.c(a, b, k);
                    aut = std::max(aut, std::abs(lhs - rhs));
                }
        report.add("involution_automorphism", aut / (cmax * thmax * thmax), tol);
    }

    if (spec.form) {
        const RMat& b = *spec.form;
        const double bmax = std::max(1.0, max_abs(b));
        report.add("form_symmetric", max_abs(RMat(b - b.transpose())) / bmax, tol);
        // B([X_i, X_j], X_k) + B(X_j, [X_i, X_k]) = 0
        double inv = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m)
                        s += spec.c(i, j, m) * b(m, k) + spec.c(i, k, m) * b(j, m);
                    inv = std::max(inv, std::abs(s));
                }
        report.add("form_invariant", inv / (cmax * bmax), tol);
    }

    for (double v : spec.structure)
        if (!std::isfinite(v)) throw input_error("algebra: non-finite structure constant");
    return report;
}

inline RMat killing_form(const AlgebraSpec& spec) {
    const int n = spec.n;
    RMat k = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s += spec.c(i, b, a) * spec.c(j, a, b);
            k(i, j) = s;
        }
    return k;
}

}  // namespace liehodge
