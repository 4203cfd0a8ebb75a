#pragma once

// Ordered-monomial calculus in the universal enveloping algebra of a
// finite-dimensional Lie algebra with fixed structure constants.  Words in
// the generators are straightened against a chosen total order by the
// rewrite X_j X_i -> X_i X_j + [X_j, X_i] applied to adjacent inversions;
// the result is stored as a map from exponent vectors to coefficients.
//
// The rewrite order is configurable (strategy parameter) precisely so tests
// can verify that the normal form does not depend on it.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "core.hpp"
#include "expm.hpp"
#include "frame.hpp"

namespace liehodge {

struct GenContext {
    int n = 0;
    std::vector<std::string> labels;
    std::vector<double> structure;  // same layout as AlgebraSpec
    std::vector<int> order;         // order[a] = generator at PBW slot a
    std::vector<int> rank;          // rank[g] = slot of generator g
    int degree_cap = 6;

    double c(int i, int j, int k) const {
        return structure[(static_cast<std::size_t>(i) * n + j) * n + k];
    }

    static GenContext from_spec(const AlgebraSpec& spec, std::vector<int> ord = {},
                                int cap = 6) {
        GenContext ctx;
        ctx.n = spec.n;
        ctx.labels = spec.labels;
        ctx.structure = spec.structure;
        ctx.degree_cap = cap;
        ctx.set_order(std::move(ord));
        return ctx;
    }

    static GenContext from_frame(const CartanFrame& fr, std::vector<int> ord = {},
                                 int cap = 6) {
        GenContext ctx;
        ctx.n = fr.n;
        ctx.labels = fr.labels;
        ctx.structure = fr.structure;
        ctx.degree_cap = cap;
        ctx.set_order(std::move(ord));
        return ctx;
    }

    void set_order(std::vector<int> ord) {
        if (ord.empty()) {
            ord.resize(static_cast<std::size_t>(n));
            for (int g = 0; g < n; ++g) ord[static_cast<std::size_t>(g)] = g;
        }
        if (static_cast<int>(ord.size()) != n)
            throw input_error("generator order must list every generator exactly once");
        rank.assign(static_cast<std::size_t>(n), -1);
        for (int a = 0; a < n; ++a) {
            const int g = ord[static_cast<std::size_t>(a)];
            if (g < 0 || g >= n || rank[static_cast<std::size_t>(g)] != -1)
                throw input_error("generator order must list every generator exactly once");
            rank[static_cast<std::size_t>(g)] = a;
        }
        order = std::move(ord);
    }
};

struct PbwElement {
    std::vector<int> order;                  // copied from the context
    std::map<std::vector<int>, cdouble> terms;  // exponent vector -> coefficient

    void prune(double floor = 0.0) {
        for (auto it = terms.begin(); it != terms.end();)
            it = (std::abs(it->second) <= floor) ? terms.erase(it) : std::next(it);
    }
};

inline double coeff_max_abs(const PbwElement& e) {
    double m = 0.0;
    for (const auto& [exps, c] : e.terms) m = std::max(m, std::abs(c));
    return m;
}

inline PbwElement pbw_zero(const GenContext& ctx) { return PbwElement{ctx.order, {}}; }

inline PbwElement pbw_add(const PbwElement& a, const PbwElement& b, cdouble scale = 1.0) {
    if (a.order != b.order) throw input_error("cannot combine elements with different orders");
    PbwElement r = a;
    for (const auto& [exps, c] : b.terms) r.terms[exps] += scale * c;
    r.prune();
    return r;
}

inline PbwElement pbw_scale(const PbwElement& a, cdouble s) {
    PbwElement r = a;
    for (auto& [exps, c] : r.terms) c *= s;
    r.prune();
    return r;
}

inline double pbw_diff_norm(const PbwElement& a, const PbwElement& b) {
    return coeff_max_abs(pbw_add(a, pbw_scale(b, -1.0)));
}

namespace detail {

inline std::vector<int> word_to_exps(const GenContext& ctx, const std::vector<int>& word) {
    std::vector<int> exps(static_cast<std::size_t>(ctx.n), 0);
    for (int g : word) ++exps[static_cast<std::size_t>(ctx.rank[static_cast<std::size_t>(g)])];
    return exps;
}

}  // namespace detail

// Straighten coeff * X_{word[0]} ... X_{word[end]} into normal form.  The
// strategy selects which adjacent inversion is rewritten next: 0 picks the
// leftmost, any other value seeds a pseudorandom choice.  All strategies
// produce the same element.
inline PbwElement nf(const std::vector<int>& word, cdouble coeff, const GenContext& ctx,
                     std::uint64_t strategy = 0) {
    if (static_cast<int>(word.size()) > ctx.degree_cap)
        throw cap_error("word degree " + std::to_string(word.size()) +
                        " exceeds degree cap " + std::to_string(ctx.degree_cap));
    for (int g : word)
        if (g < 0 || g >= ctx.n) throw input_error("generator index out of range in word");

    PbwElement result = pbw_zero(ctx);
    std::mt19937_64 rng(strategy);
    std::vector<std::pair<std::vector<int>, cdouble>> stack;
    stack.emplace_back(word, coeff);
    while (!stack.empty()) {
        auto [w, c] = std::move(stack.back());
        stack.pop_back();
        std::vector<int> inversions;
        for (int p = 0; p + 1 < static_cast<int>(w.size()); ++p)
            if (ctx.rank[static_cast<std::size_t>(w[static_cast<std::size_t>(p)])] >
                ctx.rank[static_cast<std::size_t>(w[static_cast<std::size_t>(p) + 1])])
                inversions.push_back(p);
        if (inversions.empty()) {
            result.terms[detail::word_to_exps(ctx, w)] += c;
            continue;
        }
        std::size_t pick = 0;
        if (strategy != 0 && inversions.size() > 1)
            pick = std::uniform_int_distribution<std::size_t>(0, inversions.size() - 1)(rng);
        const auto p = static_cast<std::size_t>(inversions[pick]);
        const int j = w[p], i = w[p + 1];
        std::vector<int> swapped = w;
        std::swap(swapped[p], swapped[p + 1]);
        stack.emplace_back(std::move(swapped), c);
        for (int k = 0; k < ctx.n; ++k) {
            const double br = ctx.c(j, i, k);
            if (br == 0.0) continue;
            std::vector<int> contracted;
            contracted.reserve(w.size() - 1);
            contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<long>(p));
            contracted.push_back(k);
            contracted.insert(contracted.end(), w.begin() + static_cast<long>(p) + 2, w.end());
            stack.emplace_back(std::move(contracted), c * br);
        }
    }
    result.prune();
    return result;
}

inline std::vector<int> exps_to_word(const GenContext& ctx, const std::vector<int>& exps) {
    std::vector<int> w;
    for (int a = 0; a < ctx.n; ++a)
        for (int rep = 0; rep < exps[static_cast<std::size_t>(a)]; ++rep)
            w.push_back(ctx.order[static_cast<std::size_t>(a)]);
    return w;
}

inline PbwElement pbw_monomial(const GenContext& ctx, const std::vector<int>& word,
                               cdouble coeff = 1.0) {
    return nf(word, coeff, ctx);
}

inline PbwElement pbw_mul(const PbwElement& a, const PbwElement& b, const GenContext& ctx,
                          std::uint64_t strategy = 0) {
    if (a.order != ctx.order || b.order != ctx.order)
        throw input_error("cannot combine elements with different orders");
    PbwElement result = pbw_zero(ctx);
    for (const auto& [ea, ca] : a.terms) {
        const std::vector<int> wa = exps_to_word(ctx, ea);
        for (const auto& [eb, cb] : b.terms) {
            std::vector<int> w = wa;
            const std::vector<int> wb = exps_to_word(ctx, eb);
            w.insert(w.end(), wb.begin(), wb.end());
            result = pbw_add(result, nf(w, ca * cb, ctx, strategy));
        }
    }
    return result;
}

// Quadratic Casimir element for an invariant form given in the same basis:
// sum_{ij} (B^{-1})_{ij} X_i X_j.
inline PbwElement casimir(const GenContext& ctx, const RMat& b) {
    if (b.rows() != ctx.n || b.cols() != ctx.n)
        throw input_error("form dimension does not match generator count");
    Eigen::FullPivLU<RMat> lu(b);
    if (!lu.isInvertible()) throw form_error("form is singular; no Casimir element exists");
    const RMat binv = lu.inverse();
    PbwElement omega = pbw_zero(ctx);
    for (int i = 0; i < ctx.n; ++i)
        for (int j = 0; j < ctx.n; ++j) {
            if (binv(i, j) == 0.0) continue;
            omega = pbw_add(omega, nf({i, j}, binv(i, j), ctx));
        }
    return omega;
}

// Casimir element of the subalgebra spanned by the listed generators, using
// the restriction of the form to that block.
inline PbwElement casimir_sub(const GenContext& ctx, const RMat& b,
                              const std::vector<int>& sub) {
    const auto m = static_cast<Eigen::Index>(sub.size());
    RMat block(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
            block(r, s) = b(sub[static_cast<std::size_t>(r)], sub[static_cast<std::size_t>(s)]);
    Eigen::FullPivLU<RMat> lu(block);
    if (!lu.isInvertible())
        throw form_error("form restricted to the subalgebra is singular");
    const RMat binv = lu.inverse();
    PbwElement omega = pbw_zero(ctx);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index s = 0; s < m; ++s) {
            if (binv(r, s) == 0.0) continue;
            omega = pbw_add(
                omega,
                nf({sub[static_cast<std::size_t>(r)], sub[static_cast<std::size_t>(s)]},
                   binv(r, s), ctx));
        }
    return omega;
}

// The flat quadratic element sum_i X_i^2 in the current basis.
inline PbwElement omega_bar(const GenContext& ctx) {
    PbwElement e = pbw_zero(ctx);
    for (int g = 0; g < ctx.n; ++g) e = pbw_add(e, nf({g, g}, 1.0, ctx));
    return e;
}

// Largest coefficient of any commutator [e, X_g] over all generators g;
// zero exactly when e is central.
inline double centrality_residual(const GenContext& ctx, const PbwElement& e) {
    double worst = 0.0;
    for (int g = 0; g < ctx.n; ++g) {
        const PbwElement xg = pbw_monomial(ctx, {g});
        const PbwElement comm =
            pbw_add(pbw_mul(e, xg, ctx), pbw_scale(pbw_mul(xg, e, ctx), -1.0));
        worst = std::max(worst, coeff_max_abs(comm));
    }
    return worst;
}

// Evaluate an element in a matrix representation: generator g acts by taus[g].
inline Mat evaluate(const PbwElement& e, const std::vector<Mat>& taus, Eigen::Index dim) {
    Mat acc = Mat::Zero(dim, dim);
    const int n = static_cast<int>(e.order.size());
    for (const auto& [exps, c] : e.terms) {
        Mat m = Mat::Identity(dim, dim);
        for (int a = 0; a < n; ++a) {
            const int g = e.order[static_cast<std::size_t>(a)];
            for (int rep = 0; rep < exps[static_cast<std::size_t>(a)]; ++rep)
                m = Mat(m * taus[static_cast<std::size_t>(g)]);
        }
        acc += c * m;
    }
    return acc;
}

struct AdScalingResult {
    PbwElement predicted;
    PbwElement conjugated;
    double residual = 0.0;
};

// Conjugation scaling check for a diagonalizing direction.  hvec gives the
// coefficients of an element H = sum_i hvec_i X_i; every generator g in the
// word must satisfy [H, X_g] = alpha_g X_g.  The one-parameter automorphism
// Phi_t = exp(t ad_H) then multiplies the straightened word by
// exp(t sum alpha_g); the conjugated element is computed independently by
// lifting Phi_t through the normal form letter by letter.
inline AdScalingResult ad_scaling_check(const GenContext& ctx, const RVec& hvec,
                                        const std::vector<int>& word, double t) {
    if (hvec.size() != ctx.n) throw input_error("direction vector has wrong dimension");
    RMat adh = RMat::Zero(ctx.n, ctx.n);
    for (int i = 0; i < ctx.n; ++i)
        for (int g = 0; g < ctx.n; ++g)
            for (int b = 0; b < ctx.n; ++b) adh(b, g) += hvec(i) * ctx.c(i, g, b);

    double alpha_total = 0.0;
    for (int g : word) {
        if (g < 0 || g >= ctx.n) throw input_error("generator index out of range in word");
        for (int b = 0; b < ctx.n; ++b)
            if (b != g && std::abs(adh(b, g)) > 1e-12)
                throw model_error("generator " + std::to_string(g + 1) +
                                  " is not an eigenvector of the chosen direction");
        alpha_total += adh(g, g);
    }

    AdScalingResult res;
    res.predicted = pbw_scale(pbw_monomial(ctx, word), std::exp(t * alpha_total));

    const Mat phi = expm(Mat((t * adh).cast<cdouble>()));
    PbwElement conj = pbw_monomial(ctx, {});
    for (int g : word) {
        PbwElement letter = pbw_zero(ctx);
        for (int b = 0; b < ctx.n; ++b) {
            const cdouble coef = phi(b, g);
            if (std::abs(coef) == 0.0) continue;
            letter = pbw_add(letter, pbw_monomial(ctx, {b}, coef));
        }
        conj = pbw_mul(conj, letter, ctx);
    }
    res.conjugated = conj;
    res.residual = pbw_diff_norm(res.predicted, res.conjugated);
    return res;
}

inline ordered_json pbw_to_json(const PbwElement& e) {
    ordered_json j;
    j["order"] = ordered_json::array();
    for (int g : e.order) j["order"].push_back(g + 1);
    j["terms"] = ordered_json::array();
    for (const auto& [exps, c] : e.terms) {
        ordered_json term;
        term["exps"] = exps;
        term["re"] = c.real();
        term["im"] = c.imag();
        j["terms"].push_back(term);
    }
    return j;
}

inline PbwElement pbw_from_json(const ordered_json& j, const GenContext& ctx) {
    PbwElement e = pbw_zero(ctx);
    const auto& ord = expect_field(j, "order", "element");
    if (!ord.is_array() || static_cast<int>(ord.size()) != ctx.n)
        throw input_error("element: order must list every generator");
    for (int a = 0; a < ctx.n; ++a) {
        const int g = ord[static_cast<std::size_t>(a)].get<int>() - 1;
        if (g != ctx.order[static_cast<std::size_t>(a)])
            throw input_error("element: order does not match the context order");
    }
    for (const auto& term : expect_field(j, "terms", "element")) {
        const auto& ex = expect_field(term, "exps", "element term");
        if (!ex.is_array() || static_cast<int>(ex.size()) != ctx.n)
            throw input_error("element term: exps must have one entry per generator");
        std::vector<int> exps(static_cast<std::size_t>(ctx.n));
        int degree = 0;
        for (int a = 0; a < ctx.n; ++a) {
            exps[static_cast<std::size_t>(a)] = ex[static_cast<std::size_t>(a)].get<int>();
            if (exps[static_cast<std::size_t>(a)] < 0)
                throw input_error("element term: negative exponent");
            degree += exps[static_cast<std::size_t>(a)];
        }
        if (degree > ctx.degree_cap)
            throw cap_error("element term degree " + std::to_string(degree) +
                            " exceeds degree cap " + std::to_string(ctx.degree_cap));
        const double re = json_to_finite(expect_field(term, "re", "element term"), "re");
        const double im = json_to_finite(expect_field(term, "im", "element term"), "im");
        e.terms[exps] += cdouble(re, im);
    }
    e.prune();
    return e;
}

}  // namespace liehodge
