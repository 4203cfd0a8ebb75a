#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace liehodge;
using Catch::Approx;

namespace {

RMat inverse2(const RMat& x) {
    RMat r(2, 2);
    r << x(1, 1), -x(0, 1), -x(1, 0), x(0, 0);
    return r;
}

// Elements kept moderate enough that 256 quadrature nodes resolve the
// spherical integrand to near machine precision.
RMat moderate_element(Sl2Sampler& smp) {
    RMat n = RMat::Identity(2, 2);
    n(0, 1) = 0.5 * smp.gauss();
    const double h = 0.6 * (2.0 * smp.uniform() - 1.0);
    const double th = 2.0 * M_PI * smp.uniform();
    return n * diag_exp(h) * rotation(th);
}

}  // namespace

TEST_CASE("triangular decomposition of a diagonal element is trivial") {
    const RMat x = diag_exp(std::log(2.0));
    for (const IwasawaNAK& d : {iwasawa_nak(x), iwasawa_nak_rq(x)}) {
        CHECK(max_abs(RMat(d.n - RMat::Identity(2, 2))) <= 1e-15);
        CHECK(max_abs(RMat(d.a - x)) <= 1e-15);
        CHECK(max_abs(RMat(d.k - RMat::Identity(2, 2))) <= 1e-15);
        CHECK(d.h == Approx(std::log(2.0)).margin(1e-15));
        CHECK(d.xi == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("decomposition fields of a pure shear") {
    RMat x = RMat::Identity(2, 2);
    x(0, 1) = 2.0;
    const IwasawaNAK d = iwasawa_nak(x);
    CHECK(d.xi == Approx(2.0).margin(1e-14));
    CHECK(d.h == Approx(0.0).margin(1e-14));
    CHECK(max_abs(RMat(d.h_mat)) <= 1e-14);
    CHECK(max_abs(RMat(d.n - x)) <= 1e-14);
}

TEST_CASE("polar decomposition sorts the split part above one") {
    RMat x = RMat::Zero(2, 2);
    x(0, 0) = 0.5;
    x(1, 1) = 2.0;
    const CartanKAK d = cartan_kak(x);
    CHECK(d.sigma1 == Approx(2.0).margin(1e-14));
    CHECK(d.a(0, 0) == Approx(2.0).margin(1e-14));
    CHECK(d.a(1, 1) == Approx(0.5).margin(1e-14));
    RMat k1(2, 2);
    k1 << 0.0, -1.0, 1.0, 0.0;
    CHECK(max_abs(RMat(d.k1 - k1)) <= 1e-14);
    CHECK(max_abs(RMat(d.k2 - inverse2(k1))) <= 1e-12);
    CHECK(max_abs(RMat(d.k1 * d.a * d.k2 - x)) <= 1e-12);
}

TEST_CASE("random elements decompose and reconstruct both ways") {
    Sl2Sampler smp(202);
    double worst_recon = 0.0, worst_agree = 0.0, worst_kak = 0.0, worst_det = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RMat x = smp.next();
        worst_det = std::max(worst_det, std::abs(x.determinant() - 1.0));
        const IwasawaNAK d1 = iwasawa_nak(x);
        const IwasawaNAK d2 = iwasawa_nak_rq(x);
        worst_recon = std::max(worst_recon, max_abs(RMat(d1.n * d1.a * d1.k - x)));
        worst_recon = std::max(worst_recon, max_abs(RMat(d2.n * d2.a * d2.k - x)));
        worst_agree = std::max({worst_agree, max_abs(RMat(d1.n - d2.n)),
                                max_abs(RMat(d1.a - d2.a)), max_abs(RMat(d1.k - d2.k))});
        const CartanKAK kk = cartan_kak(x);
        worst_kak = std::max(worst_kak, max_abs(RMat(kk.k1 * kk.a * kk.k2 - x)));
        CHECK(kk.sigma1 >= 1.0 - 1e-12);
        CHECK(std::abs(kk.k1.determinant() - 1.0) <= 1e-12);
        CHECK(std::abs(kk.k2.determinant() - 1.0) <= 1e-12);
    }
    CHECK(worst_det <= 1e-12);
    CHECK(worst_recon <= 1e-12);
    CHECK(worst_agree <= 1e-10);
    CHECK(worst_kak <= 1e-12);
}

TEST_CASE("the displacement norm of a split element is explicit") {
    for (double s : {0.3, 0.7, 1.5}) {
        CHECK(norm_p(diag_exp(s)) == Approx(std::abs(s) * std::sqrt(8.0)).epsilon(1e-13));
        CHECK(norm_p(diag_exp(-s)) == Approx(std::abs(s) * std::sqrt(8.0)).epsilon(1e-13));
    }
    CHECK(norm_p(rotation(1.1)) <= 1e-12);
    RMat bad = RMat::Identity(2, 2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(norm_p(bad), input_error);
}

TEST_CASE("the displacement norm is subadditive along products") {
    Sl2Sampler smp(7 + 2);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RMat x = smp.next();
        const RMat y = smp.next();
        worst = std::max(worst, norm_p(RMat(x * y)) - norm_p(x) - norm_p(y));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("the spherical function is exactly one at the identity") {
    CHECK(spherical_phi0(RMat(RMat::Identity(2, 2)), 256) == 1.0);
    CHECK(spherical_phi0(RMat(RMat::Identity(2, 2)), 8) == 1.0);
}

TEST_CASE("the spherical function lies in the unit interval and decays") {
    const double p1 = spherical_phi0(diag_exp(0.3));
    const double p2 = spherical_phi0(diag_exp(1.0));
    CHECK(p1 > 0.0);
    CHECK(p1 < 1.0);
    CHECK(p2 < p1);
}

TEST_CASE("node guards on the spherical quadrature") {
    const RMat e = RMat::Identity(2, 2);
    CHECK_THROWS_AS(spherical_phi0(e, 7), input_error);
    CHECK_THROWS_AS(spherical_phi0(e, 6), input_error);
    CHECK_THROWS_AS(spherical_phi0(e, 0), input_error);
    CHECK_NOTHROW(spherical_phi0(e, 10));
    RMat bad = RMat::Identity(2, 2);
    bad(1, 1) = 3.0;
    CHECK_THROWS_AS(spherical_phi0(bad, 256), input_error);
}

TEST_CASE("bi-invariance and inversion symmetry on moderate elements") {
    Sl2Sampler smp(31);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const RMat x = moderate_element(smp);
        const double ref = spherical_phi0(x, 256);
        const RMat k1 = rotation(2.0 * M_PI * smp.uniform());
        const RMat k2 = rotation(2.0 * M_PI * smp.uniform());
        worst = std::max(worst, std::abs(spherical_phi0(RMat(k1 * x * k2), 256) - ref));
        worst = std::max(worst, std::abs(spherical_phi0(inverse2(x), 256) - ref));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("node doubling contracts the quadrature error on resolved elements") {
    const RichardsonCheck r = richardson_check(diag_exp(1.0), 64);
    CHECK(r.pass);
    CHECK((r.ratio >= 4.0 || r.diff_fine < 1e-13));
    CHECK(std::abs(spherical_phi0(diag_exp(1.0), 256) -
                   spherical_phi0(diag_exp(1.0), 4096)) <= 1e-10);
}

TEST_CASE("node doubling exposes an under-resolved integrand") {
    const RichardsonCheck r = richardson_check(diag_exp(5.0), 8);
    CHECK_FALSE(r.pass);
    CHECK(r.ratio < 4.0);
}

TEST_CASE("spherical decay matches the polynomial-times-exponential model") {
    std::vector<double> ts, phis, corrupted;
    for (int i = 0; i < 10; ++i) {
        const double t = 0.5 + 0.5 * i;
        ts.push_back(t);
        // deep into the decay the integrand needs a dense grid
        const double phi = spherical_phi0(diag_exp(t), 1 << 16);
        phis.push_back(phi);
        corrupted.push_back(phi * std::exp(t));
    }
    const GrowthFit clean = growth_fit(ts, phis);
    CHECK(clean.pass);
    CHECK(clean.max_abs_residual <= 0.05);
    CHECK(clean.exponent > 0.8);
    CHECK(clean.exponent < 1.4);
    CHECK(clean.log_c_bound >= clean.log_c_fit);

    const GrowthFit broken = growth_fit(ts, corrupted);
    CHECK_FALSE(broken.pass);
    CHECK(broken.max_abs_residual > 0.3);
}

TEST_CASE("growth fit input guards") {
    CHECK_THROWS_AS(growth_fit({1.0, 2.0}, {0.5, 0.2}), input_error);
    CHECK_THROWS_AS(growth_fit({1.0, 2.0, 3.0}, {0.5, 0.2}), input_error);
    CHECK_THROWS_AS(growth_fit({0.0, 2.0, 3.0}, {0.5, 0.2, 0.1}), input_error);
    CHECK_THROWS_AS(growth_fit({1.0, 2.0, 3.0}, {0.5, -0.2, 0.1}), input_error);
}

TEST_CASE("the seminorm weight composes the norm and the spherical decay") {
    CHECK(seminorm_weight(RMat(RMat::Identity(2, 2)), 3.0, 2.0) == 1.0);
    const RMat x = diag_exp(1.0);
    const double expected =
        std::pow(1.0 + std::sqrt(8.0), 2.0) / spherical_phi0(x, 256);
    CHECK(seminorm_weight(x, 2.0, 2.0) == Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(seminorm_weight(x, 2.0, 0.0), input_error);
}

TEST_CASE("element validation separates the two models") {
    GroupElement split;
    split.model = "sl2r";
    split.matrix = diag_exp(0.4).cast<cdouble>();
    CHECK_NOTHROW(validate_group_element(split));
    CHECK(max_abs(RMat(require_split_real(split) - diag_exp(0.4))) == 0.0);

    GroupElement compact;
    compact.model = "su2";
    compact.matrix = Mat::Zero(2, 2);
    compact.matrix(0, 0) = cdouble(std::sqrt(0.5), std::sqrt(0.5));
    compact.matrix(1, 1) = cdouble(std::sqrt(0.5), -std::sqrt(0.5));
    CHECK_NOTHROW(validate_group_element(compact));
    CHECK_THROWS_AS(require_split_real(compact), model_error);

    GroupElement unknown = split;
    unknown.model = "so3";
    CHECK_THROWS_AS(validate_group_element(unknown), input_error);

    GroupElement complex_split = split;
    complex_split.matrix(0, 1) = cdouble(0.0, 0.5);
    CHECK_THROWS_AS(validate_group_element(complex_split), input_error);

    GroupElement stretched = split;
    stretched.matrix(0, 0) *= 2.0;
    CHECK_THROWS_AS(validate_group_element(stretched), input_error);

    GroupElement not_unitary = compact;
    not_unitary.matrix(0, 1) = 0.5;
    CHECK_THROWS_AS(validate_group_element(not_unitary), input_error);
}

TEST_CASE("the element sampler is deterministic and lands in the group") {
    Sl2Sampler s1(42), s2(42);
    for (int i = 0; i < 50; ++i) {
        const RMat a = s1.next();
        const RMat b = s2.next();
        CHECK(max_abs(RMat(a - b)) == 0.0);
        CHECK(std::abs(a.determinant() - 1.0) <= 1e-12);
    }
    Sl2Sampler s3(43);
    for (int i = 0; i < 100; ++i) {
        const double u = s3.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(std::isfinite(s3.gauss()));
    }
}
