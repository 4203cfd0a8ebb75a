#include <cmath>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace liehodge;

TEST_CASE("gauss rule integrates monomials to machine precision") {
    const Quadrature q = gauss_legendre(16);
    CHECK(q.nodes.size() == 16);
    CHECK(std::abs(q.weights.sum() - 2.0) <= 1e-14);
    for (int k = 0; k <= 31; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < 16; ++i) acc += q.weights(i) * std::pow(q.nodes(i), k);
        const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
        INFO("degree " << k);
        CHECK(std::abs(acc - exact) <= 1e-13);
    }
}

TEST_CASE("nodes are symmetric and interior") {
    const Quadrature q = gauss_legendre(9);
    for (Eigen::Index i = 0; i < 9; ++i) {
        CHECK(std::abs(q.nodes(i)) < 1.0);
        CHECK(std::abs(q.nodes(i) + q.nodes(8 - i)) <= 1e-14);
    }
    CHECK_THROWS_AS(gauss_legendre(0), input_error);
}

TEST_CASE("interval mapping") {
    const Quadrature q = gauss_legendre(12);
    RVec nodes, weights;
    map_interval(q, 0.0, 2.0, nodes, weights);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights(i) * nodes(i) * nodes(i);
    CHECK(std::abs(acc - 8.0 / 3.0) <= 1e-13);
}

TEST_CASE("barycentric interpolation reproduces polynomials") {
    const Quadrature q = gauss_legendre(10);
    const Barycentric bary(q.nodes);
    RVec samples(10);
    auto poly = [](double x) { return 3.0 - x + 2.0 * x * x * x - x * x * x * x * x; };
    for (Eigen::Index i = 0; i < 10; ++i) samples(i) = poly(q.nodes(i));
    for (double x : {-0.95, -0.3, 0.0, 0.11, 0.77}) {
        CHECK(std::abs(bary.eval(samples, x) - poly(x)) <= 1e-12);
    }
    // exact node hit returns the stored sample
    CHECK(bary.eval(samples, q.nodes(3)) == samples(3));
}

TEST_CASE("barycentric interpolation of matrix samples") {
    const Quadrature q = gauss_legendre(8);
    const Barycentric bary(q.nodes);
    std::vector<Mat> samples;
    for (Eigen::Index i = 0; i < 8; ++i) {
        Mat m(2, 2);
        const double x = q.nodes(i);
        m << x, x * x, 1.0 - x, cdouble(0.0, x * x * x);
        samples.push_back(m);
    }
    const double x = 0.4;
    const Mat got = bary.eval(samples, x);
    CHECK(std::abs(got(0, 0) - x) <= 1e-13);
    CHECK(std::abs(got(0, 1) - x * x) <= 1e-13);
    CHECK(std::abs(got(1, 1) - cdouble(0.0, x * x * x)) <= 1e-13);
}

TEST_CASE("singular endpoint integral") {
    const Quadrature q = gauss_legendre(32);
    // Int_0^t s^{-1/2} ds = 2 sqrt(t)
    for (double t : {0.25, 1.0, 4.0}) {
        const double got =
            detail::singular_integral([](double s) { return 1.0 / std::sqrt(s); }, t, 0.5, q);
        CHECK(std::abs(got - 2.0 * std::sqrt(t)) <= 1e-12);
    }
    CHECK_THROWS_AS(
        detail::singular_integral([](double s) { return 1.0 / s; }, 1.0, 0.75, q),
        input_error);
}

TEST_CASE("laplace integral") {
    const Quadrature q = gauss_legendre(32);
    // Int e^{-omega t} dt = 1/omega
    for (double om : {1.0, 10.0, 800.0}) {
        const double got = laplace_integral([](double) { return 1.0; }, om, 0.0, q);
        CHECK(std::abs(got - 1.0 / om) <= 1e-12 / om);
    }
    // Int e^{-omega t} t^{-1/2} dt = sqrt(pi/omega)
    for (double om : {1.0, 50.0}) {
        const double got =
            laplace_integral([](double t) { return 1.0 / std::sqrt(t); }, om, 0.5, q);
        CHECK(std::abs(got - std::sqrt(M_PI / om)) <= 1e-9);
    }
    CHECK_THROWS_AS(laplace_integral([](double) { return 1.0; }, 0.0, 0.0, q), input_error);
}
