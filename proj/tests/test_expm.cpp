#include <cmath>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace liehodge;

namespace {

Mat seeded_hermitian(std::uint64_t seed, int dim) {
    Sl2Sampler smp(seed);
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cdouble(smp.gauss(), smp.gauss());
    return Mat(0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_CASE("exponential of the zero matrix") {
    CHECK(max_abs(Mat(expm(Mat(Mat::Zero(4, 4))) - Mat::Identity(4, 4))) == 0.0);
}

TEST_CASE("diagonal exponentials") {
    Mat d = Mat::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    d(2, 2) = cdouble(0.0, M_PI);
    const Mat e = expm(d);
    CHECK(std::abs(e(0, 0) - std::exp(1.0)) <= 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(-2.0)) <= 1e-15);
    CHECK(std::abs(e(2, 2) + 1.0) <= 1e-14);
    CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("nilpotent exponential is exact") {
    Mat n = Mat::Zero(2, 2);
    n(0, 1) = 1.0;
    const Mat e = expm(n);
    CHECK(std::abs(e(0, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(e(0, 1) - 1.0) <= 1e-15);
    CHECK(std::abs(e(1, 0)) <= 1e-15);
}

TEST_CASE("rotation generator") {
    const double th = 0.7;
    Mat g = Mat::Zero(2, 2);
    g(0, 1) = -th;
    g(1, 0) = th;
    CHECK(max_abs(Mat(expm(g) - rotation(th).cast<cdouble>())) <= 1e-15);
}

TEST_CASE("group law on commuting arguments") {
    const Mat h = seeded_hermitian(3, 5);
    const Mat e1 = expm(Mat(0.3 * h));
    const Mat e2 = expm(Mat(0.7 * h));
    const Mat e = expm(h);
    CHECK(max_abs(Mat(e1 * e2 - e)) <= 1e-12 * op_norm(e));
}

TEST_CASE("inverse through negation") {
    const Mat h = seeded_hermitian(11, 6);
    CHECK(max_abs(Mat(expm(h) * expm(Mat(-h)) - Mat::Identity(6, 6))) <= 1e-12);
}

TEST_CASE("scaling branch agrees with the halved square") {
    Mat big = seeded_hermitian(7, 4);
    big *= 40.0;  // well beyond the order-13 threshold
    const Mat direct = expm(big);
    const Mat half = expm(Mat(0.5 * big));
    CHECK(max_abs(Mat(half * half - direct)) <= 1e-10 * op_norm(direct));
}

TEST_CASE("hermitian exponential matches the spectral form") {
    const Mat h = seeded_hermitian(23, 6);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Mat spectral = es.eigenvectors() *
                         es.eigenvalues().array().exp().matrix().asDiagonal() *
                         es.eigenvectors().adjoint();
    CHECK(max_abs(Mat(expm(h) - spectral)) <= 1e-12 * op_norm(spectral));
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(expm(Mat(Mat::Zero(2, 3))), input_error);
    Mat inf = Mat::Zero(2, 2);
    inf(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(expm(inf), input_error);
    Mat huge = Mat::Identity(2, 2);
    huge *= 1e60;
    CHECK_THROWS_AS(expm(huge), numerical_error);
}

TEST_CASE("real overload stays real") {
    RMat a(2, 2);
    a << 0.0, -1.0, 1.0, 0.0;
    const RMat e = expm(a);
    CHECK(max_abs(RMat(e - rotation(1.0))) <= 1e-14);
}
