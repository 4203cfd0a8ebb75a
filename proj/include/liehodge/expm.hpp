#pragma once

// Matrix exponential by Pade approximation with scaling and squaring,
// following the standard order-13 backward-error analysis. Order selection
// keys on the 1-norm; the scaling exponent is capped so absurd inputs fail
// loudly instead of looping.

#include <cmath>
#include <vector>

#include "core.hpp"

namespace liehodge {

namespace detail {

inline double one_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Diagonal Pade of odd order m given its coefficient table b[0..m]:
// U collects odd powers, V even powers, result solves (V-U)X = V+U.
inline Mat pade_solve(const Mat& a, const std::vector<double>& b) {
    const Eigen::Index n = a.rows();
    const Mat id = Mat::Identity(n, n);
    const int m = static_cast<int>(b.size()) - 1;
    std::vector<Mat> even;  // A^0, A^2, A^4, ...
    even.push_back(id);
    const Mat a2 = a * a;
    for (int k = 2; k <= m - 1; k += 2) even.push_back(Mat(even.back() * a2));
    Mat u_sum = Mat::Zero(n, n), v_sum = Mat::Zero(n, n);
    for (int k = 0; k <= m; ++k) {
        const Mat& pw = even[static_cast<std::size_t>(k / 2)];
        if (k % 2 == 1)
            u_sum += b[static_cast<std::size_t>(k)] * pw;
        else
            v_sum += b[static_cast<std::size_t>(k)] * pw;
    }
    const Mat u = a * u_sum;
    return Mat((v_sum - u).partialPivLu().solve(v_sum + u));
}

inline Mat pade13(const Mat& a) {
    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    const Eigen::Index n = a.rows();
    const Mat id = Mat::Identity(n, n);
    const Mat a2 = a * a, a4 = a2 * a2, a6 = a2 * a4;
    const Mat u = a * Mat(a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * id);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                  b[0] * id;
    return Mat((v - u).partialPivLu().solve(v + u));
}

}  // namespace detail

inline Mat expm(const Mat& a) {
    if (a.rows() != a.cols()) throw input_error("expm: matrix must be square");
    if (a.size() == 0) return a;
    if (!a.allFinite()) throw input_error("expm: non-finite entries");

    const double nrm = detail::one_norm(a);
    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const std::vector<double> b9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
    if (nrm <= 1.495585217958292e-2) return detail::pade_solve(a, b3);
    if (nrm <= 2.539398330063230e-1) return detail::pade_solve(a, b5);
    if (nrm <= 9.504178996162932e-1) return detail::pade_solve(a, b7);
    if (nrm <= 2.097847961257068) return detail::pade_solve(a, b9);

    const double theta13 = 5.371920351148152;
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    if (s > 60)
        throw numerical_error("expm: required scaling 2^" + std::to_string(s) +
                              " exceeds the overflow guard (input norm " + std::to_string(nrm) +
                              ")");
    Mat x = detail::pade13(Mat(a / std::pow(2.0, s)));
    for (int i = 0; i < s; ++i) x = x * x;
    return x;
}

inline RMat expm(const RMat& a) { return expm(Mat(a.cast<cdouble>())).real(); }

}  // namespace liehodge
