#pragma once

// Shared aliases, the error taxonomy, and small dense-matrix helpers used
// across the library. Every other header includes this one first.

#include <complex>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace liehodge {

using cdouble = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct error : std::runtime_error {
    explicit error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Malformed files, bad flags, out-of-range indices, dimension mismatches.
// The CLI maps this family to exit code 3.
struct input_error : error {
    explicit input_error(const std::string& w) : error(w) {}
};

// Involution/form data that cannot produce an orthonormal adapted frame.
struct frame_error : error {
    explicit frame_error(const std::string& w) : error(w) {}
};

// Singular or otherwise inadmissible bilinear form where a nondegenerate
// one is required.
struct form_error : error {
    explicit form_error(const std::string& w) : error(w) {}
};

// Operation asked of data that does not support it (wrong group model,
// conjugating a non root vector, missing Cartan structure).
struct model_error : error {
    explicit model_error(const std::string& w) : error(w) {}
};

// Floating-point breakdowns: matrix log of a non positive operator,
// exponential scaling overflow.
struct numerical_error : error {
    explicit numerical_error(const std::string& w) : error(w) {}
};

// Enveloping-algebra degree cap exceeded.
struct cap_error : error {
    explicit cap_error(const std::string& w) : error(w) {}
};

// No admissible decay rate found below the search cap.
struct majorant_error : error {
    explicit majorant_error(const std::string& w) : error(w) {}
};

// A dense operator tagged with the degrees it maps between. Degrees are
// meaningful for cochain operators; semigroup splits reuse the struct with
// from_degree == to_degree.
struct LinOp {
    int from_degree = 0;
    int to_degree = 0;
    Mat mat;
};

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const RMat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Largest singular value. All uses are desk scale, so JacobiSVD is fine.
inline double op_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

inline bool hermitian_within(const Mat& g, double tol) {
    return max_abs(Mat(g - g.adjoint())) <= tol;
}

// LIEHODGE_THREADS caps the worker count; unset means hardware concurrency.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("LIEHODGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v < 1024) return static_cast<unsigned>(v);
    }
    return hw;
}

// Deterministic parallel map: body(i) must write only to per-index storage,
// so the partition of indices across workers never changes the result.
template <typename F>
void parallel_for(std::size_t count, F&& body) {
    unsigned workers = thread_budget();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_failure;
    std::mutex mu;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_failure) first_failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_failure) std::rethrow_exception(first_failure);
}

}  // namespace liehodge
