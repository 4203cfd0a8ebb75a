#pragma once

// JSON ingestion and emission. Parse failures surface as input_error with a
// file:line:column prefix. Matrix wire conventions: real matrices are nested
// arrays of numbers, complex matrices are nested arrays of [re, im] pairs,
// both row major.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core.hpp"

namespace liehodge {

using ordered_json = nlohmann::ordered_json;

inline ordered_json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        if (byte > text.size()) byte = text.size();
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw input_error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": " + e.what());
    }
}

inline ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

inline const ordered_json& expect_field(const ordered_json& j, const std::string& key,
                                        const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw input_error(what + ": missing field \"" + key + "\"");
    return *it;
}

inline double json_to_finite(const ordered_json& j, const std::string& what) {
    if (!j.is_number()) throw input_error(what + ": expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw input_error(what + ": non-finite value");
    return v;
}

// Scalar entry: either a plain number or an [re, im] pair.
inline cdouble json_to_scalar(const ordered_json& j, const std::string& what) {
    if (j.is_number()) return cdouble(json_to_finite(j, what), 0.0);
    if (j.is_array() && j.size() == 2)
        return cdouble(json_to_finite(j[0], what), json_to_finite(j[1], what));
    throw input_error(what + ": expected number or [re, im] pair");
}

inline RMat json_to_rmat(const ordered_json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw input_error(what + ": expected a nonempty matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw input_error(what + ": expected nested row arrays");
    RMat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw input_error(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                json_to_finite(j[r][c], what);
    }
    return m;
}

inline Mat json_to_cmat(const ordered_json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw input_error(what + ": expected a nonempty matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw input_error(what + ": expected nested row arrays");
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw input_error(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                json_to_scalar(j[r][c], what);
    }
    return m;
}

inline ordered_json rmat_to_json(const RMat& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json cmat_to_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(ordered_json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

// LinOp wire format:
// {"from": q, "to": q', "rows": r, "cols": c, "data": [[re, im], ...]} with
// data flattened row major.
inline ordered_json linop_to_json(const LinOp& op) {
    ordered_json j;
    j["from"] = op.from_degree;
    j["to"] = op.to_degree;
    j["rows"] = op.mat.rows();
    j["cols"] = op.mat.cols();
    ordered_json data = ordered_json::array();
    for (Eigen::Index r = 0; r < op.mat.rows(); ++r)
        for (Eigen::Index c = 0; c < op.mat.cols(); ++c)
            data.push_back(ordered_json::array({op.mat(r, c).real(), op.mat(r, c).imag()}));
    j["data"] = std::move(data);
    return j;
}

inline LinOp linop_from_json(const ordered_json& j, const std::string& what = "linop") {
    LinOp op;
    op.from_degree = expect_field(j, "from", what).get<int>();
    op.to_degree = expect_field(j, "to", what).get<int>();
    const auto rows = expect_field(j, "rows", what).get<Eigen::Index>();
    const auto cols = expect_field(j, "cols", what).get<Eigen::Index>();
    const auto& data = expect_field(j, "data", what);
    if (rows < 0 || cols < 0 ||
        !data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
        throw input_error(what + ": data length does not match rows*cols");
    op.mat.resize(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            op.mat(r, c) = json_to_scalar(data[k++], what);
    return op;
}

}  // namespace liehodge
