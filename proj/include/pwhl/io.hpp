#pragma once

// CSV ingestion and small output helpers.
//
// Dialect: comma separated, header row required, '.' decimal point, optional
// double quotes around header names. Empty, NA and non-finite cells are
// rejected; errors carry the 1-based file line and column.

#include "pwhl/core.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pwhl {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

inline double parse_cell(std::string_view cell, long line, long column) {
    if (cell.empty()) throw InputError("empty cell", line, column);
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw InputError("non-numeric cell '" + std::string(cell) + "'", line, column);
    if (!std::isfinite(v)) throw InputError("non-finite cell '" + std::string(cell) + "'", line, column);
    return v;
}

} // namespace detail

inline CsvTable parse_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = detail::trim(line);
        if (body.empty()) continue;
        const auto cells = detail::split_commas(body);
        if (t.header.empty()) {
            for (std::size_t k = 0; k < cells.size(); ++k) {
                std::string name = detail::unquote(cells[k]);
                if (name.empty()) throw InputError("empty header name", line_no, static_cast<long>(k + 1));
                t.header.push_back(std::move(name));
            }
            continue;
        }
        if (cells.size() != t.header.size())
            throw InputError("expected " + std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(cells.size()),
                             line_no, static_cast<long>(std::min(cells.size(), t.header.size()) + 1));
        std::vector<double> row(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k)
            row[k] = detail::parse_cell(cells[k], line_no, static_cast<long>(k + 1));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw InputError("missing header row");
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return parse_csv(in);
}

/// Builds a Dataset with `response` as y and every other column as a covariate.
inline Dataset to_dataset(const CsvTable& t, const std::string& response) {
    long yc = -1;
    for (std::size_t k = 0; k < t.header.size(); ++k)
        if (t.header[k] == response) yc = static_cast<long>(k);
    if (yc < 0) throw InputError("response column '" + response + "' not found");
    if (t.header.size() < 2) throw InputError("no covariate columns");
    if (t.rows.size() < 2) throw InputError("need at least two data rows");

    const auto n = static_cast<Index>(t.rows.size());
    const auto p = static_cast<Index>(t.header.size() - 1);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < t.header.size(); ++k)
        if (static_cast<long>(k) != yc) names.push_back(t.header[k]);
    for (Index i = 0; i < n; ++i) {
        const auto& row = t.rows[static_cast<std::size_t>(i)];
        Index j = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (static_cast<long>(k) == yc)
                y(i) = row[k];
            else
                x(i, j++) = row[k];
        }
    }
    return Dataset(std::move(x), std::move(y), std::move(names));
}

inline Dataset read_dataset(const std::string& path, const std::string& response) {
    return to_dataset(read_csv(path), response);
}

/// Writes y followed by the covariates, full round-trip precision. Unnamed
/// covariates are written as x1, x2, ...
inline void write_dataset(std::ostream& out, const Dataset& d, const std::string& response = "y") {
    out << response;
    const auto& names = d.feature_names();
    for (Index j = 0; j < d.cols(); ++j)
        out << ',' << (names.empty() ? "x" + std::to_string(j + 1) : names[static_cast<std::size_t>(j)]);
    out << '\n' << std::setprecision(17);
    for (Index i = 0; i < d.rows(); ++i) {
        out << d.y()(i);
        for (Index j = 0; j < d.cols(); ++j) out << ',' << d.x()(i, j);
        out << '\n';
    }
}

/// FNV-1a over the shape and the raw bytes of X (column-major) and y.
inline std::uint64_t content_hash(const Dataset& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < len; ++k) {
            h ^= b[k];
            h *= 0x100000001b3ULL;
        }
    };
    const std::int64_t shape[2] = {static_cast<std::int64_t>(d.rows()), static_cast<std::int64_t>(d.cols())};
    feed(shape, sizeof shape);
    feed(d.x().data(), sizeof(double) * static_cast<std::size_t>(d.x().size()));
    feed(d.y().data(), sizeof(double) * static_cast<std::size_t>(d.y().size()));
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

} // namespace pwhl
