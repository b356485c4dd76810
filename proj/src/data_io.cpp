#include "dcopt/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string_view>

#include "dcopt/errors.hpp"
#include "dcopt/rng.hpp"

namespace dcopt::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    cell = trim(cell);
    if (cell.empty()) throw ParseError(row, col, "empty cell");
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ParseError(row, col, "not a number: '" + std::string(cell) + "'");
    if (!std::isfinite(value))
        throw ParseError(row, col, "non-finite value: '" + std::string(cell) + "'");
    return value;
}

} // namespace

PointCloud load_points_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<Vec> rows;
    std::size_t cols = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (trim(line).empty()) continue;

        Vec row;
        std::size_t begin = 0, col = 0;
        while (true) {
            ++col;
            const std::size_t comma = line.find(',', begin);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            row.push_back(
                parse_cell(std::string_view(line).substr(begin, end - begin),
                           line_no, col));
            if (comma == std::string::npos) break;
            begin = comma + 1;
        }
        if (cols == 0) {
            cols = row.size();
        } else if (row.size() != cols) {
            throw ParseError(line_no, row.size() < cols ? row.size() + 1 : cols + 1,
                             "expected " + std::to_string(cols) + " columns, got " +
                                 std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyFileError("'" + path + "' has no data rows");

    PointCloud cloud;
    cloud.points = Matrix(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) cloud.points(i, j) = rows[i][j];
    return cloud;
}

PointCloud gen_normal_points(std::size_t n, std::size_t m, double mean,
                             double stddev, std::uint64_t seed) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("gen_normal_points: n and m must be >= 1");
    if (!(stddev > 0.0))
        throw std::invalid_argument("gen_normal_points: stddev must be > 0");
    Rng rng(seed);
    PointCloud cloud;
    cloud.points = Matrix(n, m);
    for (double& v : cloud.points.flat()) v = rng.normal(mean, stddev);
    return cloud;
}

std::vector<Vec> gen_uniform_starts(std::size_t count, const Vec& lo,
                                    const Vec& hi, std::uint64_t seed) {
    if (lo.size() != hi.size())
        throw std::invalid_argument("gen_uniform_starts: bound sizes differ");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw std::invalid_argument(
                "gen_uniform_starts: need lo < hi componentwise");
    Rng rng(seed);
    std::vector<Vec> starts(count);
    for (Vec& s : starts) {
        s.resize(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) s[i] = rng.uniform(lo[i], hi[i]);
    }
    return starts;
}

Matrix dissimilarity_from_points(const PointCloud& cloud) {
    const std::size_t n = cloud.points.rows(), m = cloud.points.cols();
    Matrix delta(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* a = cloud.points.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* b = cloud.points.row(j);
            double d = 0.0;
            for (std::size_t t = 0; t < m; ++t) {
                const double diff = a[t] - b[t];
                d += diff * diff;
            }
            d = std::sqrt(d);
            delta(i, j) = d;
            delta(j, i) = d;
        }
    }
    return delta;
}

Matrix centered_mds_start(std::size_t n, std::size_t p, std::uint64_t seed) {
    if (n == 0 || p == 0)
        throw std::invalid_argument("centered_mds_start: n and p must be >= 1");
    Rng rng(seed);
    Matrix x(n, p);
    for (double& v : x.flat()) v = rng.uniform_open(0.0, 10.0);
    for (std::size_t t = 0; t < p; ++t) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, t);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) x(i, t) -= mean;
    }
    return x;
}

} // namespace dcopt::io
