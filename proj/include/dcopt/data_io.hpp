#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcopt/matrix.hpp"

namespace dcopt::io {

struct PointCloud {
    Matrix points; // n x m, all entries finite
    std::vector<std::string> labels; // optional; empty or one per row
};

// Comma-separated numeric rows, UTF-8, optional header. Row order is
// preserved. Throws ParseError (with 1-based file row / column) on bad
// cells or ragged rows, EmptyFileError when no data rows remain.
PointCloud load_points_csv(const std::string& path, bool has_header);

PointCloud gen_normal_points(std::size_t n, std::size_t m, double mean,
                             double stddev, std::uint64_t seed);

// componentwise-uniform start vectors in [lo, hi)
std::vector<Vec> gen_uniform_starts(std::size_t count, const Vec& lo,
                                    const Vec& hi, std::uint64_t seed);

// symmetric pairwise Euclidean distances, zero diagonal
Matrix dissimilarity_from_points(const PointCloud& cloud);

// (I - (1/n) e e^T) Xtilde with Xtilde entries uniform in (0, 10); the
// result has zero column sums
Matrix centered_mds_start(std::size_t n, std::size_t p, std::uint64_t seed);

} // namespace dcopt::io
