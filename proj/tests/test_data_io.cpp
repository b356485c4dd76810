#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "dcopt/data_io.hpp"
#include "dcopt/errors.hpp"
#include "dcopt/rng.hpp"

using namespace dcopt;
using namespace dcopt::io;

namespace {

struct TempFile {
    std::string path;

    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "dcopt_test_" + std::to_string(counter++) + ".csv";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("load_points_csv") {
    SUBCASE("plain two-row file") {
        TempFile f("0,0\n1,1\n");
        const PointCloud cloud = load_points_csv(f.path, false);
        REQUIRE(cloud.points.rows() == 2);
        REQUIRE(cloud.points.cols() == 2);
        CHECK(cloud.points(0, 0) == 0.0);
        CHECK(cloud.points(0, 1) == 0.0);
        CHECK(cloud.points(1, 0) == 1.0);
        CHECK(cloud.points(1, 1) == 1.0);
    }

    SUBCASE("header row is skipped") {
        TempFile f("x,y\n3.5,-2\n");
        const PointCloud cloud = load_points_csv(f.path, true);
        REQUIRE(cloud.points.rows() == 1);
        CHECK(cloud.points(0, 0) == 3.5);
        CHECK(cloud.points(0, 1) == -2.0);
    }

    SUBCASE("non-numeric cell reports its location") {
        TempFile f("1,2\n3,4\n5,oops\n");
        try {
            load_points_csv(f.path, false);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row == 3);
            CHECK(e.col == 2);
        }
    }

    SUBCASE("ragged rows are rejected") {
        TempFile f("1,2\n3\n");
        CHECK_THROWS_AS(load_points_csv(f.path, false), ParseError);
    }

    SUBCASE("non-finite cells are rejected") {
        TempFile f("1,inf\n");
        CHECK_THROWS_AS(load_points_csv(f.path, false), ParseError);
    }

    SUBCASE("empty data is an error") {
        TempFile f("");
        CHECK_THROWS_AS(load_points_csv(f.path, false), EmptyFileError);
        TempFile g("x,y\n");
        CHECK_THROWS_AS(load_points_csv(g.path, true), EmptyFileError);
    }

    SUBCASE("missing file is an IoError") {
        CHECK_THROWS_AS(load_points_csv("does_not_exist.csv", false), IoError);
    }
}

TEST_CASE("gen_normal_points") {
    SUBCASE("same seed reproduces the matrix, different seeds differ") {
        const PointCloud a = gen_normal_points(20, 3, 0.0, 10.0, 99);
        const PointCloud b = gen_normal_points(20, 3, 0.0, 10.0, 99);
        const PointCloud c = gen_normal_points(20, 3, 0.0, 10.0, 100);
        CHECK(a.points.flat() == b.points.flat());
        CHECK(a.points.flat() != c.points.flat());
    }

    SUBCASE("moments at n*m = 1e6") {
        const std::size_t n = 1000, m = 1000;
        const PointCloud cloud = gen_normal_points(n, m, 0.0, 10.0, 7);
        double sum = 0.0, sum_sq = 0.0;
        for (const double v : cloud.points.flat()) {
            sum += v;
            sum_sq += v * v;
        }
        const double count = static_cast<double>(n * m);
        const double mean = sum / count;
        const double stddev = std::sqrt(sum_sq / count - mean * mean);
        CHECK(std::fabs(mean) <= 5.0 * 10.0 / std::sqrt(count));
        CHECK(stddev >= 9.9);
        CHECK(stddev <= 10.1);
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(gen_normal_points(0, 2, 0.0, 1.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_normal_points(2, 2, 0.0, 0.0, 1), std::invalid_argument);
    }
}

TEST_CASE("gen_uniform_starts") {
    SUBCASE("all points inside the box") {
        const auto starts =
            gen_uniform_starts(500, {-1.5, -1.5}, {1.5, 1.5}, 11);
        REQUIRE(starts.size() == 500);
        for (const Vec& s : starts) {
            REQUIRE(s.size() == 2);
            CHECK(s[0] >= -1.5);
            CHECK(s[0] < 1.5);
            CHECK(s[1] >= -1.5);
            CHECK(s[1] < 1.5);
        }
    }

    SUBCASE("count zero is empty") {
        CHECK(gen_uniform_starts(0, {0.0}, {1.0}, 3).empty());
    }

    SUBCASE("deterministic per seed") {
        const auto a = gen_uniform_starts(50, {-2.0, 1.0}, {0.0, 4.0}, 17);
        const auto b = gen_uniform_starts(50, {-2.0, 1.0}, {0.0, 4.0}, 17);
        CHECK(a == b);
    }

    SUBCASE("bad bounds are rejected") {
        CHECK_THROWS_AS(gen_uniform_starts(1, {0.0}, {0.0}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(gen_uniform_starts(1, {0.0, 1.0}, {1.0}, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("dissimilarity_from_points") {
    SUBCASE("hand-checked 1-D instance") {
        PointCloud cloud;
        cloud.points = Matrix(3, 1);
        cloud.points(0, 0) = 0.0;
        cloud.points(1, 0) = 3.0;
        cloud.points(2, 0) = 4.0;
        const Matrix d = dissimilarity_from_points(cloud);
        const double expect[3][3] = {{0, 3, 4}, {3, 0, 1}, {4, 1, 0}};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(d(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-15));
    }

    SUBCASE("duplicate rows give a zero off-diagonal entry") {
        PointCloud cloud;
        cloud.points = Matrix(2, 2);
        cloud.points(0, 0) = cloud.points(1, 0) = 1.5;
        cloud.points(0, 1) = cloud.points(1, 1) = -0.5;
        const Matrix d = dissimilarity_from_points(cloud);
        CHECK(d(0, 1) == 0.0);
    }

    SUBCASE("symmetry, zero diagonal and triangle inequality") {
        const PointCloud cloud = gen_normal_points(15, 3, 0.0, 5.0, 23);
        const Matrix d = dissimilarity_from_points(cloud);
        for (std::size_t i = 0; i < 15; ++i) {
            CHECK(d(i, i) == 0.0);
            for (std::size_t j = 0; j < 15; ++j) {
                CHECK(d(i, j) == d(j, i));
                for (std::size_t l = 0; l < 15; ++l)
                    CHECK(d(i, j) <= d(i, l) + d(l, j) + 1e-12);
            }
        }
    }
}

TEST_CASE("centered_mds_start") {
    SUBCASE("column sums vanish") {
        const Matrix x = centered_mds_start(30, 3, 31);
        for (std::size_t t = 0; t < 3; ++t) {
            double col = 0.0;
            for (std::size_t i = 0; i < 30; ++i) col += x(i, t);
            CHECK(std::fabs(col) <= 1e-10);
        }
    }

    SUBCASE("n=1 centers to the zero matrix") {
        const Matrix x = centered_mds_start(1, 4, 5);
        for (const double v : x.flat()) CHECK(v == 0.0);
    }

    SUBCASE("deterministic per seed") {
        CHECK(centered_mds_start(6, 2, 77).flat() ==
              centered_mds_start(6, 2, 77).flat());
    }
}

TEST_CASE("RngSpec dispatch") {
    Rng a(5), b(5);
    const RngSpec normal = RngSpec::normal(5, 1.0, 2.0);
    const RngSpec uniform = RngSpec::uniform(5, -1.0, 1.0);
    CHECK(normal.sample(a) == Rng(5).normal(1.0, 2.0));
    const double u = uniform.sample(b);
    CHECK(u >= -1.0);
    CHECK(u < 1.0);
}
