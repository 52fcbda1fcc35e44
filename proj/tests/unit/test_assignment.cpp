#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "sketchsearch/assignment.hpp"

using namespace sketchsearch;

namespace {

void check_consistent(const Assignment& a, const std::vector<double>& w, std::size_t rows, std::size_t cols) {
    REQUIRE(a.row_to_col.size() == rows);
    std::set<int> used;
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const int c = a.row_to_col[r];
        if (c < 0) continue;
        REQUIRE(c < static_cast<int>(cols));
        CHECK(used.insert(c).second);
        total += w[r * cols + static_cast<std::size_t>(c)];
    }
    CHECK(total == doctest::Approx(a.weight).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("assignment") {

TEST_CASE("small hand cases") {
    const std::vector<double> w{1, 2,
                                3, 1};
    const auto a = max_weight_assignment(w, 2, 2);
    CHECK(a.weight == 5.0);
    CHECK(a.row_to_col == std::vector<int>{1, 0});

    const std::vector<double> wide{0.5, 0.9, 0.1};
    CHECK(max_weight_assignment(wide, 1, 3).row_to_col == std::vector<int>{1});

    const std::vector<double> tall{0.4, 0.7, 0.2};
    const auto t = max_weight_assignment(tall, 3, 1);
    CHECK(t.weight == 0.7);
    CHECK(t.row_to_col == std::vector<int>{-1, 0, -1});

    CHECK(max_weight_assignment({}, 3, 0).weight == 0.0);
    CHECK(max_weight_assignment({}, 0, 4).row_to_col.empty());
}

TEST_CASE("equals exhaustive enumeration and subset DP on random matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto rows = static_cast<std::size_t>(rng.integer(1, 5));
        const auto cols = static_cast<std::size_t>(rng.integer(1, 7));
        std::vector<double> w(rows * cols);
        for (auto& v : w) v = rng.chance(0.3) ? 0.0 : rng.uniform(0, 3);
        if (rng.chance(0.2)) {
            for (auto& v : w) v = std::round(v);
        }
        const auto a = max_weight_assignment(w, rows, cols);
        check_consistent(a, w, rows, cols);
        CHECK(std::abs(a.weight - testing::exhaustive_assignment(w, rows, cols)) <= 1e-9);
        CHECK(std::abs(a.weight - testing::subset_dp_assignment(w, rows, cols)) <= 1e-9);
    }
}

TEST_CASE("larger instances against the subset DP") {
    Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rows = static_cast<std::size_t>(rng.integer(6, 10));
        const auto cols = static_cast<std::size_t>(rng.integer(1, 40));
        std::vector<double> w(rows * cols);
        for (auto& v : w) v = rng.chance(0.5) ? 0.0 : rng.uniform(0, 1);
        const auto a = max_weight_assignment(w, rows, cols);
        check_consistent(a, w, rows, cols);
        CHECK(std::abs(a.weight - testing::subset_dp_assignment(w, rows, cols)) <= 1e-9);
    }
}

}  // TEST_SUITE
