#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

#include "sketchsearch/random.hpp"
#include "sketchsearch/stroke.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SKETCHSEARCH_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("sketchsearch-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline sketchsearch::StrokeSequence random_sketch(sketchsearch::Rng& rng, double extent = 100.0) {
    sketchsearch::StrokeSequence s;
    const auto strokes = rng.integer(1, 5);
    for (int k = 0; k < strokes; ++k) {
        sketchsearch::Stroke st;
        const auto points = rng.integer(1, 30);
        double x = rng.uniform(0, extent), y = rng.uniform(0, extent);
        for (int i = 0; i < points; ++i) {
            st.points.push_back({x, y});
            x += rng.uniform(-extent / 8, extent / 8);
            y += rng.uniform(-extent / 8, extent / 8);
        }
        s.push_back(std::move(st));
    }
    return s;
}

/// Best total over every injective row -> column map (rows may stay
/// unmatched), by plain recursion.
inline double exhaustive_assignment(const std::vector<double>& w, std::size_t rows, std::size_t cols) {
    std::vector<char> used(cols, 0);
    double best = 0.0;
    auto rec = [&](auto&& self, std::size_t r, double acc) -> void {
        if (r == rows) {
            best = std::max(best, acc);
            return;
        }
        self(self, r + 1, acc);
        for (std::size_t c = 0; c < cols; ++c) {
            if (used[c]) continue;
            used[c] = 1;
            self(self, r + 1, acc + w[r * cols + c]);
            used[c] = 0;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

/// Same optimum by dynamic programming over subsets of rows; columns are
/// visited once each. Exact for rows <= ~16.
inline double subset_dp_assignment(const std::vector<double>& w, std::size_t rows, std::size_t cols) {
    const std::size_t states = std::size_t{1} << rows;
    std::vector<double> dp(states, -1.0);
    dp[0] = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t mask = states; mask-- > 0;) {
            if (dp[mask] < 0.0) continue;
            for (std::size_t r = 0; r < rows; ++r) {
                if (mask & (std::size_t{1} << r)) continue;
                const auto next = mask | (std::size_t{1} << r);
                dp[next] = std::max(dp[next], dp[mask] + w[r * cols + c]);
            }
        }
    }
    return *std::max_element(dp.begin(), dp.end());
}

template <typename Fn>
double seconds(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testing
