#include "sketchsearch/assignment.hpp"

#include <limits>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

// Min-cost assignment for n <= m, 1-based with a virtual column 0.
// cost(i, j) for i in [0, n), j in [0, m). Returns column per row.
template <typename Cost>
std::vector<int> hungarian(std::size_t n, std::size_t m, Cost cost) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    }
    return row_to_col;
}

}  // namespace

Assignment max_weight_assignment(std::span<const double> weights, std::size_t rows, std::size_t cols) {
    if (weights.size() != rows * cols) throw Error(ErrorCode::InvalidInput, "assignment matrix size mismatch");
    Assignment out;
    out.row_to_col.assign(rows, -1);
    if (rows == 0 || cols == 0) return out;

    if (rows <= cols) {
        out.row_to_col = hungarian(rows, cols, [&](std::size_t i, std::size_t j) { return -weights[i * cols + j]; });
    } else {
        const auto col_to_row =
            hungarian(cols, rows, [&](std::size_t i, std::size_t j) { return -weights[j * cols + i]; });
        for (std::size_t c = 0; c < cols; ++c) {
            if (col_to_row[c] >= 0) out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        const int c = out.row_to_col[r];
        if (c < 0) continue;
        const double w = weights[r * cols + static_cast<std::size_t>(c)];
        // Zero-weight pairs are matches only in name.
        if (w > 0.0) {
            out.weight += w;
        } else {
            out.row_to_col[r] = -1;
        }
    }
    return out;
}

}  // namespace sketchsearch
