#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sketchsearch {

struct Assignment {
    double weight = 0.0;
    /// For each row, the matched column or -1.
    std::vector<int> row_to_col;
};

/// Maximum-weight one-to-one assignment on a dense rows x cols matrix of
/// non-negative weights (row-major). Every row and column is used at most
/// once; rows may stay unmatched when there are fewer columns. Solved with
/// the shortest-augmenting-path Hungarian method in O(n^2 m).
Assignment max_weight_assignment(std::span<const double> weights, std::size_t rows, std::size_t cols);

}  // namespace sketchsearch
