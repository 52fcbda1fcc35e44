#pragma once

#include <array>
#include <span>
#include <string_view>

#include "sketchsearch/category.hpp"
#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

struct RankedCategory {
    Category category = Category::Avatar;
    double confidence = 0.0;
};

/// Top-3 view over a full 23-way probability vector. Entries are sorted by
/// confidence descending, ties by category name ascending.
struct ElementPrediction {
    std::array<RankedCategory, 3> top{};
    std::array<double, kCategoryCount> probabilities{};

    double confidence_of(Category c) const { return probabilities[index_of(c)]; }
    bool offers(Category c) const;
};

ElementPrediction make_prediction(const std::array<double, kCategoryCount>& probabilities);

/// Numerically stable softmax; the output sums to 1.
std::array<double, kCategoryCount> softmax(const std::array<double, kCategoryCount>& logits);

/// Common interface of the template and neural backends. Implementations are
/// immutable after construction and safe to share across threads.
class Recognizer {
public:
    virtual ~Recognizer() = default;
    virtual ElementPrediction classify(const StrokeSequence& sketch) const = 0;
    virtual std::string_view backend() const = 0;
};

}  // namespace sketchsearch
