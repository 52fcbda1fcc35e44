#include "sketchsearch/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sketchsearch {

bool ElementPrediction::offers(Category c) const {
    return std::any_of(top.begin(), top.end(), [c](const RankedCategory& r) { return r.category == c; });
}

ElementPrediction make_prediction(const std::array<double, kCategoryCount>& probabilities) {
    std::array<std::size_t, kCategoryCount> order{};
    std::iota(order.begin(), order.end(), 0);
    // Category enumerators are declared in name order, so index order is name order.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return probabilities[a] > probabilities[b];
    });
    ElementPrediction p;
    p.probabilities = probabilities;
    for (std::size_t i = 0; i < p.top.size(); ++i) {
        p.top[i] = {static_cast<Category>(order[i]), probabilities[order[i]]};
    }
    return p;
}

std::array<double, kCategoryCount> softmax(const std::array<double, kCategoryCount>& logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::array<double, kCategoryCount> out{};
    double total = 0.0;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        out[i] = std::exp(logits[i] - peak);
        total += out[i];
    }
    for (auto& v : out) v /= total;
    return out;
}

}  // namespace sketchsearch
