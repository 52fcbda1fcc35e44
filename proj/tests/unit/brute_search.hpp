#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sketchsearch/category_mapping.hpp"
#include "sketchsearch/corpus.hpp"
#include "sketchsearch/query.hpp"
#include "sketchsearch/search.hpp"

namespace testing {

/// Straight transcription of the scoring rule, kept apart from the library.
inline double brute_pair(const sketchsearch::QueryElement& q, const sketchsearch::ScreenElement& e,
                         const sketchsearch::CategoryMapping& mapping, const sketchsearch::IdfTable& idf,
                         double wp = 0.7, double ws = 0.3) {
    const auto slots = sketchsearch::map_category(e.label, mapping);
    if (std::find(slots.begin(), slots.end(), q.slot()) == slots.end()) return 0.0;
    const double dx = q.bbox.cx - e.bbox.cx;
    const double dy = q.bbox.cy - e.bbox.cy;
    const double pos = std::max(0.0, 1.0 - std::sqrt(dx * dx + dy * dy) / std::sqrt(2.0));
    const double qw = std::max(q.bbox.w, 1e-3), qh = std::max(q.bbox.h, 1e-3);
    const double ew = std::max(e.bbox.w, 1e-3), eh = std::max(e.bbox.h, 1e-3);
    const double shape = (std::min(qw, ew) / std::max(qw, ew)) * (std::min(qh, eh) / std::max(qh, eh));
    return idf[q.slot()] * (wp * pos + ws * shape);
}

inline std::vector<double> brute_matrix(const sketchsearch::SearchQuery& query, const sketchsearch::ScreenDocument& doc,
                                        const sketchsearch::CategoryMapping& mapping, const sketchsearch::IdfTable& idf,
                                        std::size_t& cols) {
    std::vector<const sketchsearch::ScreenElement*> visible;
    for (const auto& e : doc.elements) {
        if (e.visible) visible.push_back(&e);
    }
    cols = visible.size();
    std::vector<double> w(query.elements.size() * cols);
    for (std::size_t r = 0; r < query.elements.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] = brute_pair(query.elements[r], *visible[c], mapping, idf);
    }
    return w;
}

inline double brute_normalizer(const sketchsearch::SearchQuery& query, const sketchsearch::IdfTable& idf) {
    double n = 0.0;
    for (const auto& q : query.elements) n += idf[q.slot()];
    return n;
}

/// Exhaustive enumeration when the instance is small, subset DP otherwise.
inline double brute_screen_score(const sketchsearch::SearchQuery& query, const sketchsearch::ScreenDocument& doc,
                                 const sketchsearch::CategoryMapping& mapping, const sketchsearch::IdfTable& idf) {
    std::size_t cols = 0;
    const auto w = brute_matrix(query, doc, mapping, idf, cols);
    const std::size_t rows = query.elements.size();
    const double best = rows <= 4 && cols <= 8 ? exhaustive_assignment(w, rows, cols) : subset_dp_assignment(w, rows, cols);
    return std::min(1.0, best / brute_normalizer(query, idf));
}

struct BruteHit {
    std::string id;
    double score = 0.0;
};

inline std::vector<BruteHit> brute_ranking(const sketchsearch::SearchQuery& query,
                                           const std::vector<sketchsearch::ScreenDocument>& docs,
                                           const sketchsearch::CategoryMapping& mapping,
                                           const sketchsearch::IdfTable& idf) {
    std::vector<BruteHit> out;
    for (const auto& d : docs) out.push_back({d.id, brute_screen_score(query, d, mapping, idf)});
    std::sort(out.begin(), out.end(), [](const BruteHit& a, const BruteHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return out;
}

inline sketchsearch::SearchQuery random_query(sketchsearch::Rng& rng, std::size_t max_elements,
                                              const std::vector<std::size_t>& slots) {
    sketchsearch::SearchQuery q;
    const auto n = rng.integer(1, static_cast<std::int64_t>(max_elements));
    for (int i = 0; i < n; ++i) {
        sketchsearch::QueryElement e;
        const auto slot = slots[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(slots.size()) - 1))];
        if (slot == sketchsearch::kTextButtonSlot) {
            e.category = sketchsearch::Category::Square;
            e.compound = sketchsearch::Compound::TextButton;
        } else {
            e.category = sketchsearch::kAllCategories[slot];
        }
        e.bbox = {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.01, 1), rng.uniform(0.01, 0.5)};
        q.elements.push_back(e);
    }
    return q;
}

}  // namespace testing
