#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/category_mapping.hpp"
#include "sketchsearch/corpus.hpp"
#include "sketchsearch/query.hpp"

namespace sketchsearch {

inline constexpr std::size_t kPageSize = 80;

struct MetricWeights {
    double position = 0.7;
    double shape = 0.3;
};

using IdfTable = std::array<double, kSlotCount>;

/// 1 - centre distance / sqrt(2), floored at 0.
double position_similarity(const BBox& a, const BBox& b);
/// Product of the width and height ratios (smaller over larger).
double shape_similarity(const BBox& a, const BBox& b);

/// idf(slot) * (w_pos * pos + w_shape * shape) when the element's mask
/// contains the query slot, else 0.
double pair_score(const QueryElement& q, const BBox& element_box, SlotMask element_mask, const IdfTable& idf,
                  const MetricWeights& weights = {});

/// Sum of idf over the query's slots; the score normalizer.
double query_normalizer(const SearchQuery& query, const IdfTable& idf);

/// Maximum one-to-one assignment weight divided by the normalizer, in [0,1].
double screen_score(const SearchQuery& query, std::span<const IndexedElement> elements, const IdfTable& idf,
                    const MetricWeights& weights = {});

/// Same, for a document mapped through `mapping`.
double screen_score(const SearchQuery& query, const ScreenDocument& screen, const CategoryMapping& mapping,
                    const IdfTable& idf, const MetricWeights& weights = {});

/// Score ceiling from postings alone: every query element whose slot the
/// screen carries is assumed to match perfectly.
double score_upper_bound(const SearchQuery& query, SlotMask screen_mask, const IdfTable& idf);

struct Hit {
    std::uint32_t screen = 0;
    double score = 0.0;
};

struct SearchOptions {
    MetricWeights weights;
    /// 0 means one per hardware thread.
    unsigned threads = 0;
};

/// Every screen, best first; ties by screen id ascending.
class Ranking {
public:
    Ranking() = default;
    explicit Ranking(std::vector<Hit> hits) : hits_(std::move(hits)) {}

    std::size_t total() const { return hits_.size(); }
    const std::vector<Hit>& hits() const { return hits_; }
    /// Ranks page*80 .. page*80+79; empty past the end.
    std::span<const Hit> page(std::size_t page) const;
    /// 0-based rank of a screen, or -1.
    std::ptrdiff_t rank_of(std::uint32_t screen) const;

private:
    std::vector<Hit> hits_;
};

Ranking rank_screens(const SearchQuery& query, const CorpusIndex& index, const SearchOptions& options = {});

/// The first `n` entries of rank_screens, computed with upper-bound pruning:
/// screens are visited in descending bound order and scanning stops once no
/// remaining bound can reach the current n-th score.
std::vector<Hit> top_screens(const SearchQuery& query, const CorpusIndex& index, std::size_t n,
                             const SearchOptions& options = {});

struct SearchPage {
    std::size_t page = 0;
    std::size_t total = 0;
    std::vector<Hit> hits;
};

SearchPage search(const SearchQuery& query, const CorpusIndex& index, std::size_t page,
                  const SearchOptions& options = {});

/// Strict weak order used everywhere: higher score first, then smaller id.
bool ranks_before(const Hit& a, const Hit& b, const CorpusIndex& index);

}  // namespace sketchsearch
