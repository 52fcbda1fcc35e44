#include "sketchsearch/search.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sketchsearch/assignment.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

SlotMask query_mask(const SearchQuery& query) {
    SlotMask m = 0;
    for (const auto& q : query.elements) m |= slot_bit(q.slot());
    return m;
}

unsigned worker_count(const SearchOptions& options, std::size_t work) {
    unsigned n = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    if (work < 2048) n = 1;
    return std::max(1u, n);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
    if (workers <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=] { fn(lo, hi); });
    }
}

double score_elements(const SearchQuery& query, std::span<const IndexedElement> elements, const IdfTable& idf,
                      const MetricWeights& weights, double normalizer, std::vector<double>& matrix,
                      std::vector<std::size_t>& columns) {
    SlotMask wanted = query_mask(query);
    columns.clear();
    for (std::size_t e = 0; e < elements.size(); ++e) {
        if (elements[e].mask & wanted) columns.push_back(e);
    }
    if (columns.empty() || !(normalizer > 0.0)) return 0.0;

    const std::size_t rows = query.elements.size();
    const std::size_t cols = columns.size();
    matrix.assign(rows * cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& el = elements[columns[c]];
            matrix[r * cols + c] = pair_score(query.elements[r], el.bbox, el.mask, idf, weights);
        }
    }
    const double total = max_weight_assignment(matrix, rows, cols).weight;
    return std::min(1.0, total / normalizer);
}

}  // namespace

double position_similarity(const BBox& a, const BBox& b) {
    const double d = std::hypot(a.cx - b.cx, a.cy - b.cy);
    return std::max(0.0, 1.0 - d / std::sqrt(2.0));
}

double shape_similarity(const BBox& a, const BBox& b) {
    const double aw = std::max(a.w, kMinExtent), ah = std::max(a.h, kMinExtent);
    const double bw = std::max(b.w, kMinExtent), bh = std::max(b.h, kMinExtent);
    return (std::min(aw, bw) / std::max(aw, bw)) * (std::min(ah, bh) / std::max(ah, bh));
}

double pair_score(const QueryElement& q, const BBox& element_box, SlotMask element_mask, const IdfTable& idf,
                  const MetricWeights& weights) {
    const std::size_t slot = q.slot();
    if (!(element_mask & slot_bit(slot))) return 0.0;
    return idf[slot] * (weights.position * position_similarity(q.bbox, element_box) +
                        weights.shape * shape_similarity(q.bbox, element_box));
}

double query_normalizer(const SearchQuery& query, const IdfTable& idf) {
    double total = 0.0;
    for (const auto& q : query.elements) total += idf[q.slot()];
    return total;
}

double screen_score(const SearchQuery& query, std::span<const IndexedElement> elements, const IdfTable& idf,
                    const MetricWeights& weights) {
    if (query.elements.empty()) throw Error(ErrorCode::EmptyQuery, "query has no elements");
    std::vector<double> matrix;
    std::vector<std::size_t> columns;
    return score_elements(query, elements, idf, weights, query_normalizer(query, idf), matrix, columns);
}

double screen_score(const SearchQuery& query, const ScreenDocument& screen, const CategoryMapping& mapping,
                    const IdfTable& idf, const MetricWeights& weights) {
    std::vector<IndexedElement> elements;
    for (const auto& el : screen.elements) {
        if (!el.visible) continue;
        const SlotMask m = mapping.map(el.label);
        if (m) elements.push_back({0, m, el.bbox});
    }
    return screen_score(query, elements, idf, weights);
}

double score_upper_bound(const SearchQuery& query, SlotMask screen_mask, const IdfTable& idf) {
    const double norm = query_normalizer(query, idf);
    if (!(norm > 0.0)) return 0.0;
    double total = 0.0;
    for (const auto& q : query.elements) {
        if (screen_mask & slot_bit(q.slot())) total += idf[q.slot()];
    }
    return std::min(1.0, total / norm);
}

std::span<const Hit> Ranking::page(std::size_t page) const {
    const std::size_t lo = page * kPageSize;
    if (page > hits_.size() / kPageSize || lo >= hits_.size()) return {};
    return std::span<const Hit>(hits_).subspan(lo, std::min(kPageSize, hits_.size() - lo));
}

std::ptrdiff_t Ranking::rank_of(std::uint32_t screen) const {
    for (std::size_t i = 0; i < hits_.size(); ++i) {
        if (hits_[i].screen == screen) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

bool ranks_before(const Hit& a, const Hit& b, const CorpusIndex& index) {
    if (a.score != b.score) return a.score > b.score;
    return index.id_rank(a.screen) < index.id_rank(b.screen);
}

Ranking rank_screens(const SearchQuery& query, const CorpusIndex& index, const SearchOptions& options) {
    if (query.elements.empty()) throw Error(ErrorCode::EmptyQuery, "query has no elements");
    const auto& idf = index.idf();
    const double norm = query_normalizer(query, idf);
    const SlotMask wanted = query_mask(query);
    const std::size_t n = index.screen_count();

    std::vector<Hit> hits(n);
    parallel_for(n, worker_count(options, n), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> matrix;
        std::vector<std::size_t> columns;
        for (std::size_t s = lo; s < hi; ++s) {
            hits[s].screen = static_cast<std::uint32_t>(s);
            if (!(index.screen(s).mask & wanted)) continue;
            hits[s].score = score_elements(query, index.elements(s), idf, options.weights, norm, matrix, columns);
        }
    });
    std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) { return ranks_before(a, b, index); });
    return Ranking(std::move(hits));
}

std::vector<Hit> top_screens(const SearchQuery& query, const CorpusIndex& index, std::size_t n,
                             const SearchOptions& options) {
    if (query.elements.empty()) throw Error(ErrorCode::EmptyQuery, "query has no elements");
    const auto& idf = index.idf();
    const double norm = query_normalizer(query, idf);
    const double scale = std::max(1.0, options.weights.position + options.weights.shape);
    n = std::min(n, index.screen_count());
    if (n == 0) return {};

    std::vector<Hit> bounds(index.screen_count());
    for (std::size_t s = 0; s < bounds.size(); ++s) {
        bounds[s] = {static_cast<std::uint32_t>(s), scale * score_upper_bound(query, index.screen(s).mask, idf)};
    }
    std::sort(bounds.begin(), bounds.end(), [&](const Hit& a, const Hit& b) { return ranks_before(a, b, index); });

    auto worse = [&](const Hit& a, const Hit& b) { return ranks_before(a, b, index); };
    std::vector<Hit> heap;  // worst of the kept hits at the front
    heap.reserve(n + 1);
    std::vector<double> matrix;
    std::vector<std::size_t> columns;
    for (const auto& b : bounds) {
        if (heap.size() == n && b.score + 1e-12 < heap.front().score) break;
        if (heap.size() == n && b.score == 0.0 && heap.front().score == 0.0) break;
        Hit h{b.screen, 0.0};
        if (b.score > 0.0) h.score = score_elements(query, index.elements(b.screen), idf, options.weights, norm, matrix, columns);
        if (heap.size() < n) {
            heap.push_back(h);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (ranks_before(h, heap.front(), index)) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = h;
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
    std::sort(heap.begin(), heap.end(), [&](const Hit& a, const Hit& b) { return ranks_before(a, b, index); });
    return heap;
}

SearchPage search(const SearchQuery& query, const CorpusIndex& index, std::size_t page, const SearchOptions& options) {
    const Ranking ranking = rank_screens(query, index, options);
    SearchPage out;
    out.page = page;
    out.total = ranking.total();
    const auto hits = ranking.page(page);
    out.hits.assign(hits.begin(), hits.end());
    return out;
}

}  // namespace sketchsearch
