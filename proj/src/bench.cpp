#include "sketchsearch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "sketchsearch/corpus.hpp"
#include "sketchsearch/doodle_synth.hpp"
#include "sketchsearch/error.hpp"
#include "sketchsearch/random.hpp"
#include "sketchsearch/search.hpp"
#include "sketchsearch/synthetic_corpus.hpp"

namespace sketchsearch {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

}  // namespace

LatencySummary summarize(std::vector<double> ms) {
    LatencySummary s;
    if (ms.empty()) return s;
    std::sort(ms.begin(), ms.end());
    s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
    s.p95_ms = ms[std::min(ms.size() - 1, static_cast<std::size_t>(0.95 * static_cast<double>(ms.size())))];
    s.max_ms = ms.back();
    return s;
}

BenchResult run_benchmark(const BenchOptions& options, const Recognizer& recognizer) {
    if (options.screens == 0) throw Error(ErrorCode::InvalidInput, "benchmark needs at least one screen");
    if (options.elements == 0) throw Error(ErrorCode::InvalidInput, "benchmark queries need at least one element");

    BenchResult result;
    auto t0 = Clock::now();
    std::vector<ScreenDocument> docs;
    docs.reserve(options.screens);
    for (std::size_t i = 0; i < options.screens; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "b%07zu", i);
        docs.push_back(to_document(synthesize_screen(options.seed + i, id)));
    }
    const auto index = CorpusIndex::build(docs, CategoryMapping::defaults());
    docs.clear();
    result.build_seconds = ms_since(t0) / 1000.0;
    result.screens = index.screen_count();
    result.elements = index.element_count();

    const SlotMask primitives = slot_bit(kCategoryCount) - 1;
    const SlotMask cloud = slot_bit(index_of(Category::Cloud));
    std::vector<std::uint32_t> drawable;
    for (std::uint32_t e = 0; e < index.elements().size(); ++e) {
        if (index.elements()[e].mask & primitives) drawable.push_back(e);
    }
    if (drawable.empty()) throw Error(ErrorCode::InvalidInput, "benchmark corpus has no drawable elements");

    Rng rng(options.seed ^ 0x5eedULL);
    SearchOptions so;
    so.threads = options.threads;
    std::vector<double> search_ms;
    for (std::size_t q = 0; q < options.queries; ++q) {
        SearchQuery query;
        for (std::size_t k = 0; k < options.elements; ++k) {
            const auto& el = index.elements()[drawable[static_cast<std::size_t>(
                rng.integer(0, static_cast<std::int64_t>(drawable.size()) - 1))]];
            SlotMask m = el.mask & primitives;
            if (m & ~cloud) m &= ~cloud;
            std::size_t slot = 0;
            while (!(m & slot_bit(slot))) ++slot;
            BBox b = el.bbox;
            b.cx = std::clamp(b.cx + rng.uniform(-0.05, 0.05), 0.0, 1.0);
            b.cy = std::clamp(b.cy + rng.uniform(-0.05, 0.05), 0.0, 1.0);
            query.elements.push_back({kAllCategories[slot], b, std::nullopt});
        }
        result.query_elements = query.elements.size();
        t0 = Clock::now();
        const auto page = search(query, index, 0, so);
        search_ms.push_back(ms_since(t0));
        if (page.total != index.screen_count()) throw Error(ErrorCode::InvalidState, "search lost screens");
    }
    result.search = summarize(std::move(search_ms));

    std::vector<double> classify_ms;
    for (std::size_t i = 0; i < options.sketches; ++i) {
        const auto sketch = synthesize_doodle(kAllCategories[i % kCategoryCount], options.seed + i);
        t0 = Clock::now();
        recognizer.classify(sketch);
        classify_ms.push_back(ms_since(t0));
    }
    result.classify = summarize(std::move(classify_ms));
    return result;
}

}  // namespace sketchsearch
