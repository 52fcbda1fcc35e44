#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "sketchsearch/prediction.hpp"

namespace sketchsearch {

struct BenchOptions {
    std::size_t screens = 58000;
    std::uint64_t seed = 1;
    std::size_t queries = 20;
    std::size_t elements = 8;
    std::size_t sketches = 46;  // classification samples, cycling over the categories
    unsigned threads = 0;
};

struct LatencySummary {
    double mean_ms = 0.0;
    double p95_ms = 0.0;
    double max_ms = 0.0;
};

LatencySummary summarize(std::vector<double> ms);

struct BenchResult {
    std::size_t screens = 0;
    std::size_t elements = 0;
    double build_seconds = 0.0;
    std::size_t query_elements = 0;
    LatencySummary search;
    LatencySummary classify;
};

/// Builds a synthetic index in memory and times full searches with
/// `elements`-element queries drawn from corpus elements, plus per-sketch
/// classification of generated doodles.
BenchResult run_benchmark(const BenchOptions& options, const Recognizer& recognizer);

}  // namespace sketchsearch
