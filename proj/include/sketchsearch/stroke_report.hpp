#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/doodle_io.hpp"
#include "sketchsearch/prediction.hpp"

namespace sketchsearch {

/// Stroke-count columns 1..8 and a final "9+" column.
inline constexpr std::size_t kStrokeBuckets = 9;

std::size_t stroke_bucket(std::size_t strokes);
std::string bucket_name(std::size_t bucket);

struct StrokeReportRow {
    Category category = Category::Avatar;
    std::array<double, kStrokeBuckets> sum{};
    std::array<std::size_t, kStrokeBuckets> count{};

    std::optional<double> mean(std::size_t bucket) const;
};

/// Mean confidence given to the true category, per category and total
/// stroke count. Rows exist for the categories present in the input, in
/// name order.
struct StrokeReport {
    std::vector<StrokeReportRow> rows;
    std::size_t sketches = 0;
};

/// Every record must carry a known category label (InvalidInput otherwise).
StrokeReport stroke_count_report(const std::vector<DoodleRecord>& records, const Recognizer& recognizer);

/// Mean as a whole percentage, halves rounded up.
int percent(double mean);

/// Tab-separated: header "category 1 .. 8 9+", one row per category,
/// "-" for empty cells.
std::string format_report_table(const StrokeReport& report);
std::string format_report_json(const StrokeReport& report);

}  // namespace sketchsearch
