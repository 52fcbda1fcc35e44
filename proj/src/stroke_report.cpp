#include "sketchsearch/stroke_report.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

std::size_t stroke_bucket(std::size_t strokes) {
    if (strokes == 0) throw Error(ErrorCode::InvalidInput, "sketch has no strokes");
    return std::min(strokes, kStrokeBuckets) - 1;
}

std::string bucket_name(std::size_t bucket) {
    return bucket + 1 == kStrokeBuckets ? std::to_string(kStrokeBuckets) + "+" : std::to_string(bucket + 1);
}

std::optional<double> StrokeReportRow::mean(std::size_t bucket) const {
    if (count[bucket] == 0) return std::nullopt;
    return sum[bucket] / static_cast<double>(count[bucket]);
}

StrokeReport stroke_count_report(const std::vector<DoodleRecord>& records, const Recognizer& recognizer) {
    std::map<Category, StrokeReportRow> rows;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const auto where = "record " + std::to_string(i + 1);
        if (!rec.label) throw Error(ErrorCode::InvalidInput, where + " has no label");
        const auto c = parse_category(*rec.label);
        if (!c) throw Error(ErrorCode::InvalidInput, where + " has unknown label " + *rec.label);
        const auto bucket = stroke_bucket(rec.strokes.size());
        auto& row = rows[*c];
        row.category = *c;
        row.sum[bucket] += recognizer.classify(rec.strokes).confidence_of(*c);
        ++row.count[bucket];
    }
    StrokeReport report;
    report.sketches = records.size();
    for (auto& [c, row] : rows) report.rows.push_back(row);
    return report;
}

int percent(double mean) { return static_cast<int>(std::floor(mean * 100.0 + 0.5)); }

std::string format_report_table(const StrokeReport& report) {
    std::ostringstream out;
    out << "category";
    for (std::size_t b = 0; b < kStrokeBuckets; ++b) out << '\t' << bucket_name(b);
    out << '\n';
    for (const auto& row : report.rows) {
        out << name(row.category);
        for (std::size_t b = 0; b < kStrokeBuckets; ++b) {
            const auto m = row.mean(b);
            out << '\t';
            if (m) {
                out << percent(*m);
            } else {
                out << '-';
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string format_report_json(const StrokeReport& report) {
    nlohmann::ordered_json j;
    j["sketches"] = report.sketches;
    j["buckets"] = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < kStrokeBuckets; ++b) j["buckets"].push_back(bucket_name(b));
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["category"] = name(row.category);
        r["mean"] = nlohmann::ordered_json::array();
        r["count"] = nlohmann::ordered_json::array();
        for (std::size_t b = 0; b < kStrokeBuckets; ++b) {
            const auto m = row.mean(b);
            r["mean"].push_back(m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json(nullptr));
            r["count"].push_back(row.count[b]);
        }
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

}  // namespace sketchsearch
