#include "sketchsearch/query.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

BBox tight_bbox(const StrokeSequence& strokes) {
    const Bounds b = bounds_of(strokes);
    return {(b.min_x + b.max_x) / 2.0, (b.min_y + b.max_y) / 2.0, b.width(), b.height()};
}

double containment(const BBox& inner, const BBox& outer) {
    const double iw = std::max(inner.w, kMinExtent);
    const double ih = std::max(inner.h, kMinExtent);
    const double ow = std::max(outer.w, kMinExtent);
    const double oh = std::max(outer.h, kMinExtent);
    const double x0 = std::max(inner.cx - iw / 2, outer.cx - ow / 2);
    const double x1 = std::min(inner.cx + iw / 2, outer.cx + ow / 2);
    const double y0 = std::max(inner.cy - ih / 2, outer.cy - oh / 2);
    const double y1 = std::min(inner.cy + ih / 2, outer.cy + oh / 2);
    if (x1 <= x0 || y1 <= y0) return 0.0;
    return ((x1 - x0) * (y1 - y0)) / (iw * ih);
}

SearchQuery build_query(const std::vector<PlacedElement>& committed, const CanvasDims& dims) {
    if (committed.empty()) throw Error(ErrorCode::EmptyQuery, "query has no committed elements");

    std::vector<BBox> boxes;
    boxes.reserve(committed.size());
    for (const auto& el : committed) {
        BBox b{el.bbox.cx / dims.width, el.bbox.cy / dims.height, el.bbox.w / dims.width, el.bbox.h / dims.height};
        b.cx = std::clamp(b.cx, 0.0, 1.0);
        b.cy = std::clamp(b.cy, 0.0, 1.0);
        b.w = std::clamp(b.w, kMinExtent, 1.0);
        b.h = std::clamp(b.h, kMinExtent, 1.0);
        boxes.push_back(b);
    }

    // (containment, squiggle, square): best containment first, then earlier commits.
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t q = 0; q < committed.size(); ++q) {
        if (committed[q].category != Category::Squiggle) continue;
        for (std::size_t s = 0; s < committed.size(); ++s) {
            if (committed[s].category != Category::Square) continue;
            const double c = containment(boxes[q], boxes[s]);
            if (c >= kFusionContainment) pairs.emplace_back(c, q, s);
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<char> fused_squiggle(committed.size(), 0);
    std::vector<char> fused_square(committed.size(), 0);
    for (const auto& [c, q, s] : pairs) {
        if (fused_squiggle[q] || fused_square[s]) continue;
        fused_squiggle[q] = 1;
        fused_square[s] = 1;
    }

    SearchQuery query;
    for (std::size_t i = 0; i < committed.size(); ++i) {
        if (fused_squiggle[i]) continue;
        QueryElement el{committed[i].category, boxes[i], std::nullopt};
        if (fused_square[i]) el.compound = Compound::TextButton;
        query.elements.push_back(el);
    }
    return query;
}

void CanvasState::add_stroke(Stroke stroke) {
    if (stroke.points.empty()) throw Error(ErrorCode::InvalidInput, "stroke has no points");
    for (auto& p : stroke.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorCode::InvalidInput, "stroke coordinate is not finite");
        p.x = std::clamp(p.x, 0.0, dims_.width);
        p.y = std::clamp(p.y, 0.0, dims_.height);
    }
    current_.push_back(std::move(stroke));
    redo_.clear();
}

EditOutcome CanvasState::undo_stroke() {
    if (current_.empty()) return EditOutcome::NothingToUndo;
    redo_.push_back(std::move(current_.back()));
    current_.pop_back();
    return EditOutcome::Applied;
}

EditOutcome CanvasState::redo_stroke() {
    if (redo_.empty()) return EditOutcome::NothingToRedo;
    current_.push_back(std::move(redo_.back()));
    redo_.pop_back();
    return EditOutcome::Applied;
}

EditOutcome CanvasState::remove_last_icon() {
    if (committed_.empty()) return EditOutcome::NothingToRemove;
    committed_.pop_back();
    return EditOutcome::Applied;
}

const PlacedElement& CanvasState::commit_element(Category chosen) {
    if (current_.empty()) throw Error(ErrorCode::InvalidState, "no strokes to commit");
    PlacedElement el{chosen, tight_bbox(current_), std::move(current_)};
    committed_.push_back(std::move(el));
    current_.clear();
    redo_.clear();
    return committed_.back();
}

bool operator==(const CanvasState& a, const CanvasState& b) {
    return a.dims_.width == b.dims_.width && a.dims_.height == b.dims_.height && a.committed_ == b.committed_ &&
           a.current_ == b.current_ && a.redo_ == b.redo_;
}

std::string format_snapshot(const SessionSnapshot& snapshot) {
    nlohmann::ordered_json j;
    j["canvas"] = {snapshot.canvas.width, snapshot.canvas.height};
    if (snapshot.target) j["target"] = *snapshot.target;
    j["elements"] = nlohmann::ordered_json::array();
    for (const auto& el : snapshot.elements) {
        j["elements"].push_back({{"category", name(el.category)},
                                 {"bbox", {el.bbox.cx, el.bbox.cy, el.bbox.w, el.bbox.h}}});
    }
    return j.dump();
}

SessionSnapshot parse_snapshot(const std::string& line) {
    SessionSnapshot snap;
    try {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("canvas")) {
            const auto& c = j.at("canvas");
            snap.canvas = {c.at(0).get<double>(), c.at(1).get<double>()};
            if (!(snap.canvas.width > 0.0) || !(snap.canvas.height > 0.0)) {
                throw Error(ErrorCode::InvalidInput, "canvas dimensions must be positive");
            }
        }
        if (j.contains("target") && !j.at("target").is_null()) snap.target = j.at("target").get<std::string>();
        for (const auto& el : j.at("elements")) {
            const auto label = el.at("category").get<std::string>();
            const auto c = parse_category(label);
            if (!c) throw Error(ErrorCode::InvalidInput, "unknown category in snapshot: " + label);
            const auto& b = el.at("bbox");
            snap.elements.push_back({*c, {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                                          b.at(3).get<double>()}, {}});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed session snapshot: ") + e.what());
    }
    return snap;
}

std::vector<SessionSnapshot> read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open session file " + path);
    std::vector<SessionSnapshot> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_snapshot(line));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace sketchsearch
