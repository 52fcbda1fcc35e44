#include "sketchsearch/template_recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double nearest(const Point& p, const PointCloud& cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : cloud) {
        const double dx = p.x - q.x;
        const double dy = p.y - q.y;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

// Same accumulation order as chamfer_distance, but gives up once the running
// total can no longer beat `limit`. Returns +inf when abandoned.
double chamfer_bounded(const PointCloud& a, const PointCloud& b, double limit) {
    const double cutoff = limit * static_cast<double>(2 * kCloudSize);
    double forward = 0.0;
    for (const auto& p : a) {
        forward += nearest(p, b);
        if (forward > cutoff) return std::numeric_limits<double>::infinity();
    }
    double backward = 0.0;
    for (const auto& p : b) {
        backward += nearest(p, a);
        if (forward + backward > cutoff) return std::numeric_limits<double>::infinity();
    }
    return (forward + backward) / static_cast<double>(2 * kCloudSize);
}

}  // namespace

PointCloud point_cloud(const StrokeSequence& sketch) {
    validate(sketch);
    PointCloud cloud{};
    const double total = arc_length(sketch);
    if (total <= 0.0) {
        std::vector<Point> all;
        for (const auto& s : sketch) all.insert(all.end(), s.points.begin(), s.points.end());
        for (std::size_t i = 0; i < kCloudSize; ++i) cloud[i] = all[i % all.size()];
        return cloud;
    }

    const double step = total / static_cast<double>(kCloudSize - 1);
    std::size_t next = 0;
    double walked = 0.0;
    for (const auto& stroke : sketch) {
        const auto& pts = stroke.points;
        for (std::size_t i = 1; i < pts.size() && next < kCloudSize; ++i) {
            const double len = dist(pts[i - 1], pts[i]);
            if (len == 0.0) continue;
            while (next < kCloudSize && static_cast<double>(next) * step <= walked + len) {
                const double u = (static_cast<double>(next) * step - walked) / len;
                cloud[next++] = {pts[i - 1].x + u * (pts[i].x - pts[i - 1].x),
                                 pts[i - 1].y + u * (pts[i].y - pts[i - 1].y)};
            }
            walked += len;
        }
    }
    // Rounding can leave the final sample(s) just past the accumulated length.
    while (next < kCloudSize) cloud[next++] = sketch.back().points.back();
    return cloud;
}

PointCloud sketch_to_cloud(const StrokeSequence& sketch, double spacing) {
    return point_cloud(resample(normalize(sketch), spacing));
}

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
    double forward = 0.0;
    for (const auto& p : a) forward += nearest(p, b);
    double backward = 0.0;
    for (const auto& p : b) backward += nearest(p, a);
    return (forward + backward) / static_cast<double>(2 * kCloudSize);
}

void TemplateLibrary::add(Category c, const PointCloud& cloud) {
    for (const auto& p : cloud) {
        if (!(p.x >= -1e-9 && p.x <= 1.0 + 1e-9 && p.y >= -1e-9 && p.y <= 1.0 + 1e-9)) {
            throw Error(ErrorCode::InvalidInput, "template point outside the unit box");
        }
    }
    by_category_[index_of(c)].push_back(cloud);
}

void TemplateLibrary::add_sketch(Category c, const StrokeSequence& sketch) { add(c, sketch_to_cloud(sketch)); }

std::size_t TemplateLibrary::size() const {
    std::size_t n = 0;
    for (const auto& v : by_category_) n += v.size();
    return n;
}

void TemplateLibrary::check_complete() const {
    for (auto c : kAllCategories) {
        if (templates(c).empty()) {
            throw Error(ErrorCode::InvalidInput, "template library has no template for " + std::string(name(c)));
        }
    }
}

TemplateLibrary TemplateLibrary::from_records(const std::vector<DoodleRecord>& records,
                                              const std::vector<TemplateRange>& manifest) {
    TemplateLibrary lib;
    for (const auto& range : manifest) {
        if (range.first + range.count > records.size()) {
            throw Error(ErrorCode::InvalidInput, "template manifest range for " + std::string(name(range.category)) +
                                                     " runs past the end of the doodle file");
        }
        for (std::size_t i = range.first; i < range.first + range.count; ++i) {
            lib.add_sketch(range.category, records[i].strokes);
        }
    }
    lib.check_complete();
    return lib;
}

TemplateLibrary TemplateLibrary::load(const std::string& doodle_path, const std::string& manifest_path) {
    return from_records(read_doodle_file(doodle_path), read_template_manifest(manifest_path));
}

std::vector<TemplateRange> read_template_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open template manifest " + path);
    nlohmann::json j;
    try {
        in >> j;
        std::vector<TemplateRange> out;
        for (const auto& r : j.at("records")) {
            const auto label = r.at("category").get<std::string>();
            const auto c = parse_category(label);
            if (!c) throw Error(ErrorCode::InvalidInput, "unknown category in template manifest: " + label);
            out.push_back({*c, r.at("first").get<std::size_t>(), r.at("count").get<std::size_t>()});
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed template manifest: ") + e.what());
    }
}

std::vector<TemplateRange> manifest_from_labels(const std::vector<DoodleRecord>& records) {
    std::vector<TemplateRange> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& label = records[i].label;
        const auto c = label ? parse_category(*label) : std::nullopt;
        if (!c) throw Error(ErrorCode::InvalidInput, "template record " + std::to_string(i + 1) + " has no known label");
        if (!out.empty() && out.back().category == *c && out.back().first + out.back().count == i) {
            ++out.back().count;
        } else {
            out.push_back({*c, i, 1});
        }
    }
    return out;
}

void write_template_manifest(const std::string& path, const std::vector<TemplateRange>& manifest) {
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const auto& r : manifest) {
        j["records"].push_back({{"category", name(r.category)}, {"first", r.first}, {"count", r.count}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write template manifest " + path);
    out << j.dump(2) << '\n';
}

TemplateRecognizer::TemplateRecognizer(TemplateLibrary library, double temperature, double spacing)
    : library_(std::move(library)), temperature_(temperature), spacing_(spacing) {
    if (!(temperature_ > 0.0)) throw Error(ErrorCode::InvalidInput, "temperature must be positive");
    library_.check_complete();
}

std::array<double, kCategoryCount> TemplateRecognizer::category_distances(const PointCloud& cloud) const {
    std::array<double, kCategoryCount> out{};
    for (auto c : kAllCategories) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : library_.templates(c)) best = std::min(best, chamfer_bounded(cloud, t, best));
        out[index_of(c)] = best;
    }
    return out;
}

ElementPrediction TemplateRecognizer::classify(const StrokeSequence& sketch) const {
    const auto distances = category_distances(sketch_to_cloud(sketch, spacing_));
    std::array<double, kCategoryCount> logits{};
    for (std::size_t i = 0; i < kCategoryCount; ++i) logits[i] = -distances[i] / temperature_;
    return make_prediction(softmax(logits));
}

}  // namespace sketchsearch
