#pragma once

#include <array>
#include <string>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/doodle_io.hpp"
#include "sketchsearch/prediction.hpp"
#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

inline constexpr std::size_t kCloudSize = 64;
inline constexpr double kDefaultTemperature = 0.05;

using PointCloud = std::array<Point, kCloudSize>;

/// Samples 64 points at uniform arc-length positions over the concatenated
/// strokes (pen-up gaps contribute no length). Input should already be
/// normalized and resampled.
PointCloud point_cloud(const StrokeSequence& sketch);

/// normalize -> resample -> point_cloud.
PointCloud sketch_to_cloud(const StrokeSequence& sketch, double spacing = kDefaultSpacing);

/// Mean of the 128 nearest-neighbour distances taken in both directions.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

struct TemplateRange {
    Category category;
    std::size_t first = 0;
    std::size_t count = 0;
};

class TemplateLibrary {
public:
    TemplateLibrary() = default;

    void add(Category c, const PointCloud& cloud);
    void add_sketch(Category c, const StrokeSequence& sketch);

    const std::vector<PointCloud>& templates(Category c) const { return by_category_[index_of(c)]; }
    std::size_t size() const;

    /// Throws InvalidInput when a category has no template.
    void check_complete() const;

    /// Templates come from a doodle file plus a manifest mapping each
    /// category to a contiguous record range.
    static TemplateLibrary from_records(const std::vector<DoodleRecord>& records,
                                        const std::vector<TemplateRange>& manifest);
    static TemplateLibrary load(const std::string& doodle_path, const std::string& manifest_path);

private:
    std::array<std::vector<PointCloud>, kCategoryCount> by_category_{};
};

std::vector<TemplateRange> read_template_manifest(const std::string& path);
void write_template_manifest(const std::string& path, const std::vector<TemplateRange>& manifest);
/// One range per run of consecutive records sharing a label.
std::vector<TemplateRange> manifest_from_labels(const std::vector<DoodleRecord>& records);

class TemplateRecognizer final : public Recognizer {
public:
    explicit TemplateRecognizer(TemplateLibrary library, double temperature = kDefaultTemperature,
                                double spacing = kDefaultSpacing);

    ElementPrediction classify(const StrokeSequence& sketch) const override;
    std::string_view backend() const override { return "template"; }

    /// Per-category minimum Chamfer distance for a prepared cloud.
    std::array<double, kCategoryCount> category_distances(const PointCloud& cloud) const;

    const TemplateLibrary& library() const { return library_; }
    double temperature() const { return temperature_; }

private:
    TemplateLibrary library_;
    double temperature_;
    double spacing_;
};

}  // namespace sketchsearch
