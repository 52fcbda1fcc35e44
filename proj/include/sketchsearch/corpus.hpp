#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/category_mapping.hpp"

namespace sketchsearch {

inline constexpr double kMinExtent = 1e-3;

/// Centre/size box. Corpus boxes are normalized to the screen, query boxes
/// to the canvas; both live in [0,1].
struct BBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const BBox&, const BBox&) = default;
};

struct ScreenElement {
    std::string label;
    BBox bbox;
    bool visible = true;
};

struct ScreenDocument {
    std::string id;
    std::string source_app;
    std::vector<ScreenElement> elements;
};

/// Parses one hierarchy file (JSON; see docs/formats.md). Returns every
/// labelled node, visible or not, with its box normalized to the screen.
/// Throws InvalidInput on malformed content.
ScreenDocument parse_hierarchy(const std::string& json_text, const std::string& fallback_id);

/// Corner box in pixels -> normalized centre box, clipped to the screen and
/// with width/height clamped to at least kMinExtent.
BBox normalize_bounds(double x1, double y1, double x2, double y2, double screen_w, double screen_h);

struct IndexedElement {
    std::uint32_t label = 0;  // into CorpusIndex::labels()
    SlotMask mask = 0;
    BBox bbox;
};

struct IndexedScreen {
    std::string id;
    std::string source_app;
    std::uint32_t first = 0;  // into CorpusIndex::elements()
    std::uint32_t count = 0;
    SlotMask mask = 0;  // union of element masks
};

struct BuildStats {
    std::uint64_t files_seen = 0;
    std::uint64_t malformed_files = 0;
    std::uint64_t invisible_elements = 0;
    std::uint64_t unmapped_elements = 0;

    friend bool operator==(const BuildStats&, const BuildStats&) = default;
};

inline constexpr std::uint32_t kIndexVersion = 1;

/// Query-ready corpus: visible, mappable elements per screen, per-slot
/// postings and idf weights. Immutable once built.
class CorpusIndex {
public:
    CorpusIndex() = default;

    /// Drops invisible and unmappable elements and counts them in the stats.
    /// Throws EmptyCorpus when `screens` is empty.
    static CorpusIndex build(const std::vector<ScreenDocument>& screens, const CategoryMapping& mapping,
                             BuildStats stats = {});

    std::size_t screen_count() const { return screens_.size(); }
    std::size_t element_count() const { return elements_.size(); }
    const std::vector<IndexedScreen>& screens() const { return screens_; }
    const IndexedScreen& screen(std::size_t i) const { return screens_[i]; }
    std::span<const IndexedElement> elements(std::size_t screen) const;
    const std::vector<IndexedElement>& elements() const { return elements_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::uint32_t>& posting(std::size_t slot) const { return postings_.at(slot); }
    const std::array<double, kSlotCount>& idf() const { return idf_; }
    double idf(std::size_t slot) const { return idf_.at(slot); }
    const BuildStats& stats() const { return stats_; }
    std::uint32_t version() const { return kIndexVersion; }

    /// Position of each screen when all ids are sorted ascending.
    std::uint32_t id_rank(std::size_t screen) const { return id_rank_[screen]; }
    /// Screen index by id, or -1.
    std::ptrdiff_t find(const std::string& id) const;

    /// Reconstructs the screen document as stored (labels and boxes).
    ScreenDocument document(std::size_t screen) const;

    std::vector<std::uint8_t> serialize() const;
    static CorpusIndex deserialize(const std::vector<std::uint8_t>& bytes);

    /// Same screens, postings, idf bits and stats.
    friend bool operator==(const CorpusIndex& a, const CorpusIndex& b);

private:
    void finish();  // postings, idf, id ranks

    std::vector<IndexedScreen> screens_;
    std::vector<IndexedElement> elements_;
    std::vector<std::string> labels_;
    std::array<std::vector<std::uint32_t>, kSlotCount> postings_{};
    std::array<double, kSlotCount> idf_{};
    std::vector<std::uint32_t> id_rank_;
    std::vector<std::uint32_t> by_id_;
    BuildStats stats_;
};

/// ln(N / (1 + n)) + 1.
double idf_weight(std::size_t screens, std::size_t screens_with_category);

/// Reads every *.json hierarchy file in `dir` (sorted by file name), skipping
/// malformed ones. Throws Io for an unreadable directory and EmptyCorpus when
/// nothing valid remains.
CorpusIndex ingest(const std::filesystem::path& dir, const CategoryMapping& mapping);

void save_index(const CorpusIndex& index, const std::filesystem::path& path);
CorpusIndex load_index(const std::filesystem::path& path);

}  // namespace sketchsearch
