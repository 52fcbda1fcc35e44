#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/corpus.hpp"
#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

/// Logical canvas size. Portrait, close to the 1440x2560 aspect of the corpus.
struct CanvasDims {
    double width = 450.0;
    double height = 800.0;
};

inline constexpr double kFusionContainment = 0.9;

enum class Compound { TextButton };

struct PlacedElement {
    Category category = Category::Square;
    BBox bbox;  // canvas units
    StrokeSequence strokes;

    friend bool operator==(const PlacedElement&, const PlacedElement&) = default;
};

struct QueryElement {
    Category category = Category::Square;
    BBox bbox;  // normalized to [0,1]
    std::optional<Compound> compound;

    /// Match slot used for scoring: text_button for fused elements, else the category.
    std::size_t slot() const { return compound ? kTextButtonSlot : index_of(category); }
};

struct SearchQuery {
    std::vector<QueryElement> elements;
};

/// Tight bounding box of a sketch as a centre/size box.
BBox tight_bbox(const StrokeSequence& strokes);

/// Fraction of `inner`'s area that lies inside `outer` (clamped extents).
double containment(const BBox& inner, const BBox& outer);

/// Divides by the canvas size, applies text-button fusion and clamps
/// extents. Throws EmptyQuery for an empty list.
SearchQuery build_query(const std::vector<PlacedElement>& committed, const CanvasDims& dims = {});

enum class EditOutcome {
    Applied,
    NothingToUndo,
    NothingToRedo,
    NothingToRemove,
};

/// One user's drawing state: strokes of the element in progress, committed
/// elements and the stroke redo stack.
class CanvasState {
public:
    explicit CanvasState(CanvasDims dims = {}) : dims_(dims) {}

    /// Points are clamped onto the canvas. Clears the redo stack.
    void add_stroke(Stroke stroke);
    EditOutcome undo_stroke();
    EditOutcome redo_stroke();
    /// Drops the newest committed element; its strokes are discarded.
    EditOutcome remove_last_icon();

    /// Throws InvalidState when no strokes are in progress.
    const PlacedElement& commit_element(Category chosen);

    SearchQuery build_query() const { return sketchsearch::build_query(committed_, dims_); }

    const CanvasDims& dims() const { return dims_; }
    const StrokeSequence& current_strokes() const { return current_; }
    const std::vector<Stroke>& redo_stack() const { return redo_; }
    const std::vector<PlacedElement>& committed() const { return committed_; }

    friend bool operator==(const CanvasState& a, const CanvasState& b);

private:
    CanvasDims dims_;
    std::vector<PlacedElement> committed_;
    StrokeSequence current_;
    std::vector<Stroke> redo_;
};

/// Committed elements plus an optional target screen; used by the
/// evaluation harness. Stored as one JSON object per line.
struct SessionSnapshot {
    CanvasDims canvas;
    std::vector<PlacedElement> elements;
    std::optional<std::string> target;
};

std::string format_snapshot(const SessionSnapshot& snapshot);
SessionSnapshot parse_snapshot(const std::string& line);
std::vector<SessionSnapshot> read_snapshot_file(const std::string& path);

}  // namespace sketchsearch
