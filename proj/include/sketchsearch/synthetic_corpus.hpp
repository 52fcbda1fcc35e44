#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sketchsearch/category_mapping.hpp"
#include "sketchsearch/corpus.hpp"
#include "sketchsearch/query.hpp"
#include "sketchsearch/random.hpp"

namespace sketchsearch {

/// One view node of a generated screen, in pixels of a 1440x2560 screen.
struct SyntheticNode {
    std::string component;   // componentLabel, or empty for a plain layout node
    std::string icon_class;  // only for component "Icon"
    std::string view_class = "android.widget.FrameLayout";
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool visible = true;
    std::vector<SyntheticNode> children;
};

struct SyntheticScreen {
    std::string id;
    std::string app;
    SyntheticNode root;
};

inline constexpr int kSyntheticWidth = 1440;
inline constexpr int kSyntheticHeight = 2560;

/// A plausible app screen: toolbar, one of several body layouts, optional
/// bottom navigation, plus the unmapped and hidden clutter real dumps carry.
SyntheticScreen synthesize_screen(std::uint64_t seed, const std::string& id);

/// Screens "s00000", "s00001", ... with seeds seed, seed+1, ...
std::vector<SyntheticScreen> synthesize_screens(std::size_t count, std::uint64_t seed);

/// The hierarchy file contents; parse_hierarchy of it equals to_document.
std::string to_hierarchy_json(const SyntheticScreen& screen);
ScreenDocument to_document(const SyntheticScreen& screen);

/// Writes <dir>/<id>.json for every screen.
void write_hierarchies(const std::vector<SyntheticScreen>& screens, const std::filesystem::path& dir);

struct QueryDerivation {
    std::size_t min_elements = 4;
    std::size_t max_elements = 8;
    double center_jitter = 0.05;  // fraction of the canvas side
    double size_jitter = 0.10;    // relative
    CanvasDims canvas;
};

/// The category a user would draw for a corpus label: an exact mapping
/// entry wins over a wildcard. Empty for labels no primitive matches and
/// for "Text Button", which is drawn as a square with a squiggle inside.
std::optional<Category> drawn_category(const std::string& label, const CategoryMapping& mapping);

/// Picks visible, drawable elements of `screen` and re-draws them as a
/// session snapshot targeting it, with jittered boxes. Text buttons become
/// a square enclosing a squiggle.
SessionSnapshot derive_session(const ScreenDocument& screen, const CategoryMapping& mapping,
                               const QueryDerivation& options, Rng& rng);

}  // namespace sketchsearch
