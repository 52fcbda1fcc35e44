#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/doodle_io.hpp"
#include "sketchsearch/random.hpp"
#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

/// Procedural doodles of each primitive, drawn in a roughly 100x100 canvas
/// frame. Each seed gives a different hand: proportions, slant, wobble and
/// the way the figure is split into strokes all vary.
StrokeSequence synthesize_doodle(Category c, std::uint64_t seed);

/// Normalizes, moves every point by up to `jitter` (unit-box units) in each
/// axis, then applies a random translation and uniform scale.
StrokeSequence perturb_doodle(const StrokeSequence& sketch, double jitter, Rng& rng);

/// `per_category` variants for every category, seeds first_seed.. in order.
/// Records are grouped by category in enum order.
std::vector<DoodleRecord> synthesize_library_records(std::size_t per_category, std::uint64_t first_seed);
std::vector<DoodleRecord> synthesize_library_records(const std::array<std::size_t, kCategoryCount>& counts,
                                                     std::uint64_t first_seed);

}  // namespace sketchsearch
