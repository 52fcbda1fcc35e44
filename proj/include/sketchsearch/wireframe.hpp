#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchsearch/synthetic_corpus.hpp"

namespace sketchsearch {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major RGB
};

/// Flat wireframe of a generated screen: one colour per component kind,
/// hidden nodes left out.
RgbImage render_wireframe(const SyntheticScreen& screen, int width, int height);

/// 8-bit RGB PNG.
std::string encode_png(const RgbImage& image);

}  // namespace sketchsearch
