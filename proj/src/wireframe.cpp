#include "sketchsearch/wireframe.hpp"

#include <algorithm>
#include <array>

#include <zlib.h>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

using Rgb = std::array<std::uint8_t, 3>;

Rgb colour_of(const SyntheticNode& n) {
    if (n.component == "Image") return {176, 190, 197};
    if (n.component == "Text") return {69, 90, 100};
    if (n.component == "Text Button") return {33, 150, 243};
    if (n.component == "Icon") return {255, 152, 0};
    if (n.component == "Toolbar" || n.component == "Bottom Navigation") return {63, 81, 181};
    if (n.component == "Input" || n.component == "Drop Down Menu") return {120, 144, 156};
    if (n.component == "Advertisement" || n.component == "Web View") return {224, 224, 224};
    if (n.component.empty()) return {250, 250, 250};
    return {0, 150, 136};
}

bool filled(const SyntheticNode& n) {
    return n.component == "Image" || n.component == "Text" || n.component == "Text Button" ||
           n.component == "Icon" || n.component == "Toolbar" || n.component == "Advertisement";
}

void paint(RgbImage& img, const SyntheticNode& n, double sx, double sy) {
    if (!n.visible) return;
    const int x1 = std::clamp(static_cast<int>(n.x1 * sx), 0, img.width - 1);
    const int x2 = std::clamp(static_cast<int>(n.x2 * sx), 0, img.width - 1);
    const int y1 = std::clamp(static_cast<int>(n.y1 * sy), 0, img.height - 1);
    const int y2 = std::clamp(static_cast<int>(n.y2 * sy), 0, img.height - 1);
    const Rgb c = colour_of(n);
    const bool fill = filled(n);
    for (int y = y1; y <= y2; ++y) {
        for (int x = x1; x <= x2; ++x) {
            if (!fill && y != y1 && y != y2 && x != x1 && x != x2) continue;
            std::copy(c.begin(), c.end(), img.pixels.begin() + 3 * (static_cast<std::size_t>(y) * img.width + x));
        }
    }
    for (const auto& child : n.children) paint(img, child, sx, sy);
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

void chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::string body = std::string(type, 4) + data;
    out += body;
    put_u32(out, static_cast<std::uint32_t>(
                     crc32(0, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

}  // namespace

RgbImage render_wireframe(const SyntheticScreen& screen, int width, int height) {
    if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidInput, "image size must be positive");
    RgbImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, 255)};
    paint(img, screen.root, static_cast<double>(width) / kSyntheticWidth, static_cast<double>(height) / kSyntheticHeight);
    return img;
}

std::string encode_png(const RgbImage& image) {
    std::string raw;
    raw.reserve(static_cast<std::size_t>(image.height) * (image.width * 3 + 1));
    for (int y = 0; y < image.height; ++y) {
        raw.push_back('\0');
        const auto* row = image.pixels.data() + static_cast<std::size_t>(y) * image.width * 3;
        raw.append(reinterpret_cast<const char*>(row), static_cast<std::size_t>(image.width) * 3);
    }
    uLongf size = compressBound(static_cast<uLong>(raw.size()));
    std::string packed(size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &size, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw Error(ErrorCode::Io, "PNG compression failed");
    }
    packed.resize(size);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string header;
    put_u32(header, static_cast<std::uint32_t>(image.width));
    put_u32(header, static_cast<std::uint32_t>(image.height));
    header += std::string("\x08\x02\x00\x00\x00", 5);
    chunk(out, "IHDR", header);
    chunk(out, "IDAT", packed);
    chunk(out, "IEND", {});
    return out;
}

}  // namespace sketchsearch
