#include "sketchsearch/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "binary_io.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

using nlohmann::json;

constexpr char kIndexMagic[5] = {'P', 'S', 'D', 'X', '1'};
constexpr double kDefaultScreenWidth = 1440.0;
constexpr double kDefaultScreenHeight = 2560.0;

bool node_visible(const json& node) {
    if (auto it = node.find("visible"); it != node.end() && it->is_boolean()) return it->get<bool>();
    if (auto it = node.find("visible-to-user"); it != node.end() && it->is_boolean()) return it->get<bool>();
    if (auto it = node.find("visibility"); it != node.end() && it->is_string()) return it->get<std::string>() == "visible";
    return true;
}

std::string node_label(const json& node) {
    if (auto it = node.find("componentLabel"); it != node.end() && it->is_string()) {
        auto label = it->get<std::string>();
        if (label == "Icon") {
            if (auto ic = node.find("iconClass"); ic != node.end() && ic->is_string()) return "icon:" + ic->get<std::string>();
        }
        return label;
    }
    if (auto it = node.find("class"); it != node.end() && it->is_string()) return it->get<std::string>();
    return {};
}

void walk(const json& node, double sw, double sh, bool parent_visible, std::vector<ScreenElement>& out, int depth) {
    if (depth > 256) throw Error(ErrorCode::InvalidInput, "hierarchy nesting is too deep");
    if (!node.is_object()) throw Error(ErrorCode::InvalidInput, "hierarchy node must be an object");
    const bool visible = parent_visible && node_visible(node);
    const std::string label = node_label(node);
    if (!label.empty()) {
        const auto& b = node.at("bounds");
        if (!b.is_array() || b.size() != 4) throw Error(ErrorCode::InvalidInput, "bounds must be [x1, y1, x2, y2]");
        const double x1 = b[0].get<double>();
        const double y1 = b[1].get<double>();
        const double x2 = b[2].get<double>();
        const double y2 = b[3].get<double>();
        if (!std::isfinite(x1) || !std::isfinite(y1) || !std::isfinite(x2) || !std::isfinite(y2)) {
            throw Error(ErrorCode::InvalidInput, "bounds must be finite");
        }
        out.push_back({label, normalize_bounds(x1, y1, x2, y2, sw, sh), visible});
    }
    if (auto it = node.find("children"); it != node.end()) {
        if (!it->is_array()) throw Error(ErrorCode::InvalidInput, "children must be a list");
        for (const auto& child : *it) {
            if (child.is_null()) continue;
            walk(child, sw, sh, visible, out, depth + 1);
        }
    }
}

}  // namespace

BBox normalize_bounds(double x1, double y1, double x2, double y2, double screen_w, double screen_h) {
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    x1 = std::clamp(x1, 0.0, screen_w);
    x2 = std::clamp(x2, 0.0, screen_w);
    y1 = std::clamp(y1, 0.0, screen_h);
    y2 = std::clamp(y2, 0.0, screen_h);
    BBox box;
    box.cx = (x1 + x2) / 2.0 / screen_w;
    box.cy = (y1 + y2) / 2.0 / screen_h;
    box.w = std::max((x2 - x1) / screen_w, kMinExtent);
    box.h = std::max((y2 - y1) / screen_h, kMinExtent);
    return box;
}

ScreenDocument parse_hierarchy(const std::string& json_text, const std::string& fallback_id) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("hierarchy is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "hierarchy must be an object");
    ScreenDocument doc;
    try {
        doc.id = j.value("id", fallback_id);
        doc.source_app = j.value("app", std::string{});
        const double sw = j.value("width", kDefaultScreenWidth);
        const double sh = j.value("height", kDefaultScreenHeight);
        if (!(sw > 0.0) || !(sh > 0.0)) throw Error(ErrorCode::InvalidInput, "screen dimensions must be positive");
        const json& root = j.contains("root") ? j.at("root") : j;
        walk(root, sw, sh, true, doc.elements, 0);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed hierarchy: ") + e.what());
    }
    if (doc.id.empty()) throw Error(ErrorCode::InvalidInput, "screen id is empty");
    return doc;
}

double idf_weight(std::size_t screens, std::size_t screens_with_category) {
    return std::log(static_cast<double>(screens) / (1.0 + static_cast<double>(screens_with_category))) + 1.0;
}

CorpusIndex CorpusIndex::build(const std::vector<ScreenDocument>& screens, const CategoryMapping& mapping,
                               BuildStats stats) {
    if (screens.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus contains no valid screens");
    CorpusIndex index;
    index.stats_ = stats;
    std::unordered_map<std::string, std::uint32_t> label_ids;
    std::unordered_map<std::string, bool> seen_ids;
    for (const auto& doc : screens) {
        if (!seen_ids.emplace(doc.id, true).second) {
            throw Error(ErrorCode::InvalidInput, "duplicate screen id " + doc.id);
        }
        IndexedScreen screen{doc.id, doc.source_app, static_cast<std::uint32_t>(index.elements_.size()), 0, 0};
        for (const auto& el : doc.elements) {
            if (!el.visible) {
                ++index.stats_.invisible_elements;
                continue;
            }
            const SlotMask mask = mapping.map(el.label);
            if (mask == 0) {
                ++index.stats_.unmapped_elements;
                continue;
            }
            auto [it, inserted] = label_ids.emplace(el.label, static_cast<std::uint32_t>(index.labels_.size()));
            if (inserted) index.labels_.push_back(el.label);
            BBox box = el.bbox;
            box.w = std::max(box.w, kMinExtent);
            box.h = std::max(box.h, kMinExtent);
            index.elements_.push_back({it->second, mask, box});
            screen.mask |= mask;
            ++screen.count;
        }
        index.screens_.push_back(std::move(screen));
    }
    index.finish();
    return index;
}

void CorpusIndex::finish() {
    for (auto& p : postings_) p.clear();
    for (std::uint32_t s = 0; s < screens_.size(); ++s) {
        for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
            if (screens_[s].mask & slot_bit(slot)) postings_[slot].push_back(s);
        }
    }
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) idf_[slot] = idf_weight(screens_.size(), postings_[slot].size());

    by_id_.resize(screens_.size());
    std::iota(by_id_.begin(), by_id_.end(), 0u);
    std::sort(by_id_.begin(), by_id_.end(), [this](std::uint32_t a, std::uint32_t b) { return screens_[a].id < screens_[b].id; });
    id_rank_.resize(screens_.size());
    for (std::uint32_t r = 0; r < by_id_.size(); ++r) id_rank_[by_id_[r]] = r;
}

std::span<const IndexedElement> CorpusIndex::elements(std::size_t screen) const {
    const auto& s = screens_[screen];
    return {elements_.data() + s.first, s.count};
}

std::ptrdiff_t CorpusIndex::find(const std::string& id) const {
    auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id,
                               [this](std::uint32_t s, const std::string& key) { return screens_[s].id < key; });
    if (it == by_id_.end() || screens_[*it].id != id) return -1;
    return static_cast<std::ptrdiff_t>(*it);
}

ScreenDocument CorpusIndex::document(std::size_t screen) const {
    ScreenDocument doc{screens_[screen].id, screens_[screen].source_app, {}};
    for (const auto& el : elements(screen)) doc.elements.push_back({labels_[el.label], el.bbox, true});
    return doc;
}

bool operator==(const CorpusIndex& a, const CorpusIndex& b) {
    if (a.screens_.size() != b.screens_.size() || a.elements_.size() != b.elements_.size()) return false;
    if (a.labels_ != b.labels_ || a.postings_ != b.postings_ || !(a.stats_ == b.stats_)) return false;
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        if (std::memcmp(&a.idf_[i], &b.idf_[i], sizeof(double)) != 0) return false;
    }
    for (std::size_t i = 0; i < a.screens_.size(); ++i) {
        const auto& x = a.screens_[i];
        const auto& y = b.screens_[i];
        if (x.id != y.id || x.source_app != y.source_app || x.first != y.first || x.count != y.count ||
            x.mask != y.mask) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.elements_.size(); ++i) {
        const auto& x = a.elements_[i];
        const auto& y = b.elements_[i];
        if (x.label != y.label || x.mask != y.mask || !(x.bbox == y.bbox)) return false;
    }
    return true;
}

std::vector<std::uint8_t> CorpusIndex::serialize() const {
    detail::ByteWriter w;
    w.raw(kIndexMagic, sizeof kIndexMagic);
    w.u64(stats_.files_seen);
    w.u64(stats_.malformed_files);
    w.u64(stats_.invisible_elements);
    w.u64(stats_.unmapped_elements);
    w.u32(static_cast<std::uint32_t>(kSlotCount));
    w.u32(static_cast<std::uint32_t>(labels_.size()));
    for (const auto& l : labels_) w.str(l);
    w.u32(static_cast<std::uint32_t>(screens_.size()));
    for (std::size_t s = 0; s < screens_.size(); ++s) {
        w.str(screens_[s].id);
        w.str(screens_[s].source_app);
        w.u32(screens_[s].count);
        for (const auto& el : elements(s)) {
            w.u32(el.label);
            w.u32(el.mask);
            w.f64(el.bbox.cx);
            w.f64(el.bbox.cy);
            w.f64(el.bbox.w);
            w.f64(el.bbox.h);
        }
    }
    for (const auto& p : postings_) {
        w.u32(static_cast<std::uint32_t>(p.size()));
        for (auto s : p) w.u32(s);
    }
    for (double v : idf_) w.f64(v);
    const auto& bytes = w.bytes();
    w.u64(detail::fnv1a(bytes.data(), bytes.size()));
    return w.take();
}

CorpusIndex CorpusIndex::deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < sizeof kIndexMagic) throw Error(ErrorCode::IndexFormat, "index file is truncated");
    const std::string magic(reinterpret_cast<const char*>(bytes.data()), sizeof kIndexMagic);
    if (magic != std::string(kIndexMagic, sizeof kIndexMagic)) {
        if (magic.rfind("PSDX", 0) == 0) {
            throw Error(ErrorCode::VersionMismatch,
                        "index file version " + magic + " cannot be read by this " +
                            std::string(kIndexMagic, sizeof kIndexMagic) + " reader");
        }
        throw Error(ErrorCode::IndexFormat, "not an index file (bad magic)");
    }
    if (bytes.size() < sizeof kIndexMagic + 8) throw Error(ErrorCode::IndexFormat, "index file is truncated");
    const std::size_t body = bytes.size() - 8;

    detail::ByteReader tail(bytes.data() + body, 8, ErrorCode::IndexFormat, "index file");
    if (tail.u64() != detail::fnv1a(bytes.data(), body)) {
        throw Error(ErrorCode::IndexFormat, "index file checksum mismatch (truncated or corrupt)");
    }

    detail::ByteReader r(bytes.data(), body, ErrorCode::IndexFormat, "index file");
    r.text(sizeof kIndexMagic);
    CorpusIndex index;
    index.stats_.files_seen = r.u64();
    index.stats_.malformed_files = r.u64();
    index.stats_.invisible_elements = r.u64();
    index.stats_.unmapped_elements = r.u64();
    if (r.u32() != kSlotCount) r.fail("slot count mismatch");
    const std::uint32_t label_count = r.u32();
    r.expect_items(label_count, 4);
    for (std::uint32_t i = 0; i < label_count; ++i) index.labels_.push_back(r.str());
    const std::uint32_t screen_count = r.u32();
    if (screen_count == 0) r.fail("index holds no screens");
    r.expect_items(screen_count, 12);
    for (std::uint32_t s = 0; s < screen_count; ++s) {
        IndexedScreen screen;
        screen.id = r.str();
        screen.source_app = r.str();
        screen.count = r.u32();
        screen.first = static_cast<std::uint32_t>(index.elements_.size());
        r.expect_items(screen.count, 40);
        for (std::uint32_t e = 0; e < screen.count; ++e) {
            IndexedElement el;
            el.label = r.u32();
            el.mask = r.u32();
            el.bbox.cx = r.f64();
            el.bbox.cy = r.f64();
            el.bbox.w = r.f64();
            el.bbox.h = r.f64();
            if (el.label >= label_count) r.fail("element label out of range");
            if (el.mask == 0 || el.mask >= slot_bit(kSlotCount)) r.fail("element slot mask out of range");
            screen.mask |= el.mask;
            index.elements_.push_back(el);
        }
        index.screens_.push_back(std::move(screen));
    }
    std::array<std::vector<std::uint32_t>, kSlotCount> stored;
    for (auto& p : stored) {
        const std::uint32_t n = r.u32();
        r.expect_items(n, 4);
        p.resize(n);
        for (auto& s : p) s = r.u32();
    }
    std::array<double, kSlotCount> stored_idf{};
    for (auto& v : stored_idf) v = r.f64();
    if (!r.at_end()) r.fail("trailing bytes");

    index.finish();
    if (stored != index.postings_) r.fail("postings disagree with screen contents");
    index.idf_ = stored_idf;
    return index;
}

CorpusIndex ingest(const std::filesystem::path& dir, const CategoryMapping& mapping) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::Io, "corpus directory not readable: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
    }
    if (ec) throw Error(ErrorCode::Io, "cannot list corpus directory " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    BuildStats stats;
    std::vector<ScreenDocument> docs;
    std::unordered_map<std::string, bool> ids;
    for (const auto& f : files) {
        ++stats.files_seen;
        std::ifstream in(f, std::ios::binary);
        if (!in) {
            ++stats.malformed_files;
            continue;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            auto doc = parse_hierarchy(buf.str(), f.stem().string());
            if (!ids.emplace(doc.id, true).second) {
                ++stats.malformed_files;
                continue;
            }
            docs.push_back(std::move(doc));
        } catch (const Error&) {
            ++stats.malformed_files;
        }
    }
    if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no valid screens in " + dir.string());
    return CorpusIndex::build(docs, mapping, stats);
}

void save_index(const CorpusIndex& index, const std::filesystem::path& path) {
    const auto bytes = index.serialize();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write index file " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to index file " + path.string());
}

CorpusIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open index file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return CorpusIndex::deserialize(bytes);
}

}  // namespace sketchsearch
