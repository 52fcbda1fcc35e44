#include "sketchsearch/category.hpp"

namespace sketchsearch {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kNames = {
    "avatar",   "back",     "camera",   "cancel",      "checkbox", "cloud",
    "drop_down", "envelope", "forward",  "house",       "jail_window", "left_arrow",
    "menu",     "play",     "plus",     "search",      "setting",  "share",
    "slider",   "square",   "squiggle", "star",        "switch",
};

}  // namespace

std::string_view name(Category c) { return kNames[index_of(c)]; }

std::optional<Category> parse_category(std::string_view text) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        if (kNames[i] == text) return static_cast<Category>(i);
    }
    return std::nullopt;
}

bool is_quickdraw_category(Category c) {
    switch (c) {
        case Category::Camera:
        case Category::Cloud:
        case Category::Envelope:
        case Category::House:
        case Category::JailWindow:
        case Category::Square:
        case Category::Star:
            return true;
        default:
            return false;
    }
}

std::string_view slot_name(std::size_t slot) {
    if (slot == kTextButtonSlot) return kTextButtonName;
    return kNames.at(slot);
}

std::optional<std::size_t> parse_slot(std::string_view text) {
    if (text == kTextButtonName) return kTextButtonSlot;
    if (auto c = parse_category(text)) return index_of(*c);
    return std::nullopt;
}

}  // namespace sketchsearch
