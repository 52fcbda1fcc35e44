#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sketchsearch/category.hpp"

namespace sketchsearch {

/// Bit i set means "matches query slot i" (see kSlotCount).
using SlotMask = std::uint32_t;

constexpr SlotMask slot_bit(std::size_t slot) { return SlotMask{1} << slot; }

/// Which corpus labels each query slot matches. A pattern ending in '*'
/// matches every label with that prefix, so "icon:*" covers all icon classes.
/// Icon elements are labelled "icon:<class>".
class CategoryMapping {
public:
    CategoryMapping() = default;

    void add(std::size_t slot, std::string pattern);
    const std::vector<std::string>& patterns(std::size_t slot) const { return patterns_.at(slot); }

    /// Empty mask for unknown labels.
    SlotMask map(std::string_view label) const;

    static CategoryMapping from_json_text(const std::string& text);
    static CategoryMapping load(const std::string& path);
    std::string to_json_text() const;

    /// The shipped default table (also in data/category_mapping.json).
    static CategoryMapping defaults();

private:
    std::array<std::vector<std::string>, kSlotCount> patterns_{};
};

/// Slots whose match-set contains the label, in slot order.
std::vector<std::size_t> map_category(std::string_view label, const CategoryMapping& mapping);

}  // namespace sketchsearch
