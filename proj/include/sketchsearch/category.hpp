#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sketchsearch {

/// The 23 sketchable primitives. The first seven come from QuickDraw, the
/// remaining sixteen from DoodleUINet. Enumerator order is alphabetical by
/// name, so comparing enum values is the same as comparing names.
enum class Category : std::uint8_t {
    Avatar,
    Back,
    Camera,
    Cancel,
    Checkbox,
    Cloud,
    DropDown,
    Envelope,
    Forward,
    House,
    JailWindow,
    LeftArrow,
    Menu,
    Play,
    Plus,
    Search,
    Setting,
    Share,
    Slider,
    Square,
    Squiggle,
    Star,
    Switch,
};

inline constexpr std::size_t kCategoryCount = 23;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::Avatar,   Category::Back,       Category::Camera,    Category::Cancel,
    Category::Checkbox, Category::Cloud,      Category::DropDown,  Category::Envelope,
    Category::Forward,  Category::House,      Category::JailWindow, Category::LeftArrow,
    Category::Menu,     Category::Play,       Category::Plus,      Category::Search,
    Category::Setting,  Category::Share,      Category::Slider,    Category::Square,
    Category::Squiggle, Category::Star,       Category::Switch,
};

std::string_view name(Category c);
std::optional<Category> parse_category(std::string_view name);

/// True for the seven categories sourced from QuickDraw.
bool is_quickdraw_category(Category c);

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

/// Query-side match slots: the 23 primitives plus the fused text button.
/// Slot i < 23 is the primitive with index i.
inline constexpr std::size_t kTextButtonSlot = kCategoryCount;
inline constexpr std::size_t kSlotCount = kCategoryCount + 1;
inline constexpr std::string_view kTextButtonName = "text_button";

std::string_view slot_name(std::size_t slot);
std::optional<std::size_t> parse_slot(std::string_view name);

}  // namespace sketchsearch
