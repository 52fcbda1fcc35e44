#include "sketchsearch/category_mapping.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

bool matches(std::string_view pattern, std::string_view label) {
    if (!pattern.empty() && pattern.back() == '*') {
        const auto prefix = pattern.substr(0, pattern.size() - 1);
        return label.size() > prefix.size() && label.substr(0, prefix.size()) == prefix;
    }
    return pattern == label;
}

}  // namespace

void CategoryMapping::add(std::size_t slot, std::string pattern) { patterns_.at(slot).push_back(std::move(pattern)); }

SlotMask CategoryMapping::map(std::string_view label) const {
    SlotMask mask = 0;
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
        for (const auto& p : patterns_[slot]) {
            if (matches(p, label)) {
                mask |= slot_bit(slot);
                break;
            }
        }
    }
    return mask;
}

CategoryMapping CategoryMapping::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("mapping file is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "mapping file must be an object");
    CategoryMapping m;
    for (const auto& [key, labels] : j.items()) {
        const auto slot = parse_slot(key);
        if (!slot) throw Error(ErrorCode::InvalidInput, "unknown primitive in mapping file: " + key);
        if (!labels.is_array()) throw Error(ErrorCode::InvalidInput, "mapping for " + key + " must be a list");
        for (const auto& label : labels) {
            if (!label.is_string()) throw Error(ErrorCode::InvalidInput, "mapping labels must be strings");
            m.add(*slot, label.get<std::string>());
        }
    }
    for (auto c : kAllCategories) {
        if (m.patterns(index_of(c)).empty()) {
            throw Error(ErrorCode::InvalidInput, "mapping file has no labels for " + std::string(name(c)));
        }
    }
    return m;
}

CategoryMapping CategoryMapping::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open mapping file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string CategoryMapping::to_json_text() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) j[std::string(slot_name(slot))] = patterns_[slot];
    return j.dump(2);
}

CategoryMapping CategoryMapping::defaults() {
    CategoryMapping m;
    auto set = [&m](Category c, std::initializer_list<const char*> labels) {
        for (const char* l : labels) m.add(index_of(c), l);
    };
    set(Category::Squiggle, {"Text"});
    set(Category::JailWindow, {"Image"});
    set(Category::Square, {"Card", "Modal", "List Item"});
    set(Category::Slider, {"Slider"});
    set(Category::Switch, {"On/Off Switch"});
    set(Category::Checkbox, {"Checkbox"});
    set(Category::DropDown, {"Drop Down Menu"});
    set(Category::Star, {"Rating Bar", "icon:star"});
    set(Category::Avatar, {"icon:avatar"});
    set(Category::Back, {"icon:back", "icon:arrow_backward"});
    set(Category::Camera, {"icon:camera"});
    set(Category::Cancel, {"icon:cancel", "icon:close"});
    set(Category::Envelope, {"icon:envelope", "icon:email"});
    set(Category::Forward, {"icon:forward", "icon:arrow_forward"});
    set(Category::House, {"icon:house", "icon:home"});
    set(Category::LeftArrow, {"icon:left_arrow", "icon:chevron_left"});
    set(Category::Menu, {"icon:menu"});
    set(Category::Play, {"icon:play"});
    set(Category::Plus, {"icon:plus", "icon:add"});
    set(Category::Search, {"icon:search"});
    set(Category::Setting, {"icon:setting", "icon:settings"});
    set(Category::Share, {"icon:share"});
    set(Category::Cloud, {"icon:*"});
    m.add(kTextButtonSlot, "Text Button");
    return m;
}

std::vector<std::size_t> map_category(std::string_view label, const CategoryMapping& mapping) {
    const SlotMask mask = mapping.map(label);
    std::vector<std::size_t> out;
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
        if (mask & slot_bit(slot)) out.push_back(slot);
    }
    return out;
}

}  // namespace sketchsearch
