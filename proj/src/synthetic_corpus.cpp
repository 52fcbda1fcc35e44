#include "sketchsearch/synthetic_corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

constexpr int W = kSyntheticWidth;
constexpr int H = kSyntheticHeight;

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& options) {
    return options[static_cast<std::size_t>(rng.integer(0, N - 1))];
}

int between(Rng& rng, int lo, int hi) { return static_cast<int>(rng.integer(lo, hi)); }

SyntheticNode layout(int x1, int y1, int x2, int y2, const char* cls = "android.widget.LinearLayout") {
    SyntheticNode n;
    n.view_class = cls;
    n.x1 = x1, n.y1 = y1, n.x2 = x2, n.y2 = y2;
    return n;
}

SyntheticNode component(const char* label, int x1, int y1, int x2, int y2, const char* cls) {
    SyntheticNode n = layout(x1, y1, x2, y2, cls);
    n.component = label;
    return n;
}

SyntheticNode text(int x1, int y1, int x2, int y2) {
    return component("Text", x1, y1, x2, y2, "android.widget.TextView");
}

SyntheticNode image(int x1, int y1, int x2, int y2) {
    return component("Image", x1, y1, x2, y2, "android.widget.ImageView");
}

SyntheticNode button(int x1, int y1, int x2, int y2) {
    return component("Text Button", x1, y1, x2, y2, "android.widget.Button");
}

SyntheticNode icon(const char* cls, int cx, int cy, int size) {
    SyntheticNode n = component("Icon", cx - size / 2, cy - size / 2, cx + size / 2, cy + size / 2,
                                "android.widget.ImageButton");
    n.icon_class = cls;
    return n;
}

constexpr std::array<const char*, 9> kToolbarIcons = {"search", "share", "settings", "more", "star",
                                                      "avatar", "email", "add", "close"};
constexpr std::array<const char*, 9> kNavIcons = {"home", "search", "star", "avatar", "settings",
                                                  "email", "add", "camera", "play"};
constexpr std::array<const char*, 6> kRowIcons = {"star", "share", "more", "arrow_forward", "chevron_left", "play"};
constexpr std::array<const char*, 6> kApps = {"news", "shop", "fit", "chat", "music", "travel"};

SyntheticNode toolbar(Rng& rng, int height) {
    SyntheticNode bar = component("Toolbar", 0, 0, W, height, "android.support.v7.widget.Toolbar");
    const int size = between(rng, 90, 130);
    const int cy = height / 2 + between(rng, -10, 10);
    int title_x = between(rng, 40, 80);
    if (rng.chance(0.7)) {
        const char* cls = pick(rng, std::array<const char*, 4>{"menu", "arrow_backward", "back", "close"});
        const int cx = between(rng, 60, 110);
        bar.children.push_back(icon(cls, cx, cy, size));
        title_x = cx + size;
    }
    const int right_icons = between(rng, 0, 3);
    const int title_end = W - right_icons * (size + 30) - 40;
    bar.children.push_back(text(title_x, cy - between(rng, 30, 50), between(rng, title_x + 200, std::max(title_x + 220, title_end)),
                                cy + between(rng, 30, 50)));
    for (int i = 0; i < right_icons; ++i) {
        const int cx = W - 80 - i * (size + between(rng, 20, 50));
        bar.children.push_back(icon(pick(rng, kToolbarIcons), cx, cy, size));
    }
    return bar;
}

SyntheticNode bottom_navigation(Rng& rng, int top) {
    SyntheticNode nav = component("Bottom Navigation", 0, top, W, H, "android.support.design.widget.BottomNavigationView");
    const int n = between(rng, 3, 5);
    const int size = between(rng, 90, 120);
    for (int i = 0; i < n; ++i) {
        const int cx = W * (2 * i + 1) / (2 * n);
        nav.children.push_back(icon(pick(rng, kNavIcons), cx, (top + H) / 2 - 20, size));
    }
    return nav;
}

void list_body(Rng& rng, SyntheticNode& body) {
    const int margin = between(rng, 0, 48);
    const int row_h = between(rng, 180, 330);
    const bool thumbs = rng.chance(0.7);
    const bool subtitle = rng.chance(0.5);
    const char* trailing = rng.chance(0.4) ? pick(rng, kRowIcons) : nullptr;
    int y = body.y1 + between(rng, 0, 60);
    while (y + row_h < body.y2) {
        SyntheticNode row = component("List Item", margin, y, W - margin, y + row_h - between(rng, 4, 20),
                                      "android.widget.RelativeLayout");
        int tx = margin + 40;
        if (thumbs) {
            const int s = row_h - 60;
            row.children.push_back(image(margin + 30, y + 30, margin + 30 + s, y + 30 + s));
            tx = margin + 60 + s;
        }
        const int tw = between(rng, 400, 800);
        if (subtitle) {
            row.children.push_back(text(tx, y + 30, tx + tw, y + row_h / 2 - 5));
            row.children.push_back(text(tx, y + row_h / 2 + 5, tx + tw - between(rng, 0, 200), y + row_h - 40));
        } else {
            row.children.push_back(text(tx, y + row_h / 2 - 40, tx + tw, y + row_h / 2 + 40));
        }
        if (trailing) row.children.push_back(icon(trailing, W - margin - 110, y + row_h / 2, 100));
        body.children.push_back(std::move(row));
        y += row_h + between(rng, 0, 24);
    }
}

void grid_body(Rng& rng, SyntheticNode& body) {
    const int cols = between(rng, 2, 3);
    const int gap = between(rng, 20, 60);
    const int card_w = (W - gap * (cols + 1)) / cols;
    const int card_h = between(rng, card_w * 9 / 10, card_w * 3 / 2);
    const bool star = rng.chance(0.3);
    int y = body.y1 + gap;
    for (int r = 0; y + card_h < body.y2 && r < 4; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int x = gap + c * (card_w + gap);
            SyntheticNode card = component("Card", x, y, x + card_w, y + card_h, "android.support.v7.widget.CardView");
            const int img_h = card_h * between(rng, 55, 70) / 100;
            card.children.push_back(image(x, y, x + card_w, y + img_h));
            card.children.push_back(text(x + 20, y + img_h + 20, x + card_w - 20, y + img_h + 90));
            if (star) card.children.push_back(icon("star", x + card_w - 70, y + card_h - 70, 80));
            body.children.push_back(std::move(card));
        }
        y += card_h + gap;
    }
}

void form_body(Rng& rng, SyntheticNode& body) {
    const int margin = between(rng, 60, 140);
    int y = body.y1 + between(rng, 60, 200);
    if (rng.chance(0.5)) {
        body.children.push_back(text(margin, y, W - margin - between(rng, 0, 400), y + between(rng, 80, 140)));
        y += 200;
    }
    const int fields = between(rng, 2, 4);
    for (int i = 0; i < fields; ++i) {
        body.children.push_back(text(margin, y, margin + between(rng, 200, 500), y + 60));
        y += 80;
        if (rng.chance(0.25)) {
            body.children.push_back(component("Drop Down Menu", margin, y, W - margin, y + 130, "android.widget.Spinner"));
        } else {
            body.children.push_back(component("Input", margin, y, W - margin, y + 130, "android.widget.EditText"));
        }
        y += between(rng, 170, 230);
    }
    if (rng.chance(0.6)) {
        body.children.push_back(component("Checkbox", margin, y, margin + 80, y + 80, "android.widget.CheckBox"));
        body.children.push_back(text(margin + 110, y, margin + between(rng, 400, 900), y + 80));
        y += 150;
    }
    const int bw = between(rng, 500, W - 2 * margin);
    body.children.push_back(button((W - bw) / 2, y + 40, (W + bw) / 2, y + between(rng, 160, 200)));
}

void settings_body(Rng& rng, SyntheticNode& body) {
    const int row_h = between(rng, 160, 240);
    int y = body.y1 + between(rng, 20, 80);
    const int rows = between(rng, 4, 8);
    for (int i = 0; i < rows && y + row_h < body.y2; ++i) {
        body.children.push_back(text(60, y + row_h / 2 - 40, between(rng, 500, 900), y + row_h / 2 + 40));
        switch (rng.integer(0, 3)) {
            case 0:
                body.children.push_back(component("On/Off Switch", W - 240, y + row_h / 2 - 50, W - 60, y + row_h / 2 + 50,
                                                  "android.widget.Switch"));
                break;
            case 1:
                body.children.push_back(component("Checkbox", W - 160, y + row_h / 2 - 45, W - 70, y + row_h / 2 + 45,
                                                  "android.widget.CheckBox"));
                break;
            case 2:
                body.children.push_back(icon("arrow_forward", W - 110, y + row_h / 2, 90));
                break;
            default:
                break;
        }
        y += row_h;
    }
}

void detail_body(Rng& rng, SyntheticNode& body) {
    int y = body.y1;
    const int img_h = between(rng, 500, 1000);
    body.children.push_back(image(0, y, W, y + img_h));
    y += img_h + 40;
    body.children.push_back(text(60, y, between(rng, 700, 1300), y + between(rng, 80, 130)));
    y += 160;
    if (rng.chance(0.5)) {
        body.children.push_back(component("Rating Bar", 60, y, between(rng, 400, 600), y + 80, "android.widget.RatingBar"));
        y += 120;
    }
    const int paragraphs = between(rng, 1, 3);
    for (int i = 0; i < paragraphs && y + 300 < body.y2; ++i) {
        const int ph = between(rng, 120, 300);
        body.children.push_back(text(60, y, W - 60, y + ph));
        y += ph + 40;
    }
    const int buttons = between(rng, 1, 2);
    const int bw = (W - 120 - (buttons - 1) * 40) / buttons;
    if (y + 180 < body.y2) {
        for (int i = 0; i < buttons; ++i) {
            const int x = 60 + i * (bw + 40);
            body.children.push_back(button(x, y, x + bw, y + between(rng, 120, 170)));
        }
    }
}

void login_body(Rng& rng, SyntheticNode& body) {
    int y = body.y1 + between(rng, 120, 300);
    const int logo = between(rng, 240, 420);
    body.children.push_back(image((W - logo) / 2, y, (W + logo) / 2, y + logo));
    y += logo + between(rng, 80, 160);
    const int margin = between(rng, 80, 180);
    for (int i = 0; i < 2; ++i) {
        body.children.push_back(component("Input", margin, y, W - margin, y + 140, "android.widget.EditText"));
        y += between(rng, 170, 220);
    }
    body.children.push_back(button(margin, y + 40, W - margin, y + between(rng, 170, 210)));
    y += 260;
    body.children.push_back(text(W / 2 - between(rng, 200, 350), y, W / 2 + between(rng, 200, 350), y + 70));
    y += 140;
    if (rng.chance(0.5)) {
        const int n = between(rng, 2, 3);
        for (int i = 0; i < n; ++i) {
            body.children.push_back(icon(pick(rng, std::array<const char*, 3>{"email", "share", "avatar"}),
                                         W / 2 + (2 * i - (n - 1)) * 100, y + 60, 110));
        }
    }
}

void player_body(Rng& rng, SyntheticNode& body) {
    int y = body.y1 + between(rng, 40, 160);
    const int art = between(rng, 800, 1200);
    body.children.push_back(image((W - art) / 2, y, (W + art) / 2, y + art));
    y += art + 60;
    body.children.push_back(text(100, y, W - 100, y + 90));
    y += 130;
    if (rng.chance(0.6)) {
        body.children.push_back(text(100, y, W - between(rng, 300, 600), y + 70));
        y += 110;
    }
    body.children.push_back(component("Slider", 80, y, W - 80, y + 70, "android.widget.SeekBar"));
    y += 140;
    const int size = between(rng, 120, 200);
    const int cy = y + size / 2;
    body.children.push_back(icon(rng.chance(0.5) ? "back" : "chevron_left", W / 2 - 2 * size, cy, size * 3 / 4));
    body.children.push_back(icon("play", W / 2, cy, size));
    body.children.push_back(icon("forward", W / 2 + 2 * size, cy, size * 3 / 4));
}

void modal_body(Rng& rng, SyntheticNode& body) {
    list_body(rng, body);
    const int mw = between(rng, 900, 1240);
    const int mh = between(rng, 600, 1100);
    const int top = (H - mh) / 2 + between(rng, -200, 200);
    SyntheticNode modal = component("Modal", (W - mw) / 2, top, (W + mw) / 2, top + mh, "android.widget.FrameLayout");
    const int x = (W - mw) / 2;
    modal.children.push_back(text(x + 60, top + 60, x + mw - 60, top + 160));
    modal.children.push_back(text(x + 60, top + 200, x + mw - 60, top + mh - 260));
    const int bw = between(rng, 220, 360);
    modal.children.push_back(button(x + mw - 2 * bw - 100, top + mh - 200, x + mw - bw - 100, top + mh - 60));
    modal.children.push_back(button(x + mw - bw - 60, top + mh - 200, x + mw - 60, top + mh - 60));
    body.children.push_back(std::move(modal));
}

void web_body(Rng& rng, SyntheticNode& body) {
    const int web_bottom = body.y2 - between(rng, 0, 400);
    body.children.push_back(component("Web View", 0, body.y1, W, web_bottom, "android.webkit.WebView"));
    if (web_bottom + 200 < body.y2) {
        body.children.push_back(button(80, web_bottom + 40, W - 80, std::min(body.y2 - 20, web_bottom + 190)));
    }
}

}  // namespace

SyntheticScreen synthesize_screen(std::uint64_t seed, const std::string& id) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 0x5851F42D4C957F2DULL);
    SyntheticScreen screen;
    screen.id = id;
    screen.app = std::string("com.example.") + pick(rng, kApps) + std::to_string(rng.integer(1, 40));
    screen.root = layout(0, 0, W, H, "com.android.internal.policy.PhoneWindow$DecorView");

    const int bar_h = between(rng, 150, 230);
    const bool nav = rng.chance(0.35);
    const int nav_top = nav ? H - between(rng, 150, 210) : H;
    screen.root.children.push_back(toolbar(rng, bar_h));

    SyntheticNode body = layout(0, bar_h, W, nav_top, "android.widget.FrameLayout");
    switch (rng.integer(0, 8)) {
        case 0: case 1: list_body(rng, body); break;
        case 2: grid_body(rng, body); break;
        case 3: form_body(rng, body); break;
        case 4: settings_body(rng, body); break;
        case 5: detail_body(rng, body); break;
        case 6: login_body(rng, body); break;
        case 7: player_body(rng, body); break;
        default: rng.chance(0.5) ? modal_body(rng, body) : web_body(rng, body); break;
    }
    if (rng.chance(0.3)) {
        const int s = between(rng, 150, 200);
        const int cx = W - s / 2 - between(rng, 40, 80);
        const int cy = nav_top - s / 2 - between(rng, 40, 80);
        body.children.push_back(icon(rng.chance(0.7) ? "add" : "camera", cx, cy, s));
    }
    if (rng.chance(0.2)) {
        SyntheticNode hidden = button(100, nav_top - 400, W - 100, nav_top - 250);
        hidden.visible = false;
        hidden.children.push_back(text(200, nav_top - 380, W - 200, nav_top - 270));
        body.children.push_back(std::move(hidden));
    }
    if (rng.chance(0.15)) {
        body.children.push_back(component("Advertisement", 0, nav_top - 200, W, nav_top, "android.webkit.WebView"));
    }
    screen.root.children.push_back(std::move(body));
    if (nav) screen.root.children.push_back(bottom_navigation(rng, nav_top));
    return screen;
}

std::vector<SyntheticScreen> synthesize_screens(std::size_t count, std::uint64_t seed) {
    std::vector<SyntheticScreen> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string id = std::to_string(i);
        id = "s" + std::string(id.size() < 5 ? 5 - id.size() : 0, '0') + id;
        out.push_back(synthesize_screen(seed + i, id));
    }
    return out;
}

namespace {

nlohmann::ordered_json node_json(const SyntheticNode& n) {
    nlohmann::ordered_json j;
    j["class"] = n.view_class;
    if (!n.component.empty()) j["componentLabel"] = n.component;
    if (!n.icon_class.empty()) j["iconClass"] = n.icon_class;
    j["bounds"] = {n.x1, n.y1, n.x2, n.y2};
    if (!n.visible) j["visible"] = false;
    if (!n.children.empty()) {
        j["children"] = nlohmann::ordered_json::array();
        for (const auto& c : n.children) j["children"].push_back(node_json(c));
    }
    return j;
}

std::string node_label(const SyntheticNode& n) {
    if (n.component.empty()) return n.view_class;
    if (n.component == "Icon" && !n.icon_class.empty()) return "icon:" + n.icon_class;
    return n.component;
}

void flatten(const SyntheticNode& n, bool parent_visible, std::vector<ScreenElement>& out) {
    const bool visible = parent_visible && n.visible;
    out.push_back({node_label(n), normalize_bounds(n.x1, n.y1, n.x2, n.y2, W, H), visible});
    for (const auto& c : n.children) flatten(c, visible, out);
}

}  // namespace

std::string to_hierarchy_json(const SyntheticScreen& screen) {
    nlohmann::ordered_json j;
    j["id"] = screen.id;
    j["app"] = screen.app;
    j["width"] = W;
    j["height"] = H;
    j["root"] = node_json(screen.root);
    return j.dump(1) + "\n";
}

ScreenDocument to_document(const SyntheticScreen& screen) {
    ScreenDocument doc;
    doc.id = screen.id;
    doc.source_app = screen.app;
    flatten(screen.root, true, doc.elements);
    return doc;
}

void write_hierarchies(const std::vector<SyntheticScreen>& screens, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& s : screens) {
        const auto path = dir / (s.id + ".json");
        std::ofstream out(path, std::ios::binary);
        out << to_hierarchy_json(s);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
}

std::optional<Category> drawn_category(const std::string& label, const CategoryMapping& mapping) {
    std::optional<Category> wildcard;
    for (Category c : kAllCategories) {
        for (const auto& p : mapping.patterns(index_of(c))) {
            if (p == label) return c;
            if (!wildcard && !p.empty() && p.back() == '*' && label.starts_with(std::string_view(p).substr(0, p.size() - 1))) {
                wildcard = c;
            }
        }
    }
    return wildcard;
}

SessionSnapshot derive_session(const ScreenDocument& screen, const CategoryMapping& mapping,
                               const QueryDerivation& options, Rng& rng) {
    const bool text_buttons = mapping.map("Text Button") & slot_bit(kTextButtonSlot);
    struct Candidate {
        std::size_t element;
        std::optional<Category> category;  // empty: text button
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < screen.elements.size(); ++i) {
        const auto& el = screen.elements[i];
        if (!el.visible) continue;
        if (el.label == "Text Button" && text_buttons) {
            candidates.push_back({i, std::nullopt});
        } else if (auto c = drawn_category(el.label, mapping)) {
            candidates.push_back({i, c});
        }
    }
    if (candidates.empty()) throw Error(ErrorCode::InvalidInput, "screen " + screen.id + " has no drawable elements");

    const auto wanted = static_cast<std::size_t>(
        rng.integer(static_cast<std::int64_t>(options.min_elements), static_cast<std::int64_t>(options.max_elements)));
    const std::size_t k = std::min(wanted, candidates.size());
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(candidates.size() - 1)));
        std::swap(candidates[i], candidates[j]);
    }

    SessionSnapshot snap;
    snap.canvas = options.canvas;
    snap.target = screen.id;
    const double cw = options.canvas.width, ch = options.canvas.height;
    for (std::size_t i = 0; i < k; ++i) {
        const BBox& b = screen.elements[candidates[i].element].bbox;
        const double cx = std::clamp(b.cx + rng.uniform(-options.center_jitter, options.center_jitter), 0.0, 1.0);
        const double cy = std::clamp(b.cy + rng.uniform(-options.center_jitter, options.center_jitter), 0.0, 1.0);
        const double w = b.w * rng.uniform(1.0 - options.size_jitter, 1.0 + options.size_jitter);
        const double h = b.h * rng.uniform(1.0 - options.size_jitter, 1.0 + options.size_jitter);
        const BBox box{cx * cw, cy * ch, w * cw, h * ch};
        if (candidates[i].category) {
            snap.elements.push_back({*candidates[i].category, box, {}});
        } else {
            snap.elements.push_back({Category::Square, box, {}});
            snap.elements.push_back({Category::Squiggle, {box.cx, box.cy, box.w * 0.7, box.h * 0.5}, {}});
        }
    }
    return snap;
}

}  // namespace sketchsearch
