#include "sketchsearch/doodle_synth.hpp"

#include <cmath>
#include <numbers>

namespace sketchsearch {

namespace {

constexpr double kPi = std::numbers::pi;

using Polyline = std::vector<Point>;

Polyline arc(double cx, double cy, double rx, double ry, double a0, double a1, int n) {
    Polyline out;
    for (int i = 0; i <= n; ++i) {
        const double a = a0 + (a1 - a0) * i / n;
        out.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    }
    return out;
}

Polyline ellipse(double cx, double cy, double rx, double ry, int n = 28) {
    return arc(cx, cy, rx, ry, -kPi / 2, 3 * kPi / 2, n);
}

Polyline rect(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
}

// Collects polylines in a unit frame and maps them into canvas space with a
// per-seed hand: stretch, slant, small rotation and per-vertex wobble.
class Pen {
public:
    explicit Pen(std::uint64_t seed) : rng_(seed * 0x9E3779B97F4A7C15ull + 17) {
        stretch_x_ = rng_.uniform(0.88, 1.12);
        stretch_y_ = rng_.uniform(0.88, 1.12);
        slant_ = rng_.uniform(-0.06, 0.06);
        rotation_ = rng_.uniform(-0.06, 0.06);
        wobble_ = rng_.uniform(0.002, 0.008);
    }

    Rng& rng() { return rng_; }

    void line(Polyline pts) { strokes_.push_back(std::move(pts)); }

    // Draws a closed or open polyline either in one stroke or split at
    // vertices into `pieces` strokes.
    void split(const Polyline& pts, int pieces) {
        if (pieces <= 1 || pts.size() < 3) {
            line(pts);
            return;
        }
        const std::size_t n = pts.size() - 1;
        std::size_t start = 0;
        for (int k = 1; k <= pieces; ++k) {
            const std::size_t end = k == pieces ? n : std::max(start + 1, n * k / pieces);
            line(Polyline(pts.begin() + static_cast<std::ptrdiff_t>(start),
                          pts.begin() + static_cast<std::ptrdiff_t>(end) + 1));
            start = end;
            if (start >= n) break;
        }
    }

    StrokeSequence finish() {
        StrokeSequence out;
        const double c = std::cos(rotation_);
        const double s = std::sin(rotation_);
        for (const auto& poly : strokes_) {
            Stroke stroke;
            for (std::size_t i = 0; i < poly.size(); ++i) {
                if (i > 0) {
                    // Subdivide so wobble reads as hand tremor rather than corners.
                    const Point a = poly[i - 1];
                    const Point b = poly[i];
                    const int parts = std::max(1, static_cast<int>(std::ceil(std::hypot(b.x - a.x, b.y - a.y) / 0.05)));
                    for (int k = 1; k < parts; ++k) {
                        const double u = static_cast<double>(k) / parts;
                        stroke.points.push_back(map({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)}, c, s));
                    }
                }
                stroke.points.push_back(map(poly[i], c, s));
            }
            out.push_back(std::move(stroke));
        }
        return out;
    }

private:
    Point map(Point p, double c, double s) {
        double x = (p.x - 0.5) * stretch_x_ + slant_ * (p.y - 0.5);
        double y = (p.y - 0.5) * stretch_y_;
        x += rng_.uniform(-wobble_, wobble_);
        y += rng_.uniform(-wobble_, wobble_);
        const double rx = c * x - s * y;
        const double ry = s * x + c * y;
        return {std::round((rx + 0.5) * 1000.0) / 10.0, std::round((ry + 0.5) * 1000.0) / 10.0};
    }

    Rng rng_;
    std::vector<Polyline> strokes_;
    double stretch_x_ = 1.0;
    double stretch_y_ = 1.0;
    double slant_ = 0.0;
    double rotation_ = 0.0;
    double wobble_ = 0.0;
};

void draw_rect(Pen& pen, double x0, double y0, double x1, double y1) {
    const auto r = rect(x0, y0, x1, y1);
    const auto mode = pen.rng().integer(0, 2);
    pen.split(r, mode == 0 ? 1 : (mode == 1 ? 2 : 4));
}

void avatar(Pen& pen) {
    auto& r = pen.rng();
    if (r.chance(0.7)) pen.line(ellipse(0.5, 0.5, 0.5, 0.5, 36));
    const double head = r.uniform(0.13, 0.17);
    pen.line(ellipse(0.5, 0.36, head, head, 20));
    pen.line(arc(0.5, 0.86, r.uniform(0.26, 0.31), r.uniform(0.2, 0.26), kPi, 2 * kPi, 16));
}

void arrow(Pen& pen, bool left) {
    auto& r = pen.rng();
    const double head = r.uniform(0.3, 0.4);
    const double spread = r.uniform(0.3, 0.4);
    const double tip = left ? 0.0 : 1.0;
    const double back = left ? head : 1.0 - head;
    const Polyline shaft = {{1.0 - tip, 0.5}, {tip, 0.5}};
    const Polyline barbs = {{back, 0.5 - spread}, {tip, 0.5}, {back, 0.5 + spread}};
    if (r.chance(0.5)) {
        pen.line(shaft);
        pen.line(barbs);
    } else {
        Polyline joined = shaft;
        joined.push_back({back, 0.5 - spread});
        pen.line(joined);
        pen.line({{tip, 0.5}, {back, 0.5 + spread}});
    }
}

void camera(Pen& pen) {
    auto& r = pen.rng();
    const double top = r.uniform(0.18, 0.24);
    draw_rect(pen, 0.0, top, 1.0, r.uniform(0.85, 0.92));
    const double lens = r.uniform(0.17, 0.22);
    pen.line(ellipse(0.5, 0.56, lens, lens, 24));
    pen.line({{0.3, top}, {0.36, top - 0.12}, {0.64, top - 0.12}, {0.7, top}});
}

void cancel(Pen& pen) {
    auto& r = pen.rng();
    const double inset = r.uniform(0.0, 0.05);
    pen.line({{inset, inset}, {1.0 - inset, 1.0 - inset}});
    pen.line({{1.0 - inset, inset}, {inset, 1.0 - inset}});
}

void checkbox(Pen& pen) {
    auto& r = pen.rng();
    draw_rect(pen, 0.0, 0.0, 1.0, 1.0);
    const double dip = r.uniform(0.7, 0.8);
    pen.line({{0.18, 0.5}, {0.42, dip}, {0.85, r.uniform(0.15, 0.25)}});
}

void cloud(Pen& pen) {
    auto& r = pen.rng();
    const int bumps = static_cast<int>(r.integer(4, 6));
    const double depth = r.uniform(0.12, 0.2);
    Polyline outline;
    const int n = 72;
    for (int i = 0; i <= n; ++i) {
        const double a = kPi + 2 * kPi * i / n;
        const double bump = 1.0 + depth * std::abs(std::sin(a * bumps / 2.0));
        double y = 0.5 + 0.32 * bump * std::sin(a);
        y = std::min(y, 0.75);
        outline.push_back({0.5 + 0.5 * bump / (1.0 + depth) * std::cos(a), y});
    }
    pen.split(outline, r.chance(0.6) ? 1 : 2);
}

void drop_down(Pen& pen) {
    auto& r = pen.rng();
    const double h = r.uniform(0.3, 0.4);
    draw_rect(pen, 0.0, 0.0, 1.0, h);
    const double cx = r.uniform(0.82, 0.88);
    Polyline tri = {{cx - 0.06, h * 0.35}, {cx, h * 0.7}, {cx + 0.06, h * 0.35}};
    if (r.chance(0.5)) tri.push_back(tri.front());
    pen.line(tri);
}

void envelope(Pen& pen) {
    auto& r = pen.rng();
    const double top = r.uniform(0.12, 0.2);
    const double bottom = r.uniform(0.8, 0.88);
    draw_rect(pen, 0.0, top, 1.0, bottom);
    const double dip = top + r.uniform(0.32, 0.42) * (bottom - top) * 1.2;
    pen.line({{0.0, top}, {0.5, dip}, {1.0, top}});
}

void house(Pen& pen) {
    auto& r = pen.rng();
    const double eave = r.uniform(0.4, 0.5);
    pen.split({{0.15, eave}, {0.15, 1.0}, {0.85, 1.0}, {0.85, eave}}, r.chance(0.5) ? 1 : 3);
    pen.line({{0.02, eave + 0.04}, {0.5, 0.0}, {0.98, eave + 0.04}});
    if (r.chance(0.6)) pen.line({{0.42, 1.0}, {0.42, 0.72}, {0.58, 0.72}, {0.58, 1.0}});
}

void jail_window(Pen& pen) {
    auto& r = pen.rng();
    draw_rect(pen, 0.0, 0.0, 1.0, 1.0);
    const int bars = static_cast<int>(r.integer(2, 3));
    for (int i = 1; i <= bars; ++i) {
        const double x = static_cast<double>(i) / (bars + 1) + r.uniform(-0.03, 0.03);
        pen.line({{x, 0.0}, {x, 1.0}});
    }
    if (r.chance(0.5)) pen.line({{0.0, 0.5}, {1.0, 0.5}});
}

void left_arrow(Pen& pen) {
    auto& r = pen.rng();
    const double depth = r.uniform(0.5, 0.65);
    pen.line({{depth, 0.0}, {0.0, 0.5}, {depth, 1.0}});
}

void menu(Pen& pen) {
    auto& r = pen.rng();
    const double gap = r.uniform(0.3, 0.4);
    for (int i = 0; i < 3; ++i) {
        const double y = 0.1 + gap * i;
        pen.line({{0.0, y}, {1.0, y + r.uniform(-0.02, 0.02)}});
    }
}

void play(Pen& pen) {
    auto& r = pen.rng();
    const double back = r.uniform(0.05, 0.15);
    Polyline tri = {{back, 0.0}, {1.0, 0.5}, {back, 1.0}, {back, 0.0}};
    pen.split(tri, r.chance(0.6) ? 1 : 3);
}

void plus(Pen& pen) {
    auto& r = pen.rng();
    const double off = r.uniform(-0.04, 0.04);
    pen.line({{0.5 + off, 0.0}, {0.5 - off, 1.0}});
    pen.line({{0.0, 0.5 - off}, {1.0, 0.5 + off}});
}

void search(Pen& pen) {
    auto& r = pen.rng();
    const double rad = r.uniform(0.3, 0.36);
    pen.line(ellipse(0.38, 0.38, rad, rad, 30));
    const double start = 0.38 + rad * 0.72;
    pen.line({{start, start}, {1.0, 1.0}});
}

void setting(Pen& pen) {
    auto& r = pen.rng();
    const int teeth = static_cast<int>(r.integer(6, 8));
    const double inner = r.uniform(0.36, 0.4);
    Polyline gear;
    const int per_tooth = 4;
    for (int i = 0; i <= teeth * per_tooth; ++i) {
        const double a = 2 * kPi * i / (teeth * per_tooth);
        const double rad = (i % per_tooth) < 2 ? 0.5 : inner;
        gear.push_back({0.5 + rad * std::cos(a), 0.5 + rad * std::sin(a)});
    }
    pen.line(gear);
    const double hub = r.uniform(0.12, 0.17);
    pen.line(ellipse(0.5, 0.5, hub, hub, 18));
}

void share(Pen& pen) {
    auto& r = pen.rng();
    const double rad = r.uniform(0.09, 0.12);
    const Point a{0.12, 0.5};
    const Point b{0.88, 0.12};
    const Point c{0.88, 0.88};
    for (const auto& p : {a, b, c}) pen.line(ellipse(p.x, p.y, rad, rad, 14));
    pen.line({{a.x + rad, a.y - rad * 0.5}, {b.x - rad, b.y + rad * 0.5}});
    pen.line({{a.x + rad, a.y + rad * 0.5}, {c.x - rad, c.y - rad * 0.5}});
}

void slider(Pen& pen) {
    auto& r = pen.rng();
    const double knob = r.uniform(0.2, 0.8);
    const double rad = r.uniform(0.08, 0.1);
    if (r.chance(0.5)) {
        pen.line({{0.0, 0.5}, {1.0, 0.5}});
    } else {
        pen.line({{0.0, 0.5}, {knob - rad, 0.5}});
        pen.line({{knob + rad, 0.5}, {1.0, 0.5}});
    }
    pen.line(ellipse(knob, 0.5, rad, rad, 16));
}

void square(Pen& pen) {
    auto& r = pen.rng();
    const double h = r.uniform(0.85, 1.0);
    draw_rect(pen, 0.0, 0.0, 1.0, h);
}

void squiggle(Pen& pen) {
    auto& r = pen.rng();
    const double waves = r.uniform(1.5, 4.0);
    const double amp = r.uniform(0.03, 0.12);
    const double phase = r.uniform(0.0, 2 * kPi);
    Polyline wave;
    const int n = 60;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        wave.push_back({x, 0.5 + amp * std::sin(2 * kPi * waves * x + phase)});
    }
    pen.line(wave);
}

void star(Pen& pen) {
    auto& r = pen.rng();
    const double inner = r.uniform(0.18, 0.24);
    Polyline outline;
    for (int i = 0; i <= 10; ++i) {
        const double a = -kPi / 2 + kPi * i / 5;
        const double rad = i % 2 == 0 ? 0.5 : inner;
        outline.push_back({0.5 + rad * std::cos(a), 0.52 + rad * std::sin(a)});
    }
    pen.split(outline, r.chance(0.7) ? 1 : 2);
}

void toggle_switch(Pen& pen) {
    auto& r = pen.rng();
    const double h = r.uniform(0.42, 0.52);
    const double rad = h / 2;
    Polyline pill = arc(rad, rad, rad, rad, kPi / 2, 3 * kPi / 2, 12);
    const auto right = arc(1.0 - rad, rad, rad, rad, -kPi / 2, kPi / 2, 12);
    pill.insert(pill.end(), right.begin(), right.end());
    pill.push_back(pill.front());
    pen.split(pill, r.chance(0.7) ? 1 : 2);
    const double knob_x = r.chance(0.5) ? rad : 1.0 - rad;
    const double knob = rad * r.uniform(0.6, 0.8);
    pen.line(ellipse(knob_x, rad, knob, knob, 16));
}

}  // namespace

StrokeSequence synthesize_doodle(Category c, std::uint64_t seed) {
    Pen pen(seed * 31 + index_of(c));
    switch (c) {
        case Category::Avatar: avatar(pen); break;
        case Category::Back: arrow(pen, true); break;
        case Category::Camera: camera(pen); break;
        case Category::Cancel: cancel(pen); break;
        case Category::Checkbox: checkbox(pen); break;
        case Category::Cloud: cloud(pen); break;
        case Category::DropDown: drop_down(pen); break;
        case Category::Envelope: envelope(pen); break;
        case Category::Forward: arrow(pen, false); break;
        case Category::House: house(pen); break;
        case Category::JailWindow: jail_window(pen); break;
        case Category::LeftArrow: left_arrow(pen); break;
        case Category::Menu: menu(pen); break;
        case Category::Play: play(pen); break;
        case Category::Plus: plus(pen); break;
        case Category::Search: search(pen); break;
        case Category::Setting: setting(pen); break;
        case Category::Share: share(pen); break;
        case Category::Slider: slider(pen); break;
        case Category::Square: square(pen); break;
        case Category::Squiggle: squiggle(pen); break;
        case Category::Star: star(pen); break;
        case Category::Switch: toggle_switch(pen); break;
    }
    return pen.finish();
}

StrokeSequence perturb_doodle(const StrokeSequence& sketch, double jitter, Rng& rng) {
    StrokeSequence out = normalize(sketch);
    for (auto& stroke : out) {
        for (auto& p : stroke.points) {
            p.x += rng.uniform(-jitter, jitter);
            p.y += rng.uniform(-jitter, jitter);
        }
    }
    const double k = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
    return translate(scale(out, k), rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0));
}

std::vector<DoodleRecord> synthesize_library_records(std::size_t per_category, std::uint64_t first_seed) {
    std::array<std::size_t, kCategoryCount> counts;
    counts.fill(per_category);
    return synthesize_library_records(counts, first_seed);
}

std::vector<DoodleRecord> synthesize_library_records(const std::array<std::size_t, kCategoryCount>& counts,
                                                     std::uint64_t first_seed) {
    std::vector<DoodleRecord> out;
    for (auto c : kAllCategories) {
        for (std::size_t i = 0; i < counts[index_of(c)]; ++i) {
            out.push_back({std::string(name(c)), synthesize_doodle(c, first_seed + i)});
        }
    }
    return out;
}

}  // namespace sketchsearch
