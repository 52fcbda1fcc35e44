#include "sketchsearch/stroke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

constexpr double kSnapTolerance = 1e-9;

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Walks the polyline emitting a point each time the straight-line distance from
// the previously emitted point reaches `spacing`. Consecutive output points are
// therefore exactly `spacing` apart except for the final one.
std::vector<Point> resample_stroke(const std::vector<Point>& pts, double spacing) {
    std::vector<Point> out;
    out.reserve(pts.size() + 8);
    out.push_back(pts.front());
    Point anchor = pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Point a = pts[i - 1];
        const Point b = pts[i];
        for (;;) {
            const double ex = b.x - a.x;
            const double ey = b.y - a.y;
            const double seg2 = ex * ex + ey * ey;
            if (seg2 == 0.0) break;
            // |a + u*e - anchor|^2 = spacing^2, with a inside the circle.
            const double fx = a.x - anchor.x;
            const double fy = a.y - anchor.y;
            const double half_b = fx * ex + fy * ey;
            const double c = fx * fx + fy * fy - spacing * spacing;
            const double disc = half_b * half_b - seg2 * c;
            const double u = (-half_b + std::sqrt(std::max(0.0, disc))) / seg2;
            if (u > 1.0) break;
            const Point q{a.x + u * ex, a.y + u * ey};
            out.push_back(q);
            anchor = q;
            a = q;
        }
    }
    const Point& last = pts.back();
    if (distance(out.back(), last) > kSnapTolerance) {
        out.push_back(last);
    } else if (out.size() > 1) {
        out.back() = last;
    } else {
        out.push_back(last);
    }
    return out;
}

}  // namespace

void validate(const StrokeSequence& sketch) {
    if (sketch.empty()) throw Error(ErrorCode::InvalidInput, "sketch has no strokes");
    for (const auto& stroke : sketch) {
        if (stroke.points.empty()) throw Error(ErrorCode::InvalidInput, "stroke has no points");
        for (const auto& p : stroke.points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw Error(ErrorCode::InvalidInput, "stroke coordinate is not finite");
            }
        }
    }
}

Bounds bounds_of(const StrokeSequence& sketch) {
    validate(sketch);
    Bounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& stroke : sketch) {
        for (const auto& p : stroke.points) {
            b.min_x = std::min(b.min_x, p.x);
            b.min_y = std::min(b.min_y, p.y);
            b.max_x = std::max(b.max_x, p.x);
            b.max_y = std::max(b.max_y, p.y);
        }
    }
    return b;
}

StrokeSequence normalize(const StrokeSequence& sketch) {
    const Bounds b = bounds_of(sketch);
    const double extent = std::max(b.width(), b.height());
    const double factor = extent > 0.0 ? 1.0 / extent : 1.0;
    StrokeSequence out = sketch;
    for (auto& stroke : out) {
        for (auto& p : stroke.points) {
            p.x = (p.x - b.min_x) * factor;
            p.y = (p.y - b.min_y) * factor;
        }
    }
    return out;
}

StrokeSequence resample(const StrokeSequence& sketch, double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw Error(ErrorCode::InvalidInput, "resample spacing must be positive");
    }
    validate(sketch);
    StrokeSequence out;
    out.reserve(sketch.size());
    for (const auto& stroke : sketch) out.push_back(Stroke{resample_stroke(stroke.points, spacing)});
    return out;
}

EncodedSketch delta_encode(const StrokeSequence& sketch) {
    validate(sketch);
    EncodedSketch steps;
    steps.reserve(point_count(sketch));
    Point prev{0.0, 0.0};
    for (const auto& stroke : sketch) {
        for (std::size_t i = 0; i < stroke.points.size(); ++i) {
            const Point& p = stroke.points[i];
            const bool last = i + 1 == stroke.points.size();
            steps.push_back({p.x - prev.x, p.y - prev.y, static_cast<std::uint8_t>(last ? 1 : 0)});
            prev = p;
        }
    }
    return steps;
}

StrokeSequence delta_decode(const EncodedSketch& encoded) {
    if (encoded.empty()) throw Error(ErrorCode::InvalidInput, "encoded sketch is empty");
    if (encoded.back().pen_lift != 1) {
        throw Error(ErrorCode::InvalidInput, "encoded sketch does not end with a pen lift");
    }
    StrokeSequence out;
    Stroke current;
    Point pos{0.0, 0.0};
    for (const auto& step : encoded) {
        if (step.pen_lift > 1) throw Error(ErrorCode::InvalidInput, "pen_lift must be 0 or 1");
        pos.x += step.dx;
        pos.y += step.dy;
        current.points.push_back(pos);
        if (step.pen_lift == 1) {
            out.push_back(std::move(current));
            current = Stroke{};
        }
    }
    return out;
}

StrokeSequence translate(const StrokeSequence& sketch, double dx, double dy) {
    StrokeSequence out = sketch;
    for (auto& stroke : out) {
        for (auto& p : stroke.points) {
            p.x += dx;
            p.y += dy;
        }
    }
    return out;
}

StrokeSequence scale(const StrokeSequence& sketch, double factor) {
    StrokeSequence out = sketch;
    for (auto& stroke : out) {
        for (auto& p : stroke.points) {
            p.x *= factor;
            p.y *= factor;
        }
    }
    return out;
}

double arc_length(const StrokeSequence& sketch) {
    double total = 0.0;
    for (const auto& stroke : sketch) {
        for (std::size_t i = 1; i < stroke.points.size(); ++i) {
            total += distance(stroke.points[i - 1], stroke.points[i]);
        }
    }
    return total;
}

std::size_t point_count(const StrokeSequence& sketch) {
    std::size_t n = 0;
    for (const auto& stroke : sketch) n += stroke.points.size();
    return n;
}

}  // namespace sketchsearch
