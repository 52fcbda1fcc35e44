#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sketchsearch {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// One pen-down to pen-up trace, in drawing order.
struct Stroke {
    std::vector<Point> points;

    friend bool operator==(const Stroke&, const Stroke&) = default;
};

/// A doodle: the strokes of one element sketch, in temporal order.
using StrokeSequence = std::vector<Stroke>;

struct EncodedStep {
    double dx = 0.0;
    double dy = 0.0;
    std::uint8_t pen_lift = 0;

    friend bool operator==(const EncodedStep&, const EncodedStep&) = default;
};

using EncodedSketch = std::vector<EncodedStep>;

struct Bounds {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

inline constexpr double kDefaultSpacing = 0.02;

/// Throws InvalidInput unless the sketch has at least one stroke, every
/// stroke has at least one point and every coordinate is finite.
void validate(const StrokeSequence& sketch);

Bounds bounds_of(const StrokeSequence& sketch);

/// Translate the joint bounding box to the origin and scale uniformly so the
/// larger side is 1. A sketch with zero extent is only translated.
StrokeSequence normalize(const StrokeSequence& sketch);

/// Re-sample every stroke at fixed arc-length spacing. First and last points
/// of each stroke are kept; a single-point stroke becomes two coincident points.
StrokeSequence resample(const StrokeSequence& sketch, double spacing = kDefaultSpacing);

EncodedSketch delta_encode(const StrokeSequence& sketch);
StrokeSequence delta_decode(const EncodedSketch& encoded);

StrokeSequence translate(const StrokeSequence& sketch, double dx, double dy);
StrokeSequence scale(const StrokeSequence& sketch, double factor);

/// Total polyline length of all strokes (pen-up gaps excluded).
double arc_length(const StrokeSequence& sketch);

std::size_t point_count(const StrokeSequence& sketch);

}  // namespace sketchsearch
