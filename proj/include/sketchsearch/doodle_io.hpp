#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

/// One line of a doodle file. Files follow the QuickDraw "simplified drawing"
/// layout: one JSON object per line with the label under "word" and the
/// strokes under "drawing" as [[x0, x1, ...], [y0, y1, ...]] pairs. The
/// aliases "label" and "strokes" are accepted on read.
struct DoodleRecord {
    std::optional<std::string> label;
    StrokeSequence strokes;
};

DoodleRecord parse_doodle_line(const std::string& line);
std::string format_doodle_line(const DoodleRecord& record);

/// Blank lines are skipped. Parse failures throw InvalidInput naming the line.
std::vector<DoodleRecord> read_doodles(std::istream& in);
std::vector<DoodleRecord> read_doodle_file(const std::string& path);

void write_doodles(std::ostream& out, const std::vector<DoodleRecord>& records);
void write_doodle_file(const std::string& path, const std::vector<DoodleRecord>& records);

}  // namespace sketchsearch
