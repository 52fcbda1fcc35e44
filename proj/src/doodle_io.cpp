#include "sketchsearch/doodle_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

using nlohmann::json;

DoodleRecord parse_doodle_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("doodle record is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "doodle record must be an object");

    DoodleRecord rec;
    for (const char* key : {"word", "label"}) {
        if (j.contains(key) && j[key].is_string()) {
            rec.label = j[key].get<std::string>();
            break;
        }
    }
    const json* drawing = nullptr;
    for (const char* key : {"drawing", "strokes"}) {
        if (j.contains(key)) {
            drawing = &j[key];
            break;
        }
    }
    if (drawing == nullptr || !drawing->is_array()) {
        throw Error(ErrorCode::InvalidInput, "doodle record has no stroke list");
    }
    try {
        for (const auto& pair : *drawing) {
            if (!pair.is_array() || pair.size() < 2) {
                throw Error(ErrorCode::InvalidInput, "stroke must be an [xs, ys] pair");
            }
            const auto xs = pair[0].get<std::vector<double>>();
            const auto ys = pair[1].get<std::vector<double>>();
            if (xs.size() != ys.size()) {
                throw Error(ErrorCode::InvalidInput, "stroke x and y lists differ in length");
            }
            Stroke s;
            s.points.reserve(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) s.points.push_back({xs[i], ys[i]});
            rec.strokes.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad stroke coordinates: ") + e.what());
    }
    validate(rec.strokes);
    return rec;
}

std::string format_doodle_line(const DoodleRecord& record) {
    json drawing = json::array();
    for (const auto& stroke : record.strokes) {
        json xs = json::array();
        json ys = json::array();
        for (const auto& p : stroke.points) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        drawing.push_back(json::array({std::move(xs), std::move(ys)}));
    }
    json j = json::object();
    if (record.label) j["word"] = *record.label;
    j["drawing"] = std::move(drawing);
    return j.dump();
}

std::vector<DoodleRecord> read_doodles(std::istream& in) {
    std::vector<DoodleRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_doodle_line(line));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<DoodleRecord> read_doodle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open doodle file " + path);
    return read_doodles(in);
}

void write_doodles(std::ostream& out, const std::vector<DoodleRecord>& records) {
    for (const auto& r : records) out << format_doodle_line(r) << '\n';
}

void write_doodle_file(const std::string& path, const std::vector<DoodleRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write doodle file " + path);
    write_doodles(out, records);
}

}  // namespace sketchsearch
