#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "helpers.hpp"
#include "sketchsearch/doodle_io.hpp"
#include "sketchsearch/doodle_synth.hpp"
#include "sketchsearch/error.hpp"
#include "sketchsearch/template_recognizer.hpp"

using namespace sketchsearch;

namespace {

const TemplateRecognizer& shipped() {
    static const TemplateRecognizer r(TemplateLibrary::load(testing::data_path("templates.ndjson"),
                                                            testing::data_path("templates_manifest.json")));
    return r;
}

double brute_chamfer(const PointCloud& a, const PointCloud& b) {
    double total = 0.0;
    for (const auto* pair : {&a, &b}) {
        const auto& from = *pair;
        const auto& to = pair == &a ? b : a;
        for (const auto& p : from) {
            double best = INFINITY;
            for (const auto& q : to) best = std::min(best, std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y)));
            total += best;
        }
    }
    return total / (2.0 * kCloudSize);
}

std::array<double, kCategoryCount> brute_probabilities(const StrokeSequence& sketch, const TemplateLibrary& lib,
                                                        double tau) {
    const auto cloud = sketch_to_cloud(sketch);
    std::array<double, kCategoryCount> d{};
    for (auto c : kAllCategories) {
        d[index_of(c)] = INFINITY;
        for (const auto& t : lib.templates(c)) d[index_of(c)] = std::min(d[index_of(c)], brute_chamfer(cloud, t));
    }
    const double lo = *std::min_element(d.begin(), d.end());
    std::array<double, kCategoryCount> p{};
    double sum = 0.0;
    for (std::size_t i = 0; i < kCategoryCount; ++i) sum += p[i] = std::exp(-(d[i] - lo) / tau);
    for (auto& v : p) v /= sum;
    return p;
}

void check_distribution(const ElementPrediction& pred) {
    double sum = 0.0;
    for (double v : pred.probabilities) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    std::vector<std::size_t> order(kCategoryCount);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return pred.probabilities[a] > pred.probabilities[b]; });
    for (int i = 0; i < 3; ++i) {
        CHECK(index_of(pred.top[i].category) == order[i]);
        CHECK(pred.top[i].confidence == pred.probabilities[order[i]]);
    }
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("category vocabulary") {
    CHECK(kAllCategories.size() == 23);
    std::size_t quickdraw = 0;
    for (auto c : kAllCategories) {
        quickdraw += is_quickdraw_category(c);
        CHECK(parse_category(name(c)) == c);
    }
    CHECK(quickdraw == 7);
    CHECK(is_quickdraw_category(Category::JailWindow));
    CHECK(!is_quickdraw_category(Category::Squiggle));
    for (std::size_t i = 1; i < kCategoryCount; ++i) CHECK(name(kAllCategories[i - 1]) < name(kAllCategories[i]));
    CHECK(parse_slot("text_button") == kTextButtonSlot);
    CHECK(!parse_category("triangle"));
}

TEST_CASE("shipped library covers every category with enough templates") {
    const auto& lib = shipped().library();
    for (auto c : kAllCategories) {
        CHECK(lib.templates(c).size() >= 8);
        for (const auto& cloud : lib.templates(c)) {
            for (const auto& p : cloud) {
                CHECK(p.x >= -1e-12);
                CHECK(p.x <= 1 + 1e-12);
                CHECK(p.y >= -1e-12);
                CHECK(p.y <= 1 + 1e-12);
            }
        }
    }
}

TEST_CASE("every shipped template is recognised as its own category") {
    const auto records = read_doodle_file(testing::data_path("templates.ndjson"));
    REQUIRE(records.size() == shipped().library().size());
    for (const auto& r : records) {
        const auto pred = shipped().classify(r.strokes);
        CHECK(name(pred.top[0].category) == *r.label);
    }
}

TEST_CASE("jittered horizontal line matches the frozen oracle") {
    const auto records = read_doodle_file(testing::fixture_path("horizontal_line.ndjson"));
    const auto expected = nlohmann::json::parse(testing::read_file(testing::fixture_path("horizontal_line_expected.json")));
    REQUIRE(records.size() == 1);
    const auto cloud = sketch_to_cloud(records[0].strokes);
    const auto d = shipped().category_distances(cloud);
    const auto pred = shipped().classify(records[0].strokes);
    for (auto c : kAllCategories) {
        CHECK(d[index_of(c)] == doctest::Approx(expected["distances"][std::string(name(c))].get<double>()).epsilon(1e-9));
        CHECK(pred.confidence_of(c) ==
              doctest::Approx(expected["probabilities"][std::string(name(c))].get<double>()).epsilon(1e-9));
    }
    for (int i = 0; i < 3; ++i) CHECK(name(pred.top[i].category) == expected["top3"][i].get<std::string>());
    CHECK(pred.top[0].category == Category::Squiggle);
}

TEST_CASE("symmetric library gives uniform confidences with name-ordered ties") {
    TemplateLibrary lib;
    const StrokeSequence dot{Stroke{{{0.5, 0.5}}}};
    for (auto c : kAllCategories) lib.add_sketch(c, dot);
    const TemplateRecognizer rec(std::move(lib));
    const auto pred = rec.classify(StrokeSequence{Stroke{{{3, 4}}}});
    for (double p : pred.probabilities) CHECK(p == doctest::Approx(1.0 / 23).epsilon(1e-12));
    CHECK(pred.top[0].category == Category::Avatar);
    CHECK(pred.top[1].category == Category::Back);
    CHECK(pred.top[2].category == Category::Camera);
}

TEST_CASE("agrees with a brute-force Chamfer oracle") {
    Rng rng(515);
    const auto& lib = shipped().library();
    for (int trial = 0; trial < 25; ++trial) {
        const auto sketch = trial % 2 ? testing::random_sketch(rng)
                                      : synthesize_doodle(kAllCategories[rng.integer(0, 22)], rng.next());
        const auto pred = shipped().classify(sketch);
        const auto oracle = brute_probabilities(sketch, lib, kDefaultTemperature);
        for (std::size_t i = 0; i < kCategoryCount; ++i) CHECK(pred.probabilities[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
        check_distribution(pred);
    }
}

TEST_CASE("translation and scale invariance") {
    Rng rng(616);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = testing::random_sketch(rng);
        const auto base = shipped().classify(s);
        const auto moved = shipped().classify(scale(translate(s, rng.uniform(-500, 500), rng.uniform(-500, 500)),
                                                    rng.uniform(0.05, 20.0)));
        for (int i = 0; i < 3; ++i) CHECK(moved.top[i].category == base.top[i].category);
        for (std::size_t i = 0; i < kCategoryCount; ++i)
            CHECK(std::abs(moved.probabilities[i] - base.probabilities[i]) <= 1e-9);
    }
}

TEST_CASE("incremental classification is stateless") {
    const auto sketch = synthesize_doodle(Category::House, 77);
    std::vector<ElementPrediction> forward;
    for (std::size_t k = 1; k <= sketch.size(); ++k) {
        forward.push_back(shipped().classify(StrokeSequence(sketch.begin(), sketch.begin() + k)));
    }
    const TemplateRecognizer fresh(shipped().library());
    for (std::size_t k = sketch.size(); k >= 1; --k) {
        const auto again = fresh.classify(StrokeSequence(sketch.begin(), sketch.begin() + k));
        CHECK(again.probabilities == forward[k - 1].probabilities);
    }
}

TEST_CASE("classification latency stays under 100 ms") {
    const auto sketch = synthesize_doodle(Category::Setting, 5);
    shipped().classify(sketch);
    const double t = testing::seconds([&] {
        for (int i = 0; i < 10; ++i) shipped().classify(sketch);
    });
    MESSAGE("template classify: " << t * 100 << " ms per sketch");
    CHECK(t / 10 < 0.1);
}

TEST_CASE("empty sketches and incomplete libraries are rejected") {
    CHECK_THROWS_AS(shipped().classify({}), Error);
    TemplateLibrary partial;
    partial.add_sketch(Category::Star, synthesize_doodle(Category::Star, 1));
    CHECK_THROWS_AS(TemplateRecognizer{partial}, Error);
}

TEST_CASE("manifest ranges follow label runs") {
    const auto records = read_doodle_file(testing::data_path("templates.ndjson"));
    const auto manifest = manifest_from_labels(records);
    CHECK(manifest.size() == kCategoryCount);
    const auto shipped_manifest = read_template_manifest(testing::data_path("templates_manifest.json"));
    REQUIRE(shipped_manifest.size() == manifest.size());
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        CHECK(manifest[i].category == shipped_manifest[i].category);
        CHECK(manifest[i].first == shipped_manifest[i].first);
        CHECK(manifest[i].count == shipped_manifest[i].count);
    }
}

}  // TEST_SUITE
