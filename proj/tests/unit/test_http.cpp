#include <doctest.h>

#include <httplib.h>
#include <thread>

#include "service_fixture.hpp"

using namespace sketchsearch;
using nlohmann::json;

namespace {

struct LiveServer {
    testing::TempDir dir;
    SearchService service;
    HttpServer server;
    int port = -1;
    std::thread thread;

    LiveServer()
        : service(testing::sample_index(), testing::shipped_recognizer(),
                  testing::images_config(testing::sample_screens_dir(), dir.file("fb.ndjson"))),
          server(service) {
        port = server.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen(); });
    }
    ~LiveServer() {
        server.stop();
        thread.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_connection_timeout(5);
        c.set_read_timeout(10);
        return c;
    }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expect = 200) {
    auto r = c.Post(path, body.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == expect);
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
    return json::parse(r->body);
}

}  // namespace

TEST_SUITE("http") {

TEST_CASE("a drawing session over HTTP") {
    LiveServer live;
    auto c = live.client();
    for (int i = 0; i < 50; ++i) {
        if (c.Get("/api/health")) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    const auto health = c.Get("/api/health");
    REQUIRE(health);
    CHECK(json::parse(health->body)["screens"] == 10);

    const auto sid = post(c, "/api/session", json::object())["session_id"].get<std::string>();
    const auto stroke = post(c, "/api/stroke", {{"session_id", sid}, {"points", testing::rect_points(40, 40, 400, 120)}, {"nonce", "a"}});
    CHECK(stroke["top3"].size() == 3);
    auto replay = c.Post("/api/stroke", json{{"session_id", sid}, {"points", {{1, 1}}}, {"nonce", "a"}}.dump(), "application/json");
    REQUIRE(replay);
    CHECK(replay->get_header_value("X-Replayed") == "true");

    const auto done = post(c, "/api/element/done", {{"session_id", sid}});
    CHECK(done["elements"] == 1);
    CHECK(done["total"] == 10);
    CHECK(done["results"].size() == 10);

    const auto page = c.Get("/api/results?session_id=" + sid + "&page=0");
    REQUIRE(page);
    CHECK(json::parse(page->body)["results"] == done["results"]);

    const auto id = done["results"][0]["screen_id"].get<std::string>();
    const auto thumb = c.Get(done["results"][0]["thumb"].get<std::string>());
    const auto full = c.Get(done["results"][0]["full"].get<std::string>());
    REQUIRE(thumb);
    REQUIRE(full);
    CHECK(thumb->status == 200);
    CHECK(thumb->get_header_value("Content-Type") == "image/png");
    CHECK(thumb->body == testing::read_file(testing::sample_screens_dir() + "/thumb/" + id + ".png"));
    CHECK(full->body.size() > thumb->body.size());

    post(c, "/api/feedback", {{"session_id", sid}, {"vote", "up"}, {"screen_id", id}});
    CHECK(testing::read_file(live.dir.file("fb.ndjson")).find(id) != std::string::npos);
    post(c, "/api/stroke/undo", {{"session_id", sid}});
    post(c, "/api/stroke/redo", {{"session_id", sid}});
    post(c, "/api/element/remove-last", {{"session_id", sid}});

    const auto err = post(c, "/api/feedback", {{"session_id", sid}, {"vote", "sideways"}}, 400);
    CHECK(err["error"]["code"] == "invalid_vote");
    const auto gone = c.Get("/screens/nope/full");
    REQUIRE(gone);
    CHECK(gone->status == 404);
    CHECK(json::parse(gone->body)["error"]["code"] == "unknown_screen");
    const auto put = c.Put("/api/session", "", "application/json");
    REQUIRE(put);
    CHECK(put->status == 405);
}

TEST_CASE("CORS preflight") {
    LiveServer live;
    auto c = live.client();
    auto r = c.Options("/api/stroke");
    for (int i = 0; !r && i < 50; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        r = c.Options("/api/stroke");
    }
    REQUIRE(r);
    CHECK(r->status == 204);
    CHECK(r->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

}  // TEST_SUITE
