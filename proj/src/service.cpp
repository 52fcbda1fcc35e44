#include "sketchsearch/service.hpp"

#include <ctime>
#include <deque>
#include <fstream>
#include <iterator>
#include <random>

#include "binary_io.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

using nlohmann::json;
using TimePoint = std::chrono::steady_clock::time_point;

struct ApiFailure {
    int status;
    const char* code;
    std::string message;
};

ApiResponse json_response(int status, const json& body) {
    ApiResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
    return json_response(status, json{{"error", {{"code", code}, {"message", message}}}});
}

[[noreturn]] void bad_request(const std::string& message) { throw ApiFailure{400, api_error::kBadRequest, message}; }

json top3_json(const std::optional<ElementPrediction>& p) {
    json out = json::array();
    if (!p) return out;
    for (const auto& r : p->top) out.push_back({{"category", name(r.category)}, {"confidence", r.confidence}});
    return out;
}

json bbox_json(const BBox& b) { return json::array({b.cx, b.cy, b.w, b.h}); }

json query_json(const SearchQuery& q) {
    json out = json::array();
    for (const auto& el : q.elements) {
        json e{{"category", el.compound ? std::string(kTextButtonName) : std::string(name(el.category))},
               {"bbox", bbox_json(el.bbox)}};
        out.push_back(std::move(e));
    }
    return out;
}

Stroke parse_points(const json& points) {
    if (!points.is_array()) bad_request("points must be a list");
    Stroke stroke;
    for (const auto& p : points) {
        double x = 0.0, y = 0.0;
        if (p.is_array() && p.size() >= 2 && p[0].is_number() && p[1].is_number()) {
            x = p[0].get<double>();
            y = p[1].get<double>();
        } else if (p.is_object() && p.contains("x") && p.contains("y") && p["x"].is_number() && p["y"].is_number()) {
            x = p["x"].get<double>();
            y = p["y"].get<double>();
        } else {
            bad_request("each point must be [x, y] or {\"x\": x, \"y\": y}");
        }
        if (!std::isfinite(x) || !std::isfinite(y)) bad_request("point coordinates must be finite");
        stroke.points.push_back({x, y});
    }
    if (stroke.points.empty()) throw ApiFailure{400, api_error::kEmptyStroke, "stroke has no points"};
    return stroke;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

std::string content_type_for(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".png") return "image/png";
    if (ext == ".webp") return "image/webp";
    return "image/jpeg";
}

}  // namespace

struct SearchService::Session {
    std::string id;
    std::mutex mutex;
    CanvasState canvas;
    std::optional<ElementPrediction> prediction;
    SearchQuery query;
    std::optional<Ranking> ranking;
    TimePoint last_active;
    std::deque<std::string> nonce_order;
    std::unordered_map<std::string, ApiResponse> nonces;
};

SearchService::SearchService(std::shared_ptr<const CorpusIndex> index, std::shared_ptr<const Recognizer> recognizer,
                             ServiceConfig config, Clock clock)
    : index_(std::move(index)), recognizer_(std::move(recognizer)), config_(std::move(config)), clock_(std::move(clock)) {
    if (!index_ || !recognizer_) throw Error(ErrorCode::InvalidInput, "service needs an index and a recognizer");
    if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

SearchService::~SearchService() = default;

std::size_t SearchService::session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
}

void SearchService::expire_sessions(TimePoint now) {
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (now - it->second->last_active > config_.session_ttl) {
            it = sessions_.erase(it);
        } else {
            ++it;
        }
    }
}

std::shared_ptr<SearchService::Session> SearchService::session(const std::string& id) {
    const auto now = clock_();
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ApiFailure{404, api_error::kUnknownSession, "unknown or expired session"};
    if (now - it->second->last_active > config_.session_ttl) {
        sessions_.erase(it);
        throw ApiFailure{404, api_error::kUnknownSession, "unknown or expired session"};
    }
    it->second->last_active = now;
    return it->second;
}

ApiResponse SearchService::create_session(const ApiRequest&) {
    static thread_local std::mt19937_64 gen{std::random_device{}()};
    auto s = std::make_shared<Session>();
    s->canvas = CanvasState(config_.canvas);
    s->last_active = clock_();
    std::lock_guard lock(sessions_mutex_);
    expire_sessions(s->last_active);
    do {
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(gen()),
                      static_cast<unsigned long long>(gen()));
        s->id = buf;
    } while (sessions_.count(s->id));
    sessions_.emplace(s->id, s);
    return json_response(200, {{"session_id", s->id},
                               {"canvas", {config_.canvas.width, config_.canvas.height}},
                               {"ttl_seconds", config_.session_ttl.count()}});
}

ApiResponse SearchService::with_session(const ApiRequest& request, const std::string& endpoint,
                                        const std::function<ApiResponse(Session&, const json&)>& fn) {
    json body;
    try {
        body = json::parse(request.body.empty() ? std::string("{}") : request.body);
    } catch (const json::exception&) {
        bad_request("body is not valid JSON");
    }
    if (!body.is_object()) bad_request("body must be a JSON object");
    auto sid = body.find("session_id");
    if (sid == body.end() || !sid->is_string()) bad_request("session_id is required");
    std::string nonce;
    if (auto n = body.find("nonce"); n != body.end() && !n->is_null()) {
        if (!n->is_string() || n->get<std::string>().empty()) bad_request("nonce must be a non-empty string");
        nonce = endpoint + '\n' + n->get<std::string>();
    }

    auto s = session(sid->get<std::string>());
    std::lock_guard lock(s->mutex);
    if (!nonce.empty()) {
        if (auto it = s->nonces.find(nonce); it != s->nonces.end()) {
            ApiResponse cached = it->second;
            cached.headers["X-Replayed"] = "true";
            return cached;
        }
    }
    ApiResponse response;
    try {
        response = fn(*s, body);
    } catch (const ApiFailure& f) {
        response = error_response(f.status, f.code, f.message);
    }
    if (!nonce.empty() && config_.nonce_memory > 0) {
        s->nonces.emplace(nonce, response);
        s->nonce_order.push_back(nonce);
        while (s->nonce_order.size() > config_.nonce_memory) {
            s->nonces.erase(s->nonce_order.front());
            s->nonce_order.pop_front();
        }
    }
    return response;
}

void SearchService::run_search(Session& s) const {
    s.query = s.canvas.build_query();
    s.ranking = rank_screens(s.query, *index_, config_.search);
}

ApiResponse SearchService::stroke(Session& s, const json& body) {
    auto points = body.find("points");
    if (points == body.end()) bad_request("points is required");
    s.canvas.add_stroke(parse_points(*points));
    s.prediction = recognizer_->classify(s.canvas.current_strokes());
    return json_response(200, {{"top3", top3_json(s.prediction)}, {"strokes", s.canvas.current_strokes().size()}});
}

namespace {

json page_json(const std::optional<Ranking>& ranking, const CorpusIndex& index, std::size_t page) {
    json out{{"page", page}, {"page_size", kPageSize}, {"total", ranking ? ranking->total() : 0}};
    json results = json::array();
    if (ranking) {
        const auto hits = ranking->page(page);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            const auto& id = index.screen(hits[i].screen).id;
            results.push_back({{"rank", page * kPageSize + i + 1},
                               {"screen_id", id},
                               {"score", hits[i].score},
                               {"thumb", "/screens/" + id + "/thumb"},
                               {"full", "/screens/" + id + "/full"}});
        }
    }
    out["results"] = std::move(results);
    return out;
}

}  // namespace

ApiResponse SearchService::element_done(Session& s, const json& body) {
    if (s.canvas.current_strokes().empty() || !s.prediction) {
        throw ApiFailure{409, api_error::kInvalidState, "no strokes to commit"};
    }
    Category chosen = s.prediction->top[0].category;
    if (auto c = body.find("chosen"); c != body.end() && !c->is_null()) {
        if (!c->is_string()) bad_request("chosen must be a category name");
        const auto parsed = parse_category(c->get<std::string>());
        if (!parsed || !s.prediction->offers(*parsed)) {
            throw ApiFailure{400, api_error::kInvalidChoice, "chosen must be one of the current top-3 categories"};
        }
        chosen = *parsed;
    }
    const PlacedElement& el = s.canvas.commit_element(chosen);
    json committed{{"category", name(el.category)}, {"bbox", bbox_json(el.bbox)}};
    s.prediction.reset();
    run_search(s);
    json page = page_json(s.ranking, *index_, 0);
    page["committed"] = std::move(committed);
    page["elements"] = s.canvas.committed().size();
    page["query"] = query_json(s.query);
    return json_response(200, page);
}

ApiResponse SearchService::undo(Session& s) {
    const bool noop = s.canvas.undo_stroke() != EditOutcome::Applied;
    if (!noop) {
        s.prediction.reset();
        if (!s.canvas.current_strokes().empty()) s.prediction = recognizer_->classify(s.canvas.current_strokes());
    }
    return json_response(200, {{"noop", noop}, {"top3", top3_json(s.prediction)}, {"strokes", s.canvas.current_strokes().size()}});
}

ApiResponse SearchService::redo(Session& s) {
    const bool noop = s.canvas.redo_stroke() != EditOutcome::Applied;
    if (!noop) s.prediction = recognizer_->classify(s.canvas.current_strokes());
    return json_response(200, {{"noop", noop}, {"top3", top3_json(s.prediction)}, {"strokes", s.canvas.current_strokes().size()}});
}

ApiResponse SearchService::remove_last(Session& s) {
    const bool noop = s.canvas.remove_last_icon() != EditOutcome::Applied;
    if (!noop) {
        if (s.canvas.committed().empty()) {
            s.query = {};
            s.ranking.reset();
        } else {
            run_search(s);
        }
    }
    json out = page_json(s.ranking, *index_, 0);
    out["noop"] = noop;
    out["elements"] = s.canvas.committed().size();
    out["query"] = query_json(s.query);
    return json_response(200, out);
}

ApiResponse SearchService::feedback(Session& s, const json& body) {
    auto vote = body.find("vote");
    if (vote == body.end() || !vote->is_string() || (*vote != "up" && *vote != "down")) {
        throw ApiFailure{400, api_error::kInvalidVote, "vote must be \"up\" or \"down\""};
    }
    SessionSnapshot snap;
    snap.canvas = s.canvas.dims();
    snap.elements = s.canvas.committed();
    nlohmann::ordered_json record;
    record["session_id"] = s.id;
    record["timestamp"] = utc_timestamp();
    record["vote"] = vote->get<std::string>();
    if (auto sc = body.find("screen_id"); sc != body.end() && sc->is_string()) record["screen_id"] = sc->get<std::string>();
    record["query"] = nlohmann::ordered_json::parse(format_snapshot(snap));
    log_feedback(record.dump());
    return json_response(200, {{"ok", true}});
}

void SearchService::log_feedback(const std::string& line) {
    if (config_.feedback_log.empty()) return;
    std::lock_guard lock(feedback_mutex_);
    std::ofstream out(config_.feedback_log, std::ios::app | std::ios::binary);
    out << line << '\n';
    out.flush();
    if (!out) throw ApiFailure{500, api_error::kInternal, "cannot append to the feedback log"};
}

ApiResponse SearchService::results(const ApiRequest& request) {
    auto sid = request.params.find("session_id");
    if (sid == request.params.end() || sid->second.empty()) bad_request("session_id is required");
    std::size_t page = 0;
    if (auto p = request.params.find("page"); p != request.params.end()) {
        const auto& text = p->second;
        if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos) {
            throw ApiFailure{400, api_error::kInvalidPage, "page must be a non-negative integer"};
        }
        page = std::stoul(text);
    }
    auto s = session(sid->second);
    std::lock_guard lock(s->mutex);
    if (!s->ranking) throw ApiFailure{409, api_error::kNoSearch, "no search has run in this session"};
    return json_response(200, page_json(s->ranking, *index_, page));
}

ApiResponse SearchService::screen_image(const std::string& id, const std::string& kind) {
    if (index_->find(id) < 0) throw ApiFailure{404, api_error::kUnknownScreen, "unknown screen " + id};
    for (const char* ext : {".png", ".jpg", ".jpeg", ".webp"}) {
        const auto path = config_.screens_dir / kind / (id + ext);
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        ApiResponse r;
        r.content_type = content_type_for(path);
        r.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        r.headers["Cache-Control"] = "public, max-age=86400, immutable";
        char etag[24];
        std::snprintf(etag, sizeof etag, "\"%016llx\"",
                      static_cast<unsigned long long>(detail::fnv1a(
                          reinterpret_cast<const std::uint8_t*>(r.body.data()), r.body.size())));
        r.headers["ETag"] = etag;
        return r;
    }
    throw ApiFailure{404, api_error::kImageMissing, "no " + kind + " image for screen " + id};
}

ApiResponse SearchService::handle(const ApiRequest& request) {
    try {
        const auto& p = request.path;
        const bool get = request.method == "GET";
        const bool post = request.method == "POST";
        auto route = [&](bool method_ok) {
            if (!method_ok) throw ApiFailure{405, api_error::kMethodNotAllowed, request.method + " not allowed on " + p};
        };
        using Fn = std::function<ApiResponse(Session&, const json&)>;
        if (p == "/api/session") {
            route(post);
            return create_session(request);
        }
        if (p == "/api/stroke") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json& b) { return stroke(s, b); }));
        }
        if (p == "/api/element/done") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json& b) { return element_done(s, b); }));
        }
        if (p == "/api/stroke/undo") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json&) { return undo(s); }));
        }
        if (p == "/api/stroke/redo") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json&) { return redo(s); }));
        }
        if (p == "/api/element/remove-last") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json&) { return remove_last(s); }));
        }
        if (p == "/api/feedback") {
            route(post);
            return with_session(request, p, Fn([this](Session& s, const json& b) { return feedback(s, b); }));
        }
        if (p == "/api/results") {
            route(get);
            return results(request);
        }
        if (p == "/api/health") {
            route(get);
            return json_response(200, {{"status", "ok"},
                                       {"screens", index_->screen_count()},
                                       {"recognizer", std::string(recognizer_->backend())},
                                       {"sessions", session_count()}});
        }
        if (p.rfind("/screens/", 0) == 0) {
            route(get);
            const auto rest = p.substr(9);
            const auto slash = rest.rfind('/');
            if (slash != std::string::npos && slash > 0) {
                const auto kind = rest.substr(slash + 1);
                if (kind == "thumb" || kind == "full") return screen_image(rest.substr(0, slash), kind);
            }
        }
        throw ApiFailure{404, api_error::kNotFound, "no route for " + p};
    } catch (const ApiFailure& f) {
        return error_response(f.status, f.code, f.message);
    } catch (const Error& e) {
        const int status = e.code() == ErrorCode::InvalidState ? 409 : 400;
        return error_response(status, status == 409 ? api_error::kInvalidState : api_error::kBadRequest, e.what());
    } catch (const std::exception& e) {
        return error_response(500, api_error::kInternal, e.what());
    }
}

}  // namespace sketchsearch
