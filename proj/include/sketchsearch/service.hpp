#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "sketchsearch/corpus.hpp"
#include "sketchsearch/prediction.hpp"
#include "sketchsearch/query.hpp"
#include "sketchsearch/search.hpp"

namespace sketchsearch {

struct ServiceConfig {
    std::chrono::seconds session_ttl{3600};
    /// Screen images live at <screens_dir>/thumb/<id>.<ext> and
    /// <screens_dir>/full/<id>.<ext>.
    std::filesystem::path screens_dir;
    /// Empty disables feedback logging (votes are still validated).
    std::filesystem::path feedback_log;
    CanvasDims canvas;
    SearchOptions search;
    std::size_t nonce_memory = 256;  // remembered nonces per session
};

struct ApiRequest {
    std::string method;  // "GET", "POST"
    std::string path;
    std::map<std::string, std::string> params;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

/// The back end without the socket: routes requests to session state,
/// the recognizer and the search engine. Thread-safe; requests for one
/// session are serialized, different sessions run in parallel.
class SearchService {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    SearchService(std::shared_ptr<const CorpusIndex> index, std::shared_ptr<const Recognizer> recognizer,
                  ServiceConfig config, Clock clock = {});
    ~SearchService();

    ApiResponse handle(const ApiRequest& request);

    std::size_t session_count() const;
    const ServiceConfig& config() const { return config_; }

private:
    struct Session;

    std::shared_ptr<Session> session(const std::string& id);
    ApiResponse create_session(const ApiRequest& request);
    ApiResponse with_session(const ApiRequest& request, const std::string& endpoint,
                             const std::function<ApiResponse(Session&, const nlohmann::json& body)>& fn);
    ApiResponse results(const ApiRequest& request);
    ApiResponse screen_image(const std::string& id, const std::string& kind);
    void expire_sessions(std::chrono::steady_clock::time_point now);
    void log_feedback(const std::string& line);

    ApiResponse stroke(Session& s, const nlohmann::json& body);
    ApiResponse element_done(Session& s, const nlohmann::json& body);
    ApiResponse undo(Session& s);
    ApiResponse redo(Session& s);
    ApiResponse remove_last(Session& s);
    ApiResponse feedback(Session& s, const nlohmann::json& body);
    void run_search(Session& s) const;

    std::shared_ptr<const CorpusIndex> index_;
    std::shared_ptr<const Recognizer> recognizer_;
    ServiceConfig config_;
    Clock clock_;

    mutable std::mutex sessions_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex feedback_mutex_;
};

/// Error codes carried in every error body: {"error": {"code", "message"}}.
namespace api_error {
inline constexpr const char* kBadRequest = "bad_request";
inline constexpr const char* kEmptyStroke = "empty_stroke";
inline constexpr const char* kInvalidChoice = "invalid_choice";
inline constexpr const char* kInvalidVote = "invalid_vote";
inline constexpr const char* kInvalidPage = "invalid_page";
inline constexpr const char* kUnknownSession = "unknown_session";
inline constexpr const char* kUnknownScreen = "unknown_screen";
inline constexpr const char* kImageMissing = "image_missing";
inline constexpr const char* kNotFound = "not_found";
inline constexpr const char* kMethodNotAllowed = "method_not_allowed";
inline constexpr const char* kInvalidState = "invalid_state";
inline constexpr const char* kNoSearch = "no_search";
inline constexpr const char* kInternal = "internal";
}  // namespace api_error

/// Serves `service` over HTTP/1.1 until stop() is called.
class HttpServer {
public:
    explicit HttpServer(SearchService& service);
    ~HttpServer();

    /// Binds; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace sketchsearch
