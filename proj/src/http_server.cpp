#include <httplib.h>

#include "sketchsearch/service.hpp"

namespace sketchsearch {

struct HttpServer::Impl {
    SearchService& service;
    httplib::Server server;

    explicit Impl(SearchService& s) : service(s) {}

    void dispatch(const httplib::Request& req, httplib::Response& res) {
        ApiRequest request{req.method, req.path, {}, req.body};
        for (const auto& [k, v] : req.params) request.params.emplace(k, v);
        const ApiResponse r = service.handle(request);
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body, r.content_type);
    }
};

HttpServer::HttpServer(SearchService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& srv = impl_->server;
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
    srv.Get(".*", handler);
    srv.Post(".*", handler);
    srv.Put(".*", handler);
    srv.Delete(".*", handler);
    srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    auto& srv = impl_->server;
    if (port == 0) return srv.bind_to_any_port(host);
    return srv.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace sketchsearch
