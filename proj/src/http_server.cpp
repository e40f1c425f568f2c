#include "pzx/http_server.hpp"

#include <httplib.h>

namespace pzx {

struct HttpServer::Impl {
    Api& api;
    httplib::Server server;

    explicit Impl(Api& a) : api(a) {
        const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            HttpRequest r{req.method, req.path, {}, req.body};
            for (const auto& [k, v] : req.params) {
                r.query[k] = v;
            }
            const HttpResponse out = api.handle(r);
            res.status = out.status;
            for (const auto& [k, v] : out.headers) {
                res.set_header(k, v);
            }
            res.set_content(out.body, out.content_type.c_str());
        };
        const char* pattern = R"(/api/v1/.*)";
        server.Get(pattern, forward);
        server.Post(pattern, forward);
        server.Patch(pattern, forward);
        server.Delete(pattern, forward);
        server.Put(pattern, forward);
    }
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>(api)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        return impl_->server.bind_to_any_port(host);
    }
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) {
        impl_->server.stop();
    }
}

} // namespace pzx
