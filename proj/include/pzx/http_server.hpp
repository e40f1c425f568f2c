#pragma once

#include "pzx/api.hpp"

#include <memory>
#include <string>

namespace pzx {

/// Serves an Api over HTTP. All /api/v1 methods are forwarded to the router.
class HttpServer {
public:
    explicit HttpServer(Api& api);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    bool listen_after_bind();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace pzx
