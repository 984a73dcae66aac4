#pragma once

#include "honeysheets/honeylink.hpp"

#include <memory>
#include <string>

namespace honeysheets::honeylink {

/// HTTP/1.1 listener in front of a LinkServer. Requests are handled on a
/// worker pool; every method and path is routed to LinkServer::handle.
class HttpServer {
public:
    struct Options {
        int worker_threads = 16;
    };

    explicit HttpServer(LinkServer& core);
    HttpServer(LinkServer& core, Options options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to host:port (port 0 picks a free one). Returns the bound port or -1.
    int bind(const std::string& host, int port);

    /// Serves until stop() is called. Returns false if the loop failed.
    bool listen();

    void stop();
    void wait_until_ready() const;
    bool is_running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace honeysheets::honeylink
