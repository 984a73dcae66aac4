#include "honeysheets/http_server.hpp"

#include <httplib.h>

namespace honeysheets::honeylink {

namespace {

bool is_synthetic_header(const std::string& name) {
    // httplib injects the socket endpoints as pseudo headers.
    return name == "REMOTE_ADDR" || name == "REMOTE_PORT" || name == "LOCAL_ADDR" || name == "LOCAL_PORT";
}

} // namespace

struct HttpServer::Impl {
    LinkServer& core;
    httplib::Server server;
};

HttpServer::HttpServer(LinkServer& core) : HttpServer(core, Options{}) {}

HttpServer::HttpServer(LinkServer& core, Options options) : impl_(new Impl{core, {}}) {
    const int workers = options.worker_threads > 0 ? options.worker_threads : 1;
    impl_->server.new_task_queue = [workers] { return new httplib::ThreadPool(static_cast<size_t>(workers)); };
    impl_->server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request;
        request.method = req.method;
        request.path = req.target.empty() ? req.path : req.target;
        request.remote_ip = req.remote_addr;
        request.remote_port = req.remote_port;
        for (const auto& [name, value] : req.headers)
            if (!is_synthetic_header(name))
                request.headers.emplace_back(name, value);

        const HttpResponse response = impl_->core.handle(request, now_utc());
        res.status = response.status;
        for (const auto& [name, value] : response.headers)
            res.set_header(name, value);
        if (!response.body.empty())
            res.set_content(response.body, "text/plain");
        return httplib::Server::HandlerResponse::Handled;
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0)
        return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() {
    return impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running())
        impl_->server.stop();
}

void HttpServer::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

bool HttpServer::is_running() const {
    return impl_->server.is_running();
}

} // namespace honeysheets::honeylink
