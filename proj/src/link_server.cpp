#include "detail.hpp"
#include "honeysheets/honeylink.hpp"

#include <charconv>

namespace honeysheets::honeylink {

std::optional<std::string> token_from_path(std::string_view path, std::size_t token_length) {
    if (const auto q = path.find_first_of("?#"); q != std::string_view::npos)
        path = path.substr(0, q);
    constexpr std::string_view prefix = "/t/";
    if (path.substr(0, prefix.size()) != prefix)
        return std::nullopt;
    std::string_view token = path.substr(prefix.size());
    if (token.size() != token_length)
        return std::nullopt;
    for (char c : token)
        if (kTokenAlphabet.find(c) == std::string_view::npos)
            return std::nullopt;
    return std::string(token);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::optional<std::string> find_header(const std::vector<Header>& headers, std::string_view name) {
    const std::string wanted = detail::to_lower(name);
    for (const auto& [key, value] : headers)
        if (detail::to_lower(key) == wanted)
            return value;
    return std::nullopt;
}

} // namespace

HttpResponse LinkServer::handle(const HttpRequest& request, Timestamp received_at) {
    AccessLogEntry entry;
    entry.ip = request.remote_ip;
    entry.port = request.remote_port;
    entry.method = request.method;
    entry.path = request.path;
    entry.headers = request.headers;
    entry.received_at = received_at;

    if (options_.trust_forwarded) {
        if (auto xff = find_header(request.headers, "X-Forwarded-For")) {
            std::string_view first = *xff;
            first = trim(first.substr(0, first.find(',')));
            if (!first.empty())
                entry.ip = std::string(first);
        }
        if (auto xfp = find_header(request.headers, "X-Forwarded-Port")) {
            int port = 0;
            const std::string_view v = trim(*xfp);
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), port);
            if (ec == std::errc{} && p == v.data() + v.size() && port >= 0 && port <= 65535)
                entry.port = port;
        }
    }

    const HoneyLink* link = nullptr;
    if (request.method == "GET")
        if (auto token = token_from_path(request.path, registry_.token_length()))
            link = registry_.resolve(*token);
    if (link)
        entry.token = link->token;

    log_.append(std::move(entry));

    HttpResponse response;
    if (link) {
        response.status = 302;
        response.headers.emplace_back("Location", registry_.redirect_target());
        response.headers.emplace_back("Cache-Control", "no-store");
    } else {
        response.status = 404;
        response.body = "Not Found\n";
    }
    return response;
}

} // namespace honeysheets::honeylink
