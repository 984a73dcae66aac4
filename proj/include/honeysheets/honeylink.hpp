#pragma once

#include "honeysheets/rng.hpp"
#include "honeysheets/time.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace honeysheets::honeylink {

enum class TargetClass { Controlled, DecoyBank };

std::string_view to_string(TargetClass c);
TargetClass target_class_from_string(std::string_view s);

struct HoneyLink {
    std::string token;
    TargetClass target_class = TargetClass::Controlled;
    /// The page the short URL pretends to lead to.
    std::string destination;
    std::string sheet_id;

    friend bool operator==(const HoneyLink&, const HoneyLink&) = default;
};

inline constexpr std::size_t kTokenLength = 6;
inline constexpr std::string_view kTokenAlphabet =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

/// Parts of an absolute http(s) URL; nullopt when the text is not one.
struct UrlParts {
    std::string scheme;
    std::string host;
    std::string path;
};
std::optional<UrlParts> parse_absolute_url(std::string_view url);

/// Token -> link mapping plus the redirect target used after logging.
/// The tracker serves every token at https://<controlled_domain>/t/<token>.
class LinkRegistry {
public:
    LinkRegistry() = default;
    LinkRegistry(std::string controlled_domain, std::string redirect_target,
                 std::size_t token_length = kTokenLength);

    const std::string& controlled_domain() const { return controlled_domain_; }
    const std::string& redirect_target() const { return redirect_target_; }
    void set_redirect_target(std::string target) { redirect_target_ = std::move(target); }
    std::size_t token_length() const { return token_length_; }

    /// Number of distinct tokens of token_length() over the alphabet.
    std::uint64_t keyspace() const;

    std::size_t size() const { return links_.size(); }
    const HoneyLink* resolve(std::string_view token) const;
    std::vector<HoneyLink> links_for(std::string_view sheet_id) const;
    const std::map<std::string, HoneyLink, std::less<>>& links() const { return links_; }

    /// Short URL placed in the spreadsheet cell for this token.
    std::string short_url(std::string_view token) const;

    /// Throws Error(ConfigMismatch) when the token is already taken.
    void insert(HoneyLink link);

private:
    std::string controlled_domain_;
    std::string redirect_target_;
    std::size_t token_length_ = kTokenLength;
    std::map<std::string, HoneyLink, std::less<>> links_;
};

/// Draws a fresh token (re-drawn on collision), stores the link and returns it.
///
/// Controlled links must point at the registry's controlled domain. Throws
/// Error(BadDestination) for anything that is not an absolute http(s) URL and
/// Error(KeyspaceExhausted) when every token is taken.
HoneyLink mint_token(LinkRegistry& registry, TargetClass target_class, std::string_view destination,
                     std::string_view sheet_id, Rng& rng);

nlohmann::json to_json(const LinkRegistry& registry);
LinkRegistry registry_from_json(const nlohmann::json& j);
LinkRegistry load_registry(const std::string& path);
void save_registry(const LinkRegistry& registry, const std::string& path);

// --- user agents ---------------------------------------------------------

enum class Browser { Chrome, Firefox, Safari, Samsung, Other };
enum class OperatingSystem { Windows, Linux, Macintosh, Android, Other };

std::string_view to_string(Browser b);
std::string_view to_string(OperatingSystem os);

struct UserAgentClass {
    Browser browser = Browser::Other;
    OperatingSystem os = OperatingSystem::Other;

    friend bool operator==(const UserAgentClass&, const UserAgentClass&) = default;
};

/// Substring classification. Browser precedence is SamsungBrowser, Chrome,
/// Safari, Firefox; OS precedence is Android, Windows, Macintosh, Linux.
/// Edge, Opera and similar derivatives classify as Browser::Other.
UserAgentClass parse_user_agent(std::string_view header_value);

// --- access log ----------------------------------------------------------

using Header = std::pair<std::string, std::string>;

struct AccessLogEntry {
    std::string ip;
    int port = 0;
    std::string method;
    std::string path;
    std::vector<Header> headers;
    Timestamp received_at;
    std::optional<std::string> token;

    /// First header with this name, compared case-insensitively.
    std::optional<std::string> header(std::string_view name) const;

    friend bool operator==(const AccessLogEntry&, const AccessLogEntry&) = default;
};

/// One JSON object per line, keys sorted, no trailing newline.
std::string serialize(const AccessLogEntry& entry);
/// Throws Error(ParseError).
AccessLogEntry parse_log_line(std::string_view line);

struct LogReadResult {
    std::vector<AccessLogEntry> entries;
    std::size_t bad_lines = 0;
};
LogReadResult read_access_log(const std::string& path);

/// Destination for serialized log lines. write_line returns false on failure.
class LogSink {
public:
    virtual ~LogSink() = default;
    virtual bool write_line(std::string_view line) = 0;
};

/// Appends to a file and flushes after every line.
class FileLogSink : public LogSink {
public:
    explicit FileLogSink(const std::string& path);
    ~FileLogSink() override;
    bool write_line(std::string_view line) override;

private:
    std::FILE* file_ = nullptr;
};

class MemoryLogSink : public LogSink {
public:
    bool write_line(std::string_view line) override;
    std::vector<std::string> lines() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> lines_;
};

/// Serializes appends through one lock so lines are never interleaved, and
/// keeps received_at non-decreasing by raising a late-arriving stamp to the
/// previous one.
class AccessLog {
public:
    explicit AccessLog(std::shared_ptr<LogSink> sink) : sink_(std::move(sink)) {}

    /// Returns the entry as written. Sink failures are counted, not thrown.
    AccessLogEntry append(AccessLogEntry entry);

    std::uint64_t written() const { return written_.load(); }
    std::uint64_t failures() const { return failures_.load(); }

private:
    std::shared_ptr<LogSink> sink_;
    std::mutex mutex_;
    std::optional<Timestamp> last_;
    std::atomic<std::uint64_t> written_{0};
    std::atomic<std::uint64_t> failures_{0};
};

// --- redirect server core --------------------------------------------------

struct HttpRequest {
    std::string method = "GET";
    std::string path;
    std::vector<Header> headers;
    std::string remote_ip;
    int remote_port = 0;
};

struct HttpResponse {
    int status = 404;
    std::vector<Header> headers;
    std::string body;
};

/// Transport-independent request handling: log first, then answer.
/// `/t/<token>` with a known token gets 302 to the registry redirect target;
/// everything else gets 404. Either way exactly one log entry is appended.
class LinkServer {
public:
    struct Options {
        /// Take the client address from X-Forwarded-For / X-Forwarded-Port,
        /// for deployments behind a reverse proxy.
        bool trust_forwarded = false;
    };

    LinkServer(const LinkRegistry& registry, AccessLog& log) : LinkServer(registry, log, Options{}) {}
    LinkServer(const LinkRegistry& registry, AccessLog& log, Options options)
        : registry_(registry), log_(log), options_(options) {}

    HttpResponse handle(const HttpRequest& request, Timestamp received_at);

    const LinkRegistry& registry() const { return registry_; }
    AccessLog& log() { return log_; }

private:
    const LinkRegistry& registry_;
    AccessLog& log_;
    Options options_;
};

/// Token named by a `/t/<token>` path (query string ignored), if the path has that shape.
std::optional<std::string> token_from_path(std::string_view path, std::size_t token_length = kTokenLength);

} // namespace honeysheets::honeylink
