#include "detail.hpp"
#include "honeysheets/error.hpp"
#include "honeysheets/honeylink.hpp"

#include <cctype>

namespace honeysheets::honeylink {

using nlohmann::json;

std::string_view to_string(TargetClass c) {
    return c == TargetClass::Controlled ? "controlled" : "decoy_bank";
}

TargetClass target_class_from_string(std::string_view s) {
    if (s == "controlled")
        return TargetClass::Controlled;
    if (s == "decoy_bank")
        return TargetClass::DecoyBank;
    throw Error(Errc::ParseError, "unknown target class '" + std::string(s) + "'");
}

std::optional<UrlParts> parse_absolute_url(std::string_view url) {
    const auto sep = url.find("://");
    if (sep == std::string_view::npos)
        return std::nullopt;
    UrlParts parts;
    parts.scheme = detail::to_lower(url.substr(0, sep));
    if (parts.scheme != "http" && parts.scheme != "https")
        return std::nullopt;

    std::string_view rest = url.substr(sep + 3);
    const auto slash = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, slash);
    parts.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
    if (const auto at = authority.rfind('@'); at != std::string_view::npos)
        return std::nullopt; // no credentials in honey URLs
    std::string_view host = authority;
    if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        std::string_view port = authority.substr(colon + 1);
        if (port.empty() || port.size() > 5)
            return std::nullopt;
        for (char c : port)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return std::nullopt;
        host = authority.substr(0, colon);
    }
    if (host.empty() || host.front() == '.' || host.back() == '.' || host.front() == '-')
        return std::nullopt;
    for (char c : host)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-')
            return std::nullopt;
    for (char c : parts.path)
        if (static_cast<unsigned char>(c) <= 0x20 || c == 0x7f)
            return std::nullopt;
    parts.host = detail::to_lower(host);
    return parts;
}

LinkRegistry::LinkRegistry(std::string controlled_domain, std::string redirect_target, std::size_t token_length)
    : controlled_domain_(detail::to_lower(controlled_domain)),
      redirect_target_(std::move(redirect_target)),
      token_length_(token_length) {
    if (token_length_ == 0 || token_length_ > 10)
        throw Error(Errc::ConfigMismatch, "token length must be in 1..10");
}

std::uint64_t LinkRegistry::keyspace() const {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < token_length_; ++i)
        n *= kTokenAlphabet.size();
    return n;
}

const HoneyLink* LinkRegistry::resolve(std::string_view token) const {
    auto it = links_.find(token);
    return it == links_.end() ? nullptr : &it->second;
}

std::vector<HoneyLink> LinkRegistry::links_for(std::string_view sheet_id) const {
    std::vector<HoneyLink> out;
    for (const auto& [token, link] : links_)
        if (link.sheet_id == sheet_id)
            out.push_back(link);
    return out;
}

std::string LinkRegistry::short_url(std::string_view token) const {
    return "https://" + controlled_domain_ + "/t/" + std::string(token);
}

void LinkRegistry::insert(HoneyLink link) {
    if (link.token.size() != token_length_)
        throw Error(Errc::ConfigMismatch, "token '" + link.token + "' has the wrong length");
    for (char c : link.token)
        if (kTokenAlphabet.find(c) == std::string_view::npos)
            throw Error(Errc::ConfigMismatch, "token '" + link.token + "' uses characters outside [a-zA-Z0-9]");
    auto token = link.token;
    if (!links_.emplace(std::move(token), std::move(link)).second)
        throw Error(Errc::ConfigMismatch, "duplicate token");
}

namespace {

std::string draw_token(std::size_t length, Rng& rng) {
    std::string token(length, '0');
    for (char& c : token)
        c = kTokenAlphabet[rng.below(kTokenAlphabet.size())];
    return token;
}

std::string token_from_index(std::uint64_t index, std::size_t length) {
    std::string token(length, '0');
    for (std::size_t i = length; i-- > 0;) {
        token[i] = kTokenAlphabet[index % kTokenAlphabet.size()];
        index /= kTokenAlphabet.size();
    }
    return token;
}

} // namespace

HoneyLink mint_token(LinkRegistry& registry, TargetClass target_class, std::string_view destination,
                     std::string_view sheet_id, Rng& rng) {
    const auto url = parse_absolute_url(destination);
    if (!url)
        throw Error(Errc::BadDestination, "'" + std::string(destination) + "' is not an absolute http(s) URL");
    if (target_class == TargetClass::Controlled && url->host != registry.controlled_domain())
        throw Error(Errc::BadDestination,
                    "controlled link must point at " + registry.controlled_domain() + ", got " + url->host);
    if (target_class == TargetClass::DecoyBank && url->host == registry.controlled_domain())
        throw Error(Errc::BadDestination, "decoy link must not point at the controlled domain");

    const std::uint64_t space = registry.keyspace();
    if (registry.size() >= space)
        throw Error(Errc::KeyspaceExhausted, "all " + std::to_string(space) + " tokens are in use");

    std::string token;
    constexpr int kRandomAttempts = 64;
    for (int attempt = 0; attempt < kRandomAttempts; ++attempt) {
        token = draw_token(registry.token_length(), rng);
        if (!registry.resolve(token))
            break;
        token.clear();
    }
    if (token.empty()) {
        // Dense registry: walk from a random start to the next free token.
        const std::uint64_t start = rng.below(space);
        for (std::uint64_t i = 0; i < space; ++i) {
            std::string candidate = token_from_index((start + i) % space, registry.token_length());
            if (!registry.resolve(candidate)) {
                token = std::move(candidate);
                break;
            }
        }
    }

    HoneyLink link{token, target_class, std::string(destination), std::string(sheet_id)};
    registry.insert(link);
    return link;
}

json to_json(const LinkRegistry& registry) {
    json links = json::array();
    for (const auto& [token, link] : registry.links())
        links.push_back({{"token", link.token},
                         {"target_class", to_string(link.target_class)},
                         {"destination", link.destination},
                         {"sheet_id", link.sheet_id}});
    return json{{"controlled_domain", registry.controlled_domain()},
                {"redirect_target", registry.redirect_target()},
                {"token_length", registry.token_length()},
                {"links", std::move(links)}};
}

LinkRegistry registry_from_json(const json& j) {
    return detail::parse_guard("registry", [&] {
        LinkRegistry reg(j.at("controlled_domain").get<std::string>(), j.at("redirect_target").get<std::string>(),
                         j.value("token_length", kTokenLength));
        for (const json& l : j.at("links"))
            reg.insert(HoneyLink{l.at("token").get<std::string>(),
                                 target_class_from_string(l.at("target_class").get<std::string>()),
                                 l.at("destination").get<std::string>(), l.at("sheet_id").get<std::string>()});
        return reg;
    });
}

LinkRegistry load_registry(const std::string& path) {
    return registry_from_json(detail::read_json_file(path));
}

void save_registry(const LinkRegistry& registry, const std::string& path) {
    detail::write_file(path, detail::dump(to_json(registry), 2) + "\n");
}

} // namespace honeysheets::honeylink
