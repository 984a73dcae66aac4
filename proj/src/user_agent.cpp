#include "honeysheets/honeylink.hpp"

namespace honeysheets::honeylink {

std::string_view to_string(Browser b) {
    switch (b) {
    case Browser::Chrome: return "Chrome";
    case Browser::Firefox: return "Firefox";
    case Browser::Safari: return "Safari";
    case Browser::Samsung: return "Samsung";
    case Browser::Other: break;
    }
    return "Other";
}

std::string_view to_string(OperatingSystem os) {
    switch (os) {
    case OperatingSystem::Windows: return "Windows";
    case OperatingSystem::Linux: return "Linux";
    case OperatingSystem::Macintosh: return "Macintosh";
    case OperatingSystem::Android: return "Android";
    case OperatingSystem::Other: break;
    }
    return "Other";
}

namespace {

template <typename T>
struct Marker {
    std::string_view needle;
    T value;
};

// Order is precedence. Chrome and iOS Firefox UAs also carry "Safari",
// Samsung Internet carries both, and Android UAs carry "Linux".
constexpr Marker<Browser> kBrowserMarkers[] = {
    {"SamsungBrowser", Browser::Samsung},
    {"Chrome", Browser::Chrome},
    {"CriOS", Browser::Chrome},
    {"Firefox", Browser::Firefox},
    {"FxiOS", Browser::Firefox},
    {"Safari", Browser::Safari},
};

// Browsers outside the four families that still carry their markers.
constexpr std::string_view kForeignBrowsers[] = {"Edge/", "Edg/", "OPR/", "Opera", "YaBrowser", "UCBrowser",
                                                 "MSIE", "Trident/"};

constexpr Marker<OperatingSystem> kOsMarkers[] = {
    {"Android", OperatingSystem::Android},
    {"Windows", OperatingSystem::Windows},
    {"Macintosh", OperatingSystem::Macintosh},
    {"Linux", OperatingSystem::Linux},
};

} // namespace

UserAgentClass parse_user_agent(std::string_view ua) {
    UserAgentClass out;
    bool foreign = false;
    for (auto f : kForeignBrowsers)
        foreign = foreign || ua.find(f) != std::string_view::npos;
    for (const auto& m : kBrowserMarkers) {
        if (foreign)
            break;
        if (ua.find(m.needle) != std::string_view::npos) {
            out.browser = m.value;
            break;
        }
    }
    for (const auto& m : kOsMarkers) {
        if (ua.find(m.needle) != std::string_view::npos) {
            out.os = m.value;
            break;
        }
    }
    return out;
}

} // namespace honeysheets::honeylink
