// SPDX-License-Identifier: Apache-2.0
#include "crawl/url.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <vector>

#include "common/errors.hpp"

namespace tibcorpus::crawl {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

/// Removes "." and ".." segments per RFC 3986 §5.2.4.
std::string remove_dot_segments(std::string_view path) {
    std::vector<std::string_view> stack;
    std::size_t i = 0;
    while (i < path.size()) {
        std::size_t j = path.find('/', i + 1);
        if (j == std::string_view::npos) {
            j = path.size();
        }
        const std::string_view seg = path.substr(i, j - i);  // includes leading '/'
        if (seg == "/.") {
            // skip
        } else if (seg == "/..") {
            if (!stack.empty()) {
                stack.pop_back();
            }
        } else {
            stack.push_back(seg);
        }
        i = j;
    }
    std::string out;
    for (const auto seg : stack) {
        out += seg;
    }
    // Trailing "/." or "/.." leave a directory reference.
    if (!path.empty() && (path.ends_with("/.") || path.ends_with("/.."))) {
        out += '/';
    }
    if (out.empty()) {
        out = "/";
    }
    return out;
}

int default_port(std::string_view scheme) { return scheme == "https" ? 443 : 80; }

}  // namespace

std::string Url::to_string() const {
    std::string out = scheme + "://" + host;
    if (port >= 0 && port != default_port(scheme)) {
        out += ':';
        out += std::to_string(port);
    }
    out += path;
    if (!query.empty()) {
        out += '?';
        out += query;
    }
    return out;
}

std::optional<Url> parse_url(std::string_view raw) {
    const std::size_t scheme_end = raw.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) {
        return std::nullopt;
    }
    Url url;
    url.scheme = to_lower(raw.substr(0, scheme_end));
    if (url.scheme != "http" && url.scheme != "https") {
        return std::nullopt;
    }
    std::string_view rest = raw.substr(scheme_end + 3);

    const std::size_t frag = rest.find('#');
    if (frag != std::string_view::npos) {
        rest = rest.substr(0, frag);
    }
    std::size_t authority_end = rest.find_first_of("/?");
    if (authority_end == std::string_view::npos) {
        authority_end = rest.size();
    }
    std::string_view authority = rest.substr(0, authority_end);
    const std::size_t at = authority.rfind('@');
    if (at != std::string_view::npos) {
        authority = authority.substr(at + 1);
    }
    const std::size_t colon = authority.rfind(':');
    if (colon != std::string_view::npos &&
        authority.find(']') == std::string_view::npos) {  // not IPv6 literal
        const std::string_view port_str = authority.substr(colon + 1);
        if (port_str.empty() ||
            !std::all_of(port_str.begin(), port_str.end(),
                         [](unsigned char c) { return std::isdigit(c); })) {
            return std::nullopt;
        }
        url.port = std::stoi(std::string(port_str));
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) {
        return std::nullopt;
    }
    url.host = to_lower(authority);
    if (url.port == default_port(url.scheme)) {
        url.port = -1;
    }

    std::string_view path_query = rest.substr(authority_end);
    const std::size_t q = path_query.find('?');
    std::string_view path = q == std::string_view::npos ? path_query : path_query.substr(0, q);
    if (q != std::string_view::npos) {
        url.query = std::string(path_query.substr(q + 1));
    }
    url.path = path.empty() ? "/" : remove_dot_segments(path);
    return url;
}

std::string normalize_url(std::string_view raw) {
    const auto url = parse_url(raw);
    if (!url) {
        throw ParseError("crawl: malformed URL: " + std::string(raw));
    }
    return url->to_string();
}

std::optional<std::string> resolve_reference(const Url& base, std::string_view ref) {
    // Trim ASCII whitespace.
    while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.front()))) {
        ref.remove_prefix(1);
    }
    while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.back()))) {
        ref.remove_suffix(1);
    }
    if (ref.empty() || ref.front() == '#') {
        return std::nullopt;  // fragment-only reference stays on the page
    }
    // Absolute URL with a scheme?
    const std::size_t colon = ref.find(':');
    if (colon != std::string_view::npos) {
        const std::string_view scheme = ref.substr(0, colon);
        const bool scheme_like =
            !scheme.empty() && std::isalpha(static_cast<unsigned char>(scheme[0])) &&
            std::all_of(scheme.begin(), scheme.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '+' || c == '-' || c == '.';
            });
        if (scheme_like && ref.substr(colon).starts_with("://")) {
            const auto url = parse_url(ref);
            if (!url) {
                return std::nullopt;
            }
            return url->to_string();
        }
        if (scheme_like && scheme != "http" && scheme != "https" &&
            ref.find("://") == std::string_view::npos) {
            return std::nullopt;  // mailto:, javascript:, tel:, data:
        }
    }

    if (ref.starts_with("//")) {
        const auto url = parse_url(base.scheme + ":" + std::string(ref));
        if (!url) {
            return std::nullopt;
        }
        return url->to_string();
    }
    Url out = base;
    out.query.clear();

    const std::size_t frag = ref.find('#');
    if (frag != std::string_view::npos) {
        ref = ref.substr(0, frag);
    }
    std::string_view path_part = ref;
    const std::size_t q = ref.find('?');
    if (q != std::string_view::npos) {
        out.query = std::string(ref.substr(q + 1));
        path_part = ref.substr(0, q);
    }
    if (path_part.empty()) {
        out.path = base.path;
    } else if (path_part.front() == '/') {
        out.path = remove_dot_segments(path_part);
    } else {
        const std::size_t last_slash = base.path.rfind('/');
        const std::string merged =
            base.path.substr(0, last_slash + 1) + std::string(path_part);
        out.path = remove_dot_segments(merged);
    }
    return out.to_string();
}

namespace {

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= host.size(); ++i) {
        if (i == host.size() || host[i] == '.') {
            labels.push_back(host.substr(start, i - start));
            start = i + 1;
        }
    }
    return labels;
}

bool looks_like_ipv4(const std::vector<std::string_view>& labels) {
    if (labels.size() != 4) {
        return false;
    }
    for (const auto label : labels) {
        if (label.empty() || label.size() > 3 ||
            !std::all_of(label.begin(), label.end(),
                         [](unsigned char c) { return std::isdigit(c); })) {
            return false;
        }
    }
    return true;
}

}  // namespace

PublicSuffixList PublicSuffixList::from_rules(std::string_view rules_text) {
    PublicSuffixList psl;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rules_text.size(); ++i) {
        if (i != rules_text.size() && rules_text[i] != '\n') {
            continue;
        }
        std::string_view line = rules_text.substr(start, i - start);
        start = i + 1;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && line.front() == ' ') {
            line.remove_prefix(1);
        }
        if (line.empty() || line.starts_with("//")) {
            continue;
        }
        if (line.front() == '!') {
            psl.exception_.insert(to_lower(line.substr(1)));
        } else if (line.starts_with("*.")) {
            psl.wildcard_.insert(to_lower(line.substr(2)));
        } else {
            psl.exact_.insert(to_lower(line));
        }
    }
    return psl;
}

PublicSuffixList PublicSuffixList::from_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("crawl: cannot read public suffix list: " + path);
    }
    const std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return from_rules(data);
}

std::string PublicSuffixList::registrable_domain(std::string_view host_in) const {
    const std::string host = to_lower(host_in);
    const auto labels = split_labels(host);
    if (labels.empty() || looks_like_ipv4(labels)) {
        return host;
    }

    // Longest matching rule wins; exception rules beat everything and mean
    // "public suffix is the rule minus its leftmost label".
    const std::size_t n = labels.size();
    std::size_t suffix_labels = 1;  // default rule "*"
    std::string suffix;
    for (std::size_t i = 0; i < n; ++i) {
        suffix.clear();
        for (std::size_t k = i; k < n; ++k) {
            if (k > i) {
                suffix += '.';
            }
            suffix += labels[k];
        }
        const std::size_t len = n - i;
        if (exception_.count(suffix)) {
            suffix_labels = len - 1;
            break;
        }
        if (exact_.count(suffix)) {
            suffix_labels = std::max(suffix_labels, len);
        }
        if (i > 0 && wildcard_.count(suffix)) {
            suffix_labels = std::max(suffix_labels, len + 1);
        }
    }
    std::size_t want = suffix_labels + 1;
    if (want > n) {
        want = n;  // the host itself is a public suffix
    }
    std::string out;
    for (std::size_t k = n - want; k < n; ++k) {
        if (k > n - want) {
            out += '.';
        }
        out += labels[k];
    }
    return out;
}

bool same_root_domain(std::string_view url_a, std::string_view url_b,
                      const PublicSuffixList& psl) {
    const auto a = parse_url(url_a);
    const auto b = parse_url(url_b);
    if (!a || !b) {
        throw ParseError("crawl: same_root_domain needs absolute http(s) URLs");
    }
    return psl.registrable_domain(a->host) == psl.registrable_domain(b->host);
}

}  // namespace tibcorpus::crawl
