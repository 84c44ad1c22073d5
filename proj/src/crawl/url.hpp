// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace tibcorpus::crawl {

/// Parsed http(s) URL. Scheme and host are lowercase; the path has its dot
/// segments resolved; fragments are dropped at parse time.
struct Url {
    std::string scheme;
    std::string host;
    int port = -1;  // -1 when the default for the scheme
    std::string path = "/";
    std::string query;  // without '?'

    std::string to_string() const;
};

/// Parses an absolute http(s) URL; nullopt for anything else.
std::optional<Url> parse_url(std::string_view raw);

/// Normalized form of an absolute URL string (lowercased scheme/host, no
/// fragment, resolved dot segments, default port dropped). Throws ParseError
/// on malformed input.
std::string normalize_url(std::string_view raw);

/// RFC 3986 reference resolution against a base. Returns the normalized
/// absolute URL, or nullopt for fragment-only references and non-http(s)
/// schemes.
std::optional<std::string> resolve_reference(const Url& base, std::string_view ref);

/// Registrable domain (public suffix + one label) from the bundled
/// public-suffix snapshot; a path overrides the snapshot when configured.
class PublicSuffixList {
public:
    /// Built-in snapshot.
    static const PublicSuffixList& builtin();
    static PublicSuffixList from_file(const std::string& path);
    static PublicSuffixList from_rules(std::string_view rules_text);

    /// Registrable domain of a lowercase hostname. Hosts that are themselves
    /// public suffixes, and IP literals, map to themselves.
    std::string registrable_domain(std::string_view host) const;

private:
    // Rules keyed by their label string; wildcards are stored under the
    // parent labels ("*.ck" -> "ck").
    std::unordered_set<std::string> exact_;
    std::unordered_set<std::string> wildcard_;
    std::unordered_set<std::string> exception_;
};

/// True iff both absolute URLs share a registrable domain (case-insensitive).
/// Throws ParseError on malformed URLs.
bool same_root_domain(std::string_view url_a, std::string_view url_b,
                      const PublicSuffixList& psl = PublicSuffixList::builtin());

}  // namespace tibcorpus::crawl
