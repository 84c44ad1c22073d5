// SPDX-License-Identifier: Apache-2.0
#include "crawl/html.hpp"

#include <algorithm>
#include <cctype>

#include "common/utf8.hpp"

namespace tibcorpus::crawl {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from) {
    if (needle.empty()) {
        return from;
    }
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        if (iequals(haystack.substr(i, needle.size()), needle)) {
            return i;
        }
    }
    return std::string_view::npos;
}

bool is_block_tag(std::string_view name) {
    static const char* kBlocks[] = {
        "p",       "div",     "br",     "li",      "ul",      "ol",     "tr",
        "td",      "th",      "table",  "h1",      "h2",      "h3",     "h4",
        "h5",      "h6",      "section", "article", "header",  "footer", "blockquote",
        "pre",     "hr",      "dt",     "dd",      "nav",     "aside",  "form",
        "fieldset", "figure", "figcaption", "address", "main",  "title",  "body"};
    for (const char* b : kBlocks) {
        if (iequals(name, b)) {
            return true;
        }
    }
    return false;
}

bool is_raw_text_tag(std::string_view name) {
    return iequals(name, "script") || iequals(name, "style") || iequals(name, "noscript") ||
           iequals(name, "template") || iequals(name, "textarea") || iequals(name, "head");
}

struct TagToken {
    std::string_view name;
    std::string_view body;  // attributes source
    bool closing = false;
    std::size_t end = 0;  // offset just past '>'
};

/// Parses the tag starting at html[pos] == '<'. Returns false for stray '<'.
bool parse_tag(std::string_view html, std::size_t pos, TagToken& tag) {
    std::size_t i = pos + 1;
    if (i >= html.size()) {
        return false;
    }
    if (html[i] == '/') {
        tag.closing = true;
        ++i;
    }
    const std::size_t name_start = i;
    while (i < html.size() &&
           (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-')) {
        ++i;
    }
    if (i == name_start) {
        return false;
    }
    tag.name = html.substr(name_start, i - name_start);
    // Find '>' respecting quoted attribute values.
    char quote = '\0';
    const std::size_t body_start = i;
    while (i < html.size()) {
        const char c = html[i];
        if (quote != '\0') {
            if (c == quote) {
                quote = '\0';
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            tag.body = html.substr(body_start, i - body_start);
            tag.end = i + 1;
            return true;
        }
        ++i;
    }
    return false;
}

/// Finds attribute `name` in a tag body; empty value if absent.
std::string_view find_attr(std::string_view body, std::string_view name) {
    std::size_t i = 0;
    while (i < body.size()) {
        while (i < body.size() && (std::isspace(static_cast<unsigned char>(body[i])) ||
                                   body[i] == '/')) {
            ++i;
        }
        const std::size_t attr_start = i;
        while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])) &&
               body[i] != '=' && body[i] != '/' ) {
            ++i;
        }
        const std::string_view attr = body.substr(attr_start, i - attr_start);
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) {
            ++i;
        }
        std::string_view value;
        if (i < body.size() && body[i] == '=') {
            ++i;
            while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) {
                ++i;
            }
            if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
                const char quote = body[i];
                const std::size_t vstart = ++i;
                while (i < body.size() && body[i] != quote) {
                    ++i;
                }
                value = body.substr(vstart, i - vstart);
                if (i < body.size()) {
                    ++i;
                }
            } else {
                const std::size_t vstart = i;
                while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])) &&
                       body[i] != '>') {
                    ++i;
                }
                value = body.substr(vstart, i - vstart);
            }
        }
        if (iequals(attr, name)) {
            return value;
        }
        if (attr.empty()) {
            ++i;  // avoid stalling on malformed input
        }
    }
    return {};
}

}  // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        const std::size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back('&');
            ++i;
            continue;
        }
        const std::string_view entity = text.substr(i + 1, semi - i - 1);
        bool handled = true;
        if (entity == "amp") {
            out.push_back('&');
        } else if (entity == "lt") {
            out.push_back('<');
        } else if (entity == "gt") {
            out.push_back('>');
        } else if (entity == "quot") {
            out.push_back('"');
        } else if (entity == "apos") {
            out.push_back('\'');
        } else if (entity == "nbsp") {
            out.push_back(' ');
        } else if (entity.size() >= 2 && entity[0] == '#') {
            char32_t cp = 0;
            bool ok = true;
            if (entity[1] == 'x' || entity[1] == 'X') {
                for (std::size_t k = 2; k < entity.size(); ++k) {
                    const char c = entity[k];
                    int v;
                    if (c >= '0' && c <= '9') v = c - '0';
                    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
                    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
                    else { ok = false; break; }
                    cp = cp * 16 + static_cast<char32_t>(v);
                }
                ok = ok && entity.size() > 2;
            } else {
                for (std::size_t k = 1; k < entity.size(); ++k) {
                    const char c = entity[k];
                    if (c < '0' || c > '9') { ok = false; break; }
                    cp = cp * 10 + static_cast<char32_t>(c - '0');
                }
            }
            if (ok && cp > 0 && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
                utf8::append(out, cp);
            } else {
                handled = false;
            }
        } else {
            handled = false;
        }
        if (handled) {
            i = semi + 1;
        } else {
            out.push_back('&');
            ++i;
        }
    }
    return out;
}

std::vector<std::string> extract_links(std::string_view html, const Url& base) {
    std::vector<std::string> links;
    std::unordered_set<std::string> seen;
    std::size_t i = 0;
    while (i < html.size()) {
        const std::size_t lt = html.find('<', i);
        if (lt == std::string_view::npos) {
            break;
        }
        if (html.substr(lt).starts_with("<!--")) {
            const std::size_t close = html.find("-->", lt + 4);
            i = close == std::string_view::npos ? html.size() : close + 3;
            continue;
        }
        TagToken tag;
        if (!parse_tag(html, lt, tag)) {
            i = lt + 1;
            continue;
        }
        i = tag.end;
        if (tag.closing || !iequals(tag.name, "a")) {
            continue;
        }
        const std::string_view href = find_attr(tag.body, "href");
        if (href.empty()) {
            continue;
        }
        const auto resolved = resolve_reference(base, decode_entities(href));
        if (!resolved) {
            continue;
        }
        if (seen.insert(*resolved).second) {
            links.push_back(*resolved);
        }
    }
    return links;
}

std::string extract_text(std::string_view html) {
    std::string out;
    std::string line;
    const auto flush_line = [&] {
        const std::string decoded = decode_entities(line);
        std::string collapsed;
        bool in_ws = true;  // drop leading whitespace
        for (unsigned char c : decoded) {
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                if (!in_ws) {
                    collapsed.push_back(' ');
                    in_ws = true;
                }
            } else {
                collapsed.push_back(static_cast<char>(c));
                in_ws = false;
            }
        }
        while (!collapsed.empty() && collapsed.back() == ' ') {
            collapsed.pop_back();
        }
        if (!collapsed.empty()) {
            if (!out.empty()) {
                out.push_back('\n');
            }
            out += collapsed;
        }
        line.clear();
    };

    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c != '<') {
            line.push_back(c);
            ++i;
            continue;
        }
        if (html.substr(i).starts_with("<!--")) {
            const std::size_t close = html.find("-->", i + 4);
            i = close == std::string_view::npos ? html.size() : close + 3;
            continue;
        }
        if (html.substr(i).starts_with("<![CDATA[")) {
            const std::size_t close = html.find("]]>", i + 9);
            i = close == std::string_view::npos ? html.size() : close + 3;
            continue;
        }
        if (html.substr(i).starts_with("<!") || html.substr(i).starts_with("<?")) {
            const std::size_t close = html.find('>', i);
            i = close == std::string_view::npos ? html.size() : close + 1;
            continue;
        }
        TagToken tag;
        if (!parse_tag(html, i, tag)) {
            line.push_back('<');
            ++i;
            continue;
        }
        i = tag.end;
        if (!tag.closing && is_raw_text_tag(tag.name)) {
            const std::string closer = "</" + ascii_lower(tag.name);
            const std::size_t close = ifind(html, closer, i);
            if (close != std::string_view::npos) {
                const std::size_t gt = html.find('>', close);
                i = gt == std::string_view::npos ? html.size() : gt + 1;
            } else if (iequals(tag.name, "head")) {
                continue;  // unclosed <head>: keep going rather than drop the page
            } else {
                i = html.size();
            }
            continue;
        }
        if (is_block_tag(tag.name)) {
            flush_line();
        }
    }
    flush_line();
    return utf8::sanitize(out);
}

}  // namespace tibcorpus::crawl
