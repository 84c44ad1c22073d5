// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crawl/url.hpp"

namespace tibcorpus::crawl {

/// Anchor hrefs resolved against base, fragments stripped, non-http(s)
/// schemes dropped, duplicates removed keeping first-seen order. Malformed
/// anchors are skipped, never fatal.
std::vector<std::string> extract_links(std::string_view html, const Url& base);

/// Plain text: script/style/head/noscript/template content removed, tags
/// stripped, block-level boundaries become newlines, entities decoded,
/// whitespace collapsed within lines. Input bytes are decoded as UTF-8 with
/// lossy fallback.
std::string extract_text(std::string_view html);

/// Decodes the named and numeric entities that matter for text extraction.
std::string decode_entities(std::string_view text);

}  // namespace tibcorpus::crawl
