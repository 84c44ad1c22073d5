// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pipeline/document.hpp"

namespace tibcorpus::pipeline {

/// Instruction templates for formatting parallel bitext into synthetic
/// training documents. Every template must contain both the {source} and
/// {target} slots exactly where the filled text should go.
class TemplateSet {
public:
    static TemplateSet builtin();
    static TemplateSet from_file(const std::string& path);

    void add(std::string id, std::string text);  // validates slots
    const std::string& get(const std::string& id) const;
    const std::map<std::string, std::string>& all() const { return templates_; }

private:
    std::map<std::string, std::string> templates_;
};

/// Fills a template with a bitext pair; the result is a synthetic Document
/// whose id is the content hash. Throws on unknown template or empty sides.
Document format_parallel(const TemplateSet& templates, const std::string& template_id,
                         std::string_view source_text, std::string_view target_text);

}  // namespace tibcorpus::pipeline
