// SPDX-License-Identifier: Apache-2.0
#include "pipeline/templates.hpp"

#include <fstream>

#include "common/errors.hpp"

namespace tibcorpus::pipeline {

namespace {

std::string replace_once_each(std::string text, std::string_view slot, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace

void TemplateSet::add(std::string id, std::string text) {
    if (text.find("{source}") == std::string::npos) {
        throw ConfigError("templates: '" + id + "' is missing the {source} slot");
    }
    if (text.find("{target}") == std::string::npos) {
        throw ConfigError("templates: '" + id + "' is missing the {target} slot");
    }
    templates_[std::move(id)] = std::move(text);
}

const std::string& TemplateSet::get(const std::string& id) const {
    const auto it = templates_.find(id);
    if (it == templates_.end()) {
        throw ConfigError("templates: unknown template '" + id + "'");
    }
    return it->second;
}

TemplateSet TemplateSet::builtin() {
    TemplateSet set;
    set.add("to-target", "Translate the following text into Tibetan.\n{source}\n{target}");
    set.add("from-target", "Translate the following Tibetan text.\n{target}\n{source}");
    set.add("pair", "{source}\n{target}");
    return set;
}

TemplateSet TemplateSet::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("templates: cannot read " + path);
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("templates: " + path + " must be a JSON object of id -> template");
    }
    TemplateSet set;
    for (const auto& [id, text] : j.items()) {
        set.add(id, text.get<std::string>());
    }
    return set;
}

Document format_parallel(const TemplateSet& templates, const std::string& template_id,
                         std::string_view source_text, std::string_view target_text) {
    if (source_text.empty() || target_text.empty()) {
        throw std::invalid_argument("templates: source and target must be non-empty");
    }
    std::string filled = templates.get(template_id);
    filled = replace_once_each(std::move(filled), "{source}", source_text);
    filled = replace_once_each(std::move(filled), "{target}", target_text);

    Document doc;
    doc.source = Source::kSynthetic;
    doc.text = std::move(filled);
    doc.extra["template_id"] = template_id;
    doc.ensure_id();
    return doc;
}

}  // namespace tibcorpus::pipeline
