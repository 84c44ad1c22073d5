// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "common/outcome.hpp"
#include "langid/classifier.hpp"

namespace tibcorpus::pipeline {

enum class Source {
    kOpenSource,
    kCrawl,
    kSynthetic,
    kPrivate,
};

const char* source_name(Source s);
Source source_from_name(const std::string& name);

struct TrailEntry {
    std::string stage;
    FilterOutcome outcome;
};

/// One corpus record. Unknown JSONL fields are preserved in `extra` so crawl
/// metadata (depth, status, fetched_at) and foreign annotations survive a
/// round trip.
struct Document {
    std::string id;
    Source source = Source::kOpenSource;
    std::string url;
    std::string text;
    std::vector<langid::LanguageScore> lang_scores;
    std::vector<TrailEntry> filter_trail;
    nlohmann::json extra = nlohmann::json::object();

    /// Sets id to the SHA-256 of the text when absent.
    void ensure_id();
};

nlohmann::json outcome_to_json(const FilterOutcome& outcome);
FilterOutcome outcome_from_json(const nlohmann::json& j);

nlohmann::json doc_to_json(const Document& doc);
Document doc_from_json(const nlohmann::json& j);

std::string doc_to_jsonl_line(const Document& doc);

std::vector<Document> read_jsonl(const std::string& path);

/// Serializes one document per line and renames a temp file into place so a
/// failed run never leaves a partial output.
void write_jsonl_atomic(const std::string& path, const std::vector<Document>& docs);

/// Also atomic (temp then rename).
void write_text_atomic(const std::string& path, std::string_view contents);

}  // namespace tibcorpus::pipeline
