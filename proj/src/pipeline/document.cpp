// SPDX-License-Identifier: Apache-2.0
#include "pipeline/document.hpp"

#include <filesystem>
#include <fstream>

#include "common/errors.hpp"
#include "common/hash.hpp"

namespace tibcorpus::pipeline {

const char* source_name(Source s) {
    switch (s) {
        case Source::kOpenSource:
            return "open_source";
        case Source::kCrawl:
            return "crawl";
        case Source::kSynthetic:
            return "synthetic";
        case Source::kPrivate:
            return "private";
    }
    return "open_source";
}

Source source_from_name(const std::string& name) {
    if (name == "open_source") return Source::kOpenSource;
    if (name == "crawl") return Source::kCrawl;
    if (name == "synthetic") return Source::kSynthetic;
    if (name == "private") return Source::kPrivate;
    throw ParseError("document: unknown source: " + name);
}

void Document::ensure_id() {
    if (id.empty()) {
        id = hash::sha256_hex(text);
    }
}

nlohmann::json outcome_to_json(const FilterOutcome& outcome) {
    nlohmann::json j;
    j["verdict"] = verdict_name(outcome.verdict);
    if (outcome.removed()) {
        j["reason"] = outcome.reason;
    }
    if (outcome.verdict == Verdict::kTransformed) {
        j["lines_dropped"] = outcome.lines_dropped;
    }
    if (!outcome.detail.empty()) {
        j["detail"] = outcome.detail;
    }
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [key, value] : outcome.measurements) {
        m[key] = value;
    }
    j["measurements"] = std::move(m);
    return j;
}

FilterOutcome outcome_from_json(const nlohmann::json& j) {
    FilterOutcome outcome;
    outcome.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    if (j.contains("reason")) {
        outcome.reason = j.at("reason").get<std::string>();
    }
    if (j.contains("lines_dropped")) {
        outcome.lines_dropped = j.at("lines_dropped").get<std::uint64_t>();
    }
    if (j.contains("detail")) {
        outcome.detail = j.at("detail").get<std::string>();
    }
    if (j.contains("measurements")) {
        for (const auto& [key, value] : j.at("measurements").items()) {
            outcome.measurements[key] = value.get<double>();
        }
    }
    return outcome;
}

nlohmann::json doc_to_json(const Document& doc) {
    nlohmann::json j = doc.extra.is_object() ? doc.extra : nlohmann::json::object();
    j["id"] = doc.id;
    j["source"] = source_name(doc.source);
    if (!doc.url.empty()) {
        j["url"] = doc.url;
    }
    j["text"] = doc.text;
    if (!doc.lang_scores.empty()) {
        nlohmann::json scores = nlohmann::json::array();
        for (const auto& s : doc.lang_scores) {
            scores.push_back({{"language", s.language}, {"confidence", s.confidence}});
        }
        j["lang_scores"] = std::move(scores);
    }
    if (!doc.filter_trail.empty()) {
        nlohmann::json trail = nlohmann::json::array();
        for (const auto& entry : doc.filter_trail) {
            nlohmann::json t = outcome_to_json(entry.outcome);
            t["stage"] = entry.stage;
            trail.push_back(std::move(t));
        }
        j["filter_trail"] = std::move(trail);
    }
    return j;
}

Document doc_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ParseError("document: record is not a JSON object");
    }
    Document doc;
    for (const auto& [key, value] : j.items()) {
        if (key == "id") {
            doc.id = value.get<std::string>();
        } else if (key == "source") {
            doc.source = source_from_name(value.get<std::string>());
        } else if (key == "url") {
            doc.url = value.get<std::string>();
        } else if (key == "text") {
            doc.text = value.get<std::string>();
        } else if (key == "lang_scores") {
            for (const auto& s : value) {
                doc.lang_scores.push_back(
                    {s.at("language").get<std::string>(), s.at("confidence").get<double>()});
            }
        } else if (key == "filter_trail") {
            for (const auto& t : value) {
                doc.filter_trail.push_back(
                    {t.at("stage").get<std::string>(), outcome_from_json(t)});
            }
        } else {
            doc.extra[key] = value;
        }
    }
    return doc;
}

std::string doc_to_jsonl_line(const Document& doc) {
    return doc_to_json(doc).dump();
}

std::vector<Document> read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("document: cannot read " + path);
    }
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError("document: bad JSON at " + path + ":" + std::to_string(lineno));
        }
        docs.push_back(doc_from_json(j));
    }
    return docs;
}

void write_text_atomic(const std::string& path, std::string_view contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !out.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
            throw IoError("document: cannot write " + tmp);
        }
        out.flush();
        if (!out) {
            throw IoError("document: flush failed for " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("document: cannot rename " + tmp + " -> " + path + ": " + ec.message());
    }
}

void write_jsonl_atomic(const std::string& path, const std::vector<Document>& docs) {
    std::string blob;
    for (const Document& doc : docs) {
        blob += doc_to_jsonl_line(doc);
        blob.push_back('\n');
    }
    write_text_atomic(path, blob);
}

}  // namespace tibcorpus::pipeline
