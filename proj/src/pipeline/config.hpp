// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "crawl/crawler.hpp"
#include "dedup/minhash.hpp"
#include "quality/filters.hpp"

namespace tibcorpus::pipeline {

/// Everything a run needs, loadable from one JSON document. All thresholds
/// default to the published pipeline values; relative paths are resolved
/// against the config file's directory at load time.
struct PipelineConfig {
    std::vector<std::string> stage_order = {"langid", "quality", "dedup"};
    std::size_t jobs = 1;

    // langid
    std::string lang_code = "bo";
    double lang_threshold = 0.5;
    double langid_softmax_scale = 0.25;
    std::map<std::string, std::string> profile_paths;  // empty: built-in profiles

    // quality (badwords/sensitive_terms are loaded from the paths at load time)
    quality::FilterConfig quality;
    std::string badword_path;
    std::string sensitive_path;

    // dedup
    dedup::MinHashParams dedup;

    // tokenizer
    std::string vocab_path;
    std::string merges_path;
    std::string separator_token = "<|endoftext|>";
    std::uint32_t train_target_size = 15000;
    bool train_target_includes_bytes = true;

    // pack
    std::uint32_t sample_length = 4096;

    // crawl
    crawl::CrawlConfig crawl;

    static PipelineConfig defaults() { return PipelineConfig{}; }
    static PipelineConfig load(const std::string& path);
    void save(const std::string& path) const;

    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j, const std::string& base_dir);

    /// Validates ranges and loads term lists from the configured paths.
    void finalize();
    void validate() const;
};

}  // namespace tibcorpus::pipeline
