// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpe/tokenizer.hpp"
#include "pipeline/config.hpp"
#include "pipeline/document.hpp"

namespace tibcorpus::pipeline {

struct StageReport {
    std::uint64_t input = 0;
    std::uint64_t kept = 0;
    std::uint64_t removed = 0;
    std::map<std::string, std::uint64_t> removed_by_reason;
};

/// Per-source / per-language corpus totals plus per-stage removal counts.
/// Invariant: input == kept + removed for every stage, and the reason counts
/// sum to removed.
struct StatsReport {
    struct Group {
        std::uint64_t documents = 0;
        std::uint64_t bytes = 0;
        std::uint64_t tokens = 0;
    };
    // source -> language -> totals
    std::map<std::string, std::map<std::string, Group>> groups;
    Group totals;
    std::string vocabulary = "none";  // fingerprint hex or "none"
    std::vector<std::pair<std::string, StageReport>> stages;

    nlohmann::json to_json() const;
};

struct PipelineResult {
    std::vector<Document> kept;
    StatsReport report;
};

/// Runs the configured stages in order; every document carries its full
/// filter trail and the report reconciles exactly. Output order is stable.
PipelineResult run_pipeline(std::vector<Document> docs, const PipelineConfig& cfg,
                            const bpe::Tokenizer* tokenizer = nullptr);

/// Corpus statistics only (no filtering). Token counts require a tokenizer.
StatsReport corpus_stats(const std::vector<Document>& docs, const bpe::Tokenizer* tokenizer,
                         std::size_t jobs = 1);

/// Runs a subset of stages (e.g. just langid+quality for `filter`, or just
/// dedup). `stages` must be a subset of {langid, quality, dedup}.
PipelineResult run_stages(std::vector<Document> docs, const PipelineConfig& cfg,
                          const std::vector<std::string>& stages,
                          const bpe::Tokenizer* tokenizer = nullptr);

}  // namespace tibcorpus::pipeline
