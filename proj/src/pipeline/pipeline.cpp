// SPDX-License-Identifier: Apache-2.0
#include "pipeline/pipeline.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "common/errors.hpp"
#include "common/hash.hpp"
#include "common/parallel.hpp"
#include "dedup/minhash.hpp"
#include "quality/filters.hpp"

namespace tibcorpus::pipeline {

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string fingerprint_hex(const bpe::Tokenizer& tok) {
    const auto fp = tok.fingerprint();
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : fp) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

langid::Classifier build_classifier(const PipelineConfig& cfg) {
    if (cfg.profile_paths.empty()) {
        return langid::Classifier::builtin(cfg.langid_softmax_scale);
    }
    std::vector<langid::ClassifierProfile> profiles;
    for (const auto& [lang, path] : cfg.profile_paths) {
        profiles.push_back(langid::ClassifierProfile::load(lang, path));
    }
    return langid::Classifier(std::move(profiles), cfg.langid_softmax_scale);
}

void count_removal(StageReport& report, const std::string& reason) {
    ++report.removed;
    ++report.removed_by_reason[reason];
}

std::vector<Document> stage_langid(std::vector<Document> docs, const PipelineConfig& cfg,
                                   StageReport& report) {
    const langid::Classifier classifier = build_classifier(cfg);
    report.input = docs.size();

    std::vector<FilterOutcome> outcomes(docs.size());
    std::vector<std::vector<langid::LanguageScore>> scores(docs.size());
    parallel_for(docs.size(), cfg.jobs, [&](std::size_t i) {
        try {
            scores[i] = classifier.classify(docs[i].text);
            double confidence = 0.0;
            for (const auto& s : scores[i]) {
                if (s.language == cfg.lang_code) {
                    confidence = s.confidence;
                }
            }
            FilterOutcome o;
            o.measurements["lang.confidence"] = confidence;
            if (!langid::language_verdict(confidence, cfg.lang_threshold)) {
                o.verdict = Verdict::kRemoved;
                o.reason = "lang.below_threshold";
            }
            outcomes[i] = std::move(o);
        } catch (const std::invalid_argument&) {
            outcomes[i] = FilterOutcome::remove("lang.empty_text");
        }
    });

    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        docs[i].lang_scores = std::move(scores[i]);
        docs[i].filter_trail.push_back({"langid", std::move(outcomes[i])});
        if (docs[i].filter_trail.back().outcome.removed()) {
            count_removal(report, docs[i].filter_trail.back().outcome.reason);
        } else {
            kept.push_back(std::move(docs[i]));
        }
    }
    report.kept = kept.size();
    return kept;
}

std::vector<Document> stage_quality(std::vector<Document> docs, const PipelineConfig& cfg,
                                    StageReport& report) {
    report.input = docs.size();
    std::vector<quality::ChainResult> results(docs.size());
    parallel_for(docs.size(), cfg.jobs, [&](std::size_t i) {
        results[i] = quality::run_quality_chain(docs[i].text, cfg.quality);
    });

    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        quality::ChainResult& r = results[i];
        if (r.transformed) {
            docs[i].text = std::move(r.transformed_text);
        }
        docs[i].filter_trail.push_back({"quality", std::move(r.outcome)});
        if (docs[i].filter_trail.back().outcome.removed()) {
            count_removal(report, docs[i].filter_trail.back().outcome.reason);
        } else {
            kept.push_back(std::move(docs[i]));
        }
    }
    report.kept = kept.size();
    return kept;
}

std::vector<Document> stage_dedup(std::vector<Document> docs, const PipelineConfig& cfg,
                                  StageReport& report) {
    report.input = docs.size();
    std::vector<dedup::MinHashSignature> sigs(docs.size());
    parallel_for(docs.size(), cfg.jobs, [&](std::size_t i) {
        sigs[i] = dedup::compute_signature(docs[i].text, cfg.dedup, docs[i].id);
    });

    const auto clusters = dedup::find_duplicates(sigs, cfg.dedup);
    std::unordered_map<std::size_t, std::size_t> removed_to_rep;
    std::unordered_map<std::size_t, std::size_t> rep_cluster_size;
    for (const auto& cluster : clusters) {
        rep_cluster_size[cluster.representative()] = cluster.members.size();
        for (std::size_t k = 1; k < cluster.members.size(); ++k) {
            removed_to_rep[cluster.members[k]] = cluster.representative();
        }
    }

    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        FilterOutcome o;
        const auto rep = removed_to_rep.find(i);
        if (rep != removed_to_rep.end()) {
            o.verdict = Verdict::kRemoved;
            o.reason = "dedup.duplicate";
            o.detail = docs[rep->second].id;
        } else if (const auto size = rep_cluster_size.find(i); size != rep_cluster_size.end()) {
            o.measurements["dedup.cluster_size"] = static_cast<double>(size->second);
        }
        docs[i].filter_trail.push_back({"dedup", std::move(o)});
        if (docs[i].filter_trail.back().outcome.removed()) {
            count_removal(report, docs[i].filter_trail.back().outcome.reason);
        } else {
            kept.push_back(std::move(docs[i]));
        }
    }
    report.kept = kept.size();
    return kept;
}

void ensure_unique_ids(std::vector<Document>& docs) {
    std::unordered_set<std::string> seen;
    seen.reserve(docs.size());
    for (Document& doc : docs) {
        doc.ensure_id();
        if (!seen.insert(doc.id).second) {
            std::size_t suffix = 2;
            std::string candidate;
            do {
                candidate = doc.id + "-" + std::to_string(suffix++);
            } while (!seen.insert(candidate).second);
            doc.id = candidate;
        }
    }
}

}  // namespace

nlohmann::json StatsReport::to_json() const {
    nlohmann::json j;
    nlohmann::json groups_json = nlohmann::json::object();
    for (const auto& [source, langs] : groups) {
        nlohmann::json per_lang = nlohmann::json::object();
        for (const auto& [lang, g] : langs) {
            per_lang[lang] = {{"documents", g.documents}, {"bytes", g.bytes}, {"tokens", g.tokens}};
        }
        groups_json[source] = std::move(per_lang);
    }
    j["groups"] = std::move(groups_json);
    j["totals"] = {{"documents", totals.documents},
                   {"bytes", totals.bytes},
                   {"tokens", totals.tokens}};
    j["vocabulary"] = vocabulary;
    nlohmann::json stages_json = nlohmann::json::array();
    for (const auto& [name, stage] : stages) {
        nlohmann::json s;
        s["stage"] = name;
        s["input"] = stage.input;
        s["kept"] = stage.kept;
        s["removed"] = stage.removed;
        nlohmann::json reasons = nlohmann::json::object();
        for (const auto& [reason, count] : stage.removed_by_reason) {
            reasons[reason] = count;
        }
        s["removed_by_reason"] = std::move(reasons);
        stages_json.push_back(std::move(s));
    }
    j["stages"] = std::move(stages_json);
    return j;
}

StatsReport corpus_stats(const std::vector<Document>& docs, const bpe::Tokenizer* tokenizer,
                         std::size_t jobs) {
    StatsReport report;
    std::vector<std::uint64_t> token_counts(docs.size(), 0);
    if (tokenizer != nullptr) {
        report.vocabulary = fingerprint_hex(*tokenizer);
        parallel_for(docs.size(), jobs, [&](std::size_t i) {
            token_counts[i] = tokenizer->encode(docs[i].text).size();
        });
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const Document& doc = docs[i];
        const std::string lang = doc.lang_scores.empty() ? "und" : doc.lang_scores.front().language;
        auto& group = report.groups[source_name(doc.source)][lang];
        group.documents += 1;
        group.bytes += doc.text.size();
        group.tokens += token_counts[i];
        report.totals.documents += 1;
        report.totals.bytes += doc.text.size();
        report.totals.tokens += token_counts[i];
    }
    return report;
}

PipelineResult run_stages(std::vector<Document> docs, const PipelineConfig& cfg,
                          const std::vector<std::string>& stages, const bpe::Tokenizer* tokenizer) {
    cfg.validate();
    ensure_unique_ids(docs);

    PipelineResult result;
    for (const std::string& stage : stages) {
        StageReport stage_report;
        if (stage == "langid") {
            docs = stage_langid(std::move(docs), cfg, stage_report);
        } else if (stage == "quality") {
            docs = stage_quality(std::move(docs), cfg, stage_report);
        } else if (stage == "dedup") {
            docs = stage_dedup(std::move(docs), cfg, stage_report);
        } else {
            throw ConfigError("pipeline: unknown stage '" + stage + "'");
        }
        result.report.stages.emplace_back(stage, std::move(stage_report));
    }

    StatsReport stats = corpus_stats(docs, tokenizer, cfg.jobs);
    stats.stages = std::move(result.report.stages);
    result.report = std::move(stats);
    result.kept = std::move(docs);
    return result;
}

PipelineResult run_pipeline(std::vector<Document> docs, const PipelineConfig& cfg,
                            const bpe::Tokenizer* tokenizer) {
    return run_stages(std::move(docs), cfg, cfg.stage_order, tokenizer);
}

}  // namespace tibcorpus::pipeline
