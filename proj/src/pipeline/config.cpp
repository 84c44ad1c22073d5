// SPDX-License-Identifier: Apache-2.0
#include "pipeline/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "common/errors.hpp"
#include "common/utf8.hpp"
#include "pipeline/document.hpp"

namespace tibcorpus::pipeline {

namespace {

void expect_keys(const nlohmann::json& j, const char* section,
                 const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(std::string("config: unknown key '") + key + "' in " + section);
        }
    }
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) {
        return path;
    }
    const std::filesystem::path p(path);
    if (p.is_absolute()) {
        return path;
    }
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json j;
    j["stages"] = stage_order;
    j["jobs"] = jobs;

    j["langid"] = {{"language", lang_code},
                   {"threshold", lang_threshold},
                   {"softmax_scale", langid_softmax_scale},
                   {"profiles", profile_paths}};

    nlohmann::json q;
    nlohmann::json top;
    for (const auto& [n, frac] : quality.top_ngram_max_frac) {
        top[std::to_string(n)] = frac;
    }
    nlohmann::json dup;
    for (const auto& [n, frac] : quality.dup_ngram_max_frac) {
        dup[std::to_string(n)] = frac;
    }
    q["top_ngram_max_frac"] = std::move(top);
    q["dup_ngram_max_frac"] = std::move(dup);
    q["dup_sentence_char_max_frac"] = quality.dup_sentence_char_max_frac;
    q["dup_sentence_max_frac"] = quality.dup_sentence_max_frac;
    q["dup_paragraph_max_frac"] = quality.dup_paragraph_max_frac;
    q["min_words"] = quality.min_words;
    q["max_words"] = quality.max_words;
    q["min_avg_word_len"] = quality.min_avg_word_len;
    q["max_avg_word_len"] = quality.max_avg_word_len;
    q["max_symbol_word_ratio"] = quality.max_symbol_word_ratio;
    q["min_alpha_word_frac"] = quality.min_alpha_word_frac;
    q["max_bullet_frac"] = quality.max_bullet_frac;
    q["max_ellipsis_frac"] = quality.max_ellipsis_frac;
    q["c4_min_line_words"] = quality.c4_min_line_words;
    q["short_sentence_len"] = quality.short_sentence_len;
    q["max_short_sentence_frac"] = quality.max_short_sentence_frac;
    q["max_dup_char_frac"] = quality.max_dup_char_frac;
    q["max_newline_word_ratio"] = quality.max_newline_word_ratio;
    {
        std::string bullets;
        for (char32_t cp : quality.bullet_prefixes) {
            utf8::append(bullets, cp);
        }
        q["bullet_prefixes"] = bullets;
    }
    q["ellipsis_suffixes"] = quality.ellipsis_suffixes;
    q["policy_phrases"] = quality.policy_phrases;
    q["badword_path"] = badword_path;
    q["sensitive_path"] = sensitive_path;
    j["quality"] = std::move(q);

    j["dedup"] = {{"num_hashes", dedup.num_hashes},
                  {"bands", dedup.bands},
                  {"rows_per_band", dedup.rows_per_band},
                  {"shingle_words", dedup.shingle_words},
                  {"seed", dedup.seed},
                  {"confirm_threshold", dedup.confirm_threshold}};

    j["tokenizer"] = {{"vocab_path", vocab_path},
                      {"merges_path", merges_path},
                      {"separator_token", separator_token},
                      {"target_size", train_target_size},
                      {"target_includes_bytes", train_target_includes_bytes}};

    j["pack"] = {{"sample_length", sample_length}};

    j["crawl"] = {{"max_pages", crawl.max_pages},
                  {"max_depth", crawl.max_depth == UINT64_MAX
                                    ? nlohmann::json(-1)
                                    : nlohmann::json(crawl.max_depth)},
                  {"delay_ms", crawl.politeness_delay_ms},
                  {"timeout_ms", crawl.timeout_ms},
                  {"user_agent", crawl.user_agent},
                  {"obey_robots", crawl.obey_robots},
                  {"concurrency", crawl.concurrency},
                  {"psl_path", crawl.psl_path}};
    return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
    PipelineConfig cfg;
    expect_keys(j, "config",
                {"stages", "jobs", "langid", "quality", "dedup", "tokenizer", "pack", "crawl"});

    if (j.contains("stages")) {
        cfg.stage_order = j.at("stages").get<std::vector<std::string>>();
    }
    if (j.contains("jobs")) {
        cfg.jobs = j.at("jobs").get<std::size_t>();
    }

    if (j.contains("langid")) {
        const auto& l = j.at("langid");
        expect_keys(l, "langid", {"language", "threshold", "softmax_scale", "profiles"});
        if (l.contains("language")) cfg.lang_code = l.at("language").get<std::string>();
        if (l.contains("threshold")) cfg.lang_threshold = l.at("threshold").get<double>();
        if (l.contains("softmax_scale"))
            cfg.langid_softmax_scale = l.at("softmax_scale").get<double>();
        if (l.contains("profiles")) {
            for (const auto& [lang, path] : l.at("profiles").items()) {
                cfg.profile_paths[lang] = resolve_path(base_dir, path.get<std::string>());
            }
        }
    }

    if (j.contains("quality")) {
        const auto& q = j.at("quality");
        expect_keys(q, "quality",
                    {"top_ngram_max_frac", "dup_ngram_max_frac", "dup_sentence_char_max_frac",
                     "dup_sentence_max_frac", "dup_paragraph_max_frac", "min_words", "max_words",
                     "min_avg_word_len", "max_avg_word_len", "max_symbol_word_ratio",
                     "min_alpha_word_frac", "max_bullet_frac", "max_ellipsis_frac",
                     "c4_min_line_words", "short_sentence_len", "max_short_sentence_frac",
                     "max_dup_char_frac", "max_newline_word_ratio", "bullet_prefixes",
                     "ellipsis_suffixes", "policy_phrases", "badword_path", "sensitive_path"});
        auto& dst = cfg.quality;
        if (q.contains("top_ngram_max_frac")) {
            dst.top_ngram_max_frac.clear();
            for (const auto& [n, frac] : q.at("top_ngram_max_frac").items()) {
                dst.top_ngram_max_frac[std::stoi(n)] = frac.get<double>();
            }
        }
        if (q.contains("dup_ngram_max_frac")) {
            dst.dup_ngram_max_frac.clear();
            for (const auto& [n, frac] : q.at("dup_ngram_max_frac").items()) {
                dst.dup_ngram_max_frac[std::stoi(n)] = frac.get<double>();
            }
        }
        const auto get_double = [&](const char* key, double& out) {
            if (q.contains(key)) out = q.at(key).get<double>();
        };
        const auto get_u64 = [&](const char* key, std::uint64_t& out) {
            if (q.contains(key)) out = q.at(key).get<std::uint64_t>();
        };
        get_double("dup_sentence_char_max_frac", dst.dup_sentence_char_max_frac);
        get_double("dup_sentence_max_frac", dst.dup_sentence_max_frac);
        get_double("dup_paragraph_max_frac", dst.dup_paragraph_max_frac);
        get_u64("min_words", dst.min_words);
        get_u64("max_words", dst.max_words);
        get_double("min_avg_word_len", dst.min_avg_word_len);
        get_double("max_avg_word_len", dst.max_avg_word_len);
        get_double("max_symbol_word_ratio", dst.max_symbol_word_ratio);
        get_double("min_alpha_word_frac", dst.min_alpha_word_frac);
        get_double("max_bullet_frac", dst.max_bullet_frac);
        get_double("max_ellipsis_frac", dst.max_ellipsis_frac);
        get_u64("c4_min_line_words", dst.c4_min_line_words);
        get_u64("short_sentence_len", dst.short_sentence_len);
        get_double("max_short_sentence_frac", dst.max_short_sentence_frac);
        get_double("max_dup_char_frac", dst.max_dup_char_frac);
        get_double("max_newline_word_ratio", dst.max_newline_word_ratio);
        if (q.contains("bullet_prefixes")) {
            dst.bullet_prefixes = utf8::decode(q.at("bullet_prefixes").get<std::string>());
        }
        if (q.contains("ellipsis_suffixes")) {
            dst.ellipsis_suffixes = q.at("ellipsis_suffixes").get<std::vector<std::string>>();
        }
        if (q.contains("policy_phrases")) {
            dst.policy_phrases = q.at("policy_phrases").get<std::vector<std::string>>();
        }
        if (q.contains("badword_path")) {
            cfg.badword_path = resolve_path(base_dir, q.at("badword_path").get<std::string>());
        }
        if (q.contains("sensitive_path")) {
            cfg.sensitive_path = resolve_path(base_dir, q.at("sensitive_path").get<std::string>());
        }
    }

    if (j.contains("dedup")) {
        const auto& d = j.at("dedup");
        expect_keys(d, "dedup", {"num_hashes", "bands", "rows_per_band", "shingle_words", "seed",
                                 "confirm_threshold"});
        if (d.contains("num_hashes")) cfg.dedup.num_hashes = d.at("num_hashes").get<std::uint32_t>();
        if (d.contains("bands")) cfg.dedup.bands = d.at("bands").get<std::uint32_t>();
        if (d.contains("rows_per_band"))
            cfg.dedup.rows_per_band = d.at("rows_per_band").get<std::uint32_t>();
        if (d.contains("shingle_words"))
            cfg.dedup.shingle_words = d.at("shingle_words").get<std::uint32_t>();
        if (d.contains("seed")) cfg.dedup.seed = d.at("seed").get<std::uint64_t>();
        if (d.contains("confirm_threshold"))
            cfg.dedup.confirm_threshold = d.at("confirm_threshold").get<double>();
    }

    if (j.contains("tokenizer")) {
        const auto& t = j.at("tokenizer");
        expect_keys(t, "tokenizer", {"vocab_path", "merges_path", "separator_token", "target_size",
                                     "target_includes_bytes"});
        if (t.contains("vocab_path")) {
            cfg.vocab_path = resolve_path(base_dir, t.at("vocab_path").get<std::string>());
        }
        if (t.contains("merges_path")) {
            cfg.merges_path = resolve_path(base_dir, t.at("merges_path").get<std::string>());
        }
        if (t.contains("separator_token"))
            cfg.separator_token = t.at("separator_token").get<std::string>();
        if (t.contains("target_size"))
            cfg.train_target_size = t.at("target_size").get<std::uint32_t>();
        if (t.contains("target_includes_bytes"))
            cfg.train_target_includes_bytes = t.at("target_includes_bytes").get<bool>();
    }

    if (j.contains("pack")) {
        const auto& p = j.at("pack");
        expect_keys(p, "pack", {"sample_length"});
        if (p.contains("sample_length"))
            cfg.sample_length = p.at("sample_length").get<std::uint32_t>();
    }

    if (j.contains("crawl")) {
        const auto& c = j.at("crawl");
        expect_keys(c, "crawl", {"max_pages", "max_depth", "delay_ms", "timeout_ms", "user_agent",
                                 "obey_robots", "concurrency", "psl_path"});
        if (c.contains("max_pages")) cfg.crawl.max_pages = c.at("max_pages").get<std::uint64_t>();
        if (c.contains("max_depth")) {
            const auto& depth = c.at("max_depth");
            if (depth.is_number_integer() && depth.get<std::int64_t>() < 0) {
                cfg.crawl.max_depth = UINT64_MAX;
            } else {
                cfg.crawl.max_depth = depth.get<std::uint64_t>();
            }
        }
        if (c.contains("delay_ms"))
            cfg.crawl.politeness_delay_ms = c.at("delay_ms").get<std::uint64_t>();
        if (c.contains("timeout_ms")) cfg.crawl.timeout_ms = c.at("timeout_ms").get<std::uint64_t>();
        if (c.contains("user_agent")) cfg.crawl.user_agent = c.at("user_agent").get<std::string>();
        if (c.contains("obey_robots")) cfg.crawl.obey_robots = c.at("obey_robots").get<bool>();
        if (c.contains("concurrency")) cfg.crawl.concurrency = c.at("concurrency").get<std::size_t>();
        if (c.contains("psl_path")) {
            cfg.crawl.psl_path = resolve_path(base_dir, c.at("psl_path").get<std::string>());
        }
    }
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("config: cannot read " + path);
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError("config: invalid JSON in " + path);
    }
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    try {
        PipelineConfig cfg = from_json(j, base_dir);
        cfg.finalize();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void PipelineConfig::save(const std::string& path) const {
    write_text_atomic(path, to_json().dump(2) + "\n");
}

void PipelineConfig::finalize() {
    if (!badword_path.empty()) {
        quality.badwords = quality::load_term_file(badword_path);
    }
    if (!sensitive_path.empty()) {
        quality.sensitive_terms = quality::load_term_file(sensitive_path);
    }
    validate();
}

void PipelineConfig::validate() const {
    std::vector<std::string> sorted = stage_order;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<std::string> expected = {"dedup", "langid", "quality"};
    if (sorted != expected) {
        throw ConfigError("config: stages must be a permutation of [langid, quality, dedup]");
    }
    if (jobs < 1) {
        throw ConfigError("config: jobs must be >= 1");
    }
    if (!(lang_threshold >= 0.0 && lang_threshold <= 1.0)) {
        throw ConfigError("config: langid threshold must be in [0,1]");
    }
    if (langid_softmax_scale <= 0.0) {
        throw ConfigError("config: langid softmax_scale must be positive");
    }
    if (sample_length < 2) {
        throw ConfigError("config: pack sample_length must be >= 2");
    }
    if (separator_token.empty()) {
        throw ConfigError("config: separator_token must be non-empty");
    }
    quality.validate();
    dedup.validate();
    crawl.validate();
}

}  // namespace tibcorpus::pipeline
