// SPDX-License-Identifier: Apache-2.0
#include "tibcorpus/tibcorpus.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "bpe/tokenizer.hpp"
#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "crawl/crawler.hpp"
#include "langid/classifier.hpp"
#include "pipeline/config.hpp"
#include "pipeline/document.hpp"
#include "pipeline/pack.hpp"
#include "pipeline/pipeline.hpp"
#include "pipeline/templates.hpp"
#include "quality/filters.hpp"

using namespace tibcorpus;

struct tibc_config {
    pipeline::PipelineConfig cfg;
};

struct tibc_tokenizer {
    bpe::Tokenizer tok;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
tibc_status wrap(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return TIBC_OK;
    } catch (const ConfigError& e) {
        set_error(e.what());
        return TIBC_ERROR_CONFIG;
    } catch (const IoError& e) {
        set_error(e.what());
        return TIBC_ERROR_IO;
    } catch (const VocabMismatchError& e) {
        set_error(e.what());
        return TIBC_ERROR_VOCAB_MISMATCH;
    } catch (const ParseError& e) {
        set_error(e.what());
        return TIBC_ERROR_PARSE;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return TIBC_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TIBC_ERROR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return TIBC_ERROR_INTERNAL;
    }
}

char* dup_string(std::string_view s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

std::vector<std::string> read_corpus_texts(const std::string& path) {
    std::vector<std::string> texts;
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") {
        for (const auto& doc : pipeline::read_jsonl(path)) {
            texts.push_back(doc.text);
        }
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw IoError("cannot read corpus file: " + path);
        }
        texts.emplace_back((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    }
    return texts;
}

nlohmann::json compression_to_json(const bpe::CompressionReport& r) {
    return {{"codepoints", r.codepoints},
            {"tokens", r.tokens},
            {"ratio", r.ratio},
            {"tibetan_codepoints", r.tibetan_codepoints},
            {"other_codepoints", r.other_codepoints}};
}

tibc_status run_stage_list(const tibc_config* config, const char* in_jsonl, const char* out_jsonl,
                           char** report_json, const std::vector<std::string>* stages) {
    return wrap([&] {
        require(config != nullptr && in_jsonl != nullptr && out_jsonl != nullptr,
                "config, in, out must not be null");
        auto docs = pipeline::read_jsonl(in_jsonl);
        const auto result =
            stages == nullptr
                ? pipeline::run_pipeline(std::move(docs), config->cfg)
                : pipeline::run_stages(std::move(docs), config->cfg, *stages);
        pipeline::write_jsonl_atomic(out_jsonl, result.kept);
        if (report_json != nullptr) {
            *report_json = dup_string(result.report.to_json().dump(2));
        }
    });
}

}  // namespace

extern "C" {

const char* tibc_version(void) { return "0.1.0"; }

const char* tibc_status_name(tibc_status status) {
    switch (status) {
        case TIBC_OK:
            return "ok";
        case TIBC_ERROR_INVALID_ARGUMENT:
            return "invalid_argument";
        case TIBC_ERROR_CONFIG:
            return "config_error";
        case TIBC_ERROR_IO:
            return "io_error";
        case TIBC_ERROR_PARSE:
            return "parse_error";
        case TIBC_ERROR_VOCAB_MISMATCH:
            return "vocab_mismatch";
        case TIBC_ERROR_INTERNAL:
            return "internal_error";
    }
    return "unknown";
}

const char* tibc_last_error(void) { return g_last_error.c_str(); }

void tibc_string_free(char* s) { std::free(s); }
void tibc_ids_free(uint32_t* ids) { std::free(ids); }

tibc_status tibc_config_create(tibc_config** out) {
    return wrap([&] {
        require(out != nullptr, "out must not be null");
        *out = new tibc_config{pipeline::PipelineConfig::defaults()};
    });
}

tibc_status tibc_config_load(const char* path, tibc_config** out) {
    return wrap([&] {
        require(path != nullptr && out != nullptr, "path and out must not be null");
        *out = new tibc_config{pipeline::PipelineConfig::load(path)};
    });
}

tibc_status tibc_config_save(const tibc_config* config, const char* path) {
    return wrap([&] {
        require(config != nullptr && path != nullptr, "config and path must not be null");
        config->cfg.save(path);
    });
}

tibc_status tibc_config_set_jobs(tibc_config* config, uint64_t jobs) {
    return wrap([&] {
        require(config != nullptr, "config must not be null");
        require(jobs >= 1, "jobs must be >= 1");
        config->cfg.jobs = static_cast<std::size_t>(jobs);
        config->cfg.crawl.concurrency = static_cast<std::size_t>(jobs);
    });
}

tibc_status tibc_config_set_seed(tibc_config* config, uint64_t seed) {
    return wrap([&] {
        require(config != nullptr, "config must not be null");
        config->cfg.dedup.seed = seed;
    });
}

tibc_status tibc_config_set_crawl_limits(tibc_config* config, uint64_t max_pages,
                                         int64_t max_depth, uint64_t delay_ms, int obey_robots) {
    return wrap([&] {
        require(config != nullptr, "config must not be null");
        if (max_pages != 0) {
            config->cfg.crawl.max_pages = max_pages;
        }
        if (max_depth == -1) {
            config->cfg.crawl.max_depth = UINT64_MAX;
        } else if (max_depth >= 0) {
            config->cfg.crawl.max_depth = static_cast<std::uint64_t>(max_depth);
        }
        if (delay_ms != UINT64_MAX) {
            config->cfg.crawl.politeness_delay_ms = delay_ms;
        }
        if (obey_robots == 0 || obey_robots == 1) {
            config->cfg.crawl.obey_robots = obey_robots == 1;
        }
        config->cfg.crawl.validate();
    });
}

void tibc_config_free(tibc_config* config) { delete config; }

tibc_status tibc_tokenizer_byte_level(tibc_tokenizer** out) {
    return wrap([&] {
        require(out != nullptr, "out must not be null");
        *out = new tibc_tokenizer{bpe::Tokenizer::byte_level()};
    });
}

tibc_status tibc_tokenizer_train_file(const tibc_config* config, const char* corpus_path,
                                      uint32_t target_size, tibc_tokenizer** out) {
    return wrap([&] {
        require(corpus_path != nullptr && out != nullptr, "corpus_path and out must not be null");
        const pipeline::PipelineConfig defaults;
        const pipeline::PipelineConfig& cfg = config != nullptr ? config->cfg : defaults;
        bpe::TrainOptions options;
        options.target_size = target_size != 0 ? target_size : cfg.train_target_size;
        options.target_includes_bytes = cfg.train_target_includes_bytes;
        const auto texts = read_corpus_texts(corpus_path);
        *out = new tibc_tokenizer{bpe::train_bpe(texts, options)};
    });
}

tibc_status tibc_tokenizer_load(const char* vocab_path, const char* merges_path,
                                tibc_tokenizer** out) {
    return wrap([&] {
        require(vocab_path != nullptr && merges_path != nullptr && out != nullptr,
                "paths and out must not be null");
        *out = new tibc_tokenizer{bpe::Tokenizer::load(vocab_path, merges_path)};
    });
}

tibc_status tibc_tokenizer_save(const tibc_tokenizer* tokenizer, const char* vocab_path,
                                const char* merges_path) {
    return wrap([&] {
        require(tokenizer != nullptr && vocab_path != nullptr && merges_path != nullptr,
                "tokenizer and paths must not be null");
        tokenizer->tok.save(vocab_path, merges_path);
    });
}

tibc_status tibc_tokenizer_merge(const tibc_tokenizer* base, const tibc_tokenizer* addition,
                                 tibc_tokenizer** out) {
    return wrap([&] {
        require(base != nullptr && addition != nullptr && out != nullptr,
                "base, addition, out must not be null");
        *out = new tibc_tokenizer{bpe::merge_vocab(base->tok, addition->tok)};
    });
}

tibc_status tibc_tokenizer_encode(const tibc_tokenizer* tokenizer, const char* text,
                                  size_t text_len, uint32_t** ids_out, size_t* count_out) {
    return wrap([&] {
        require(tokenizer != nullptr && ids_out != nullptr && count_out != nullptr,
                "tokenizer, ids_out, count_out must not be null");
        require(text != nullptr || text_len == 0, "text must not be null");
        const auto ids = tokenizer->tok.encode(std::string_view(text, text_len));
        auto* buffer = static_cast<uint32_t*>(std::malloc(sizeof(uint32_t) * std::max<std::size_t>(ids.size(), 1)));
        if (buffer == nullptr) {
            throw std::bad_alloc();
        }
        std::memcpy(buffer, ids.data(), sizeof(uint32_t) * ids.size());
        *ids_out = buffer;
        *count_out = ids.size();
    });
}

tibc_status tibc_tokenizer_decode(const tibc_tokenizer* tokenizer, const uint32_t* ids,
                                  size_t count, char** text_out, size_t* text_len_out) {
    return wrap([&] {
        require(tokenizer != nullptr && text_out != nullptr, "tokenizer and text_out required");
        require(ids != nullptr || count == 0, "ids must not be null");
        const std::string text =
            tokenizer->tok.decode(std::span<const std::uint32_t>(ids, count));
        *text_out = dup_string(text);
        if (text_len_out != nullptr) {
            *text_len_out = text.size();
        }
    });
}

uint32_t tibc_tokenizer_vocab_size(const tibc_tokenizer* tokenizer) {
    return tokenizer == nullptr ? 0 : tokenizer->tok.vocab().size();
}

tibc_status tibc_tokenizer_compression(const tibc_tokenizer* tokenizer, const char* text,
                                       size_t text_len, char** report_json) {
    return wrap([&] {
        require(tokenizer != nullptr && report_json != nullptr,
                "tokenizer and report_json must not be null");
        require(text != nullptr || text_len == 0, "text must not be null");
        const auto report = tokenizer->tok.compression(std::string_view(text, text_len));
        *report_json = dup_string(compression_to_json(report).dump());
    });
}

void tibc_tokenizer_free(tibc_tokenizer* tokenizer) { delete tokenizer; }

tibc_status tibc_classify_text(const tibc_config* config, const char* text, size_t text_len,
                               char** scores_json) {
    return wrap([&] {
        require(scores_json != nullptr, "scores_json must not be null");
        require(text != nullptr, "text must not be null");
        const pipeline::PipelineConfig defaults;
        const pipeline::PipelineConfig& cfg = config != nullptr ? config->cfg : defaults;
        const auto classifier = langid::Classifier::builtin(cfg.langid_softmax_scale);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : classifier.classify(std::string_view(text, text_len))) {
            arr.push_back({{"language", s.language}, {"confidence", s.confidence}});
        }
        *scores_json = dup_string(arr.dump());
    });
}

tibc_status tibc_quality_check(const tibc_config* config, const char* text, size_t text_len,
                               char** outcome_json) {
    return wrap([&] {
        require(outcome_json != nullptr, "outcome_json must not be null");
        require(text != nullptr, "text must not be null");
        const pipeline::PipelineConfig defaults;
        const pipeline::PipelineConfig& cfg = config != nullptr ? config->cfg : defaults;
        const auto chain = quality::run_quality_chain(std::string_view(text, text_len), cfg.quality);
        nlohmann::json j = pipeline::outcome_to_json(chain.outcome);
        if (chain.transformed) {
            j["transformed_text"] = chain.transformed_text;
        }
        *outcome_json = dup_string(j.dump());
    });
}

tibc_status tibc_format_parallel(const tibc_config* config, const char* template_id,
                                 const char* source_text, size_t source_len,
                                 const char* target_text, size_t target_len, char** doc_json) {
    return wrap([&] {
        (void)config;
        require(template_id != nullptr && doc_json != nullptr,
                "template_id and doc_json must not be null");
        require(source_text != nullptr && target_text != nullptr,
                "source and target must not be null");
        const auto templates = pipeline::TemplateSet::builtin();
        const auto doc = pipeline::format_parallel(templates, template_id,
                                                   std::string_view(source_text, source_len),
                                                   std::string_view(target_text, target_len));
        *doc_json = dup_string(pipeline::doc_to_jsonl_line(doc));
    });
}

tibc_status tibc_pipeline_run(const tibc_config* config, const char* in_jsonl,
                              const char* out_jsonl, char** report_json) {
    return run_stage_list(config, in_jsonl, out_jsonl, report_json, nullptr);
}

tibc_status tibc_filter_run(const tibc_config* config, const char* in_jsonl,
                            const char* out_jsonl, char** report_json) {
    std::vector<std::string> stages;
    if (config != nullptr) {
        for (const auto& stage : config->cfg.stage_order) {
            if (stage == "langid" || stage == "quality") {
                stages.push_back(stage);
            }
        }
    }
    return run_stage_list(config, in_jsonl, out_jsonl, report_json, &stages);
}

tibc_status tibc_dedup_run(const tibc_config* config, const char* in_jsonl, const char* out_jsonl,
                           char** report_json) {
    static const std::vector<std::string> kStages = {"dedup"};
    return run_stage_list(config, in_jsonl, out_jsonl, report_json, &kStages);
}

tibc_status tibc_stats_run(const tibc_config* config, const char* in_jsonl,
                           const tibc_tokenizer* tokenizer, char** report_json) {
    return wrap([&] {
        require(config != nullptr && in_jsonl != nullptr && report_json != nullptr,
                "config, in, report_json must not be null");
        const auto docs = pipeline::read_jsonl(in_jsonl);
        const auto report = pipeline::corpus_stats(
            docs, tokenizer != nullptr ? &tokenizer->tok : nullptr, config->cfg.jobs);
        *report_json = dup_string(report.to_json().dump(2));
    });
}

tibc_status tibc_tokenize_run(const tibc_config* config, const tibc_tokenizer* tokenizer,
                              const char* in_jsonl, const char* out_jsonl, char** report_json) {
    return wrap([&] {
        require(config != nullptr && tokenizer != nullptr && in_jsonl != nullptr &&
                    out_jsonl != nullptr,
                "config, tokenizer, in, out must not be null");
        auto docs = pipeline::read_jsonl(in_jsonl);
        for (auto& doc : docs) {
            doc.ensure_id();
        }
        std::vector<std::vector<std::uint32_t>> encoded(docs.size());
        parallel_for(docs.size(), config->cfg.jobs,
                     [&](std::size_t i) { encoded[i] = tokenizer->tok.encode(docs[i].text); });
        std::string blob;
        std::uint64_t total_tokens = 0;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            nlohmann::json j;
            j["id"] = docs[i].id;
            j["ids"] = encoded[i];
            blob += j.dump();
            blob.push_back('\n');
            total_tokens += encoded[i].size();
        }
        pipeline::write_text_atomic(out_jsonl, blob);
        if (report_json != nullptr) {
            nlohmann::json j = {{"documents", docs.size()}, {"tokens", total_tokens}};
            *report_json = dup_string(j.dump(2));
        }
    });
}

tibc_status tibc_pack_run(const tibc_config* config, const tibc_tokenizer* tokenizer,
                          const char* in_jsonl, const char* out_path, char** report_json) {
    return wrap([&] {
        require(config != nullptr && tokenizer != nullptr && in_jsonl != nullptr &&
                    out_path != nullptr,
                "config, tokenizer, in, out must not be null");
        const auto docs = pipeline::read_jsonl(in_jsonl);
        bpe::Tokenizer tok = tokenizer->tok;  // separator may extend the vocab
        const std::uint32_t separator = tok.ensure_special(config->cfg.separator_token);
        pipeline::PackStats stats;
        const auto dataset = pipeline::pretokenize(docs, tok, config->cfg.sample_length, separator,
                                                   out_path, &stats, config->cfg.jobs);
        if (report_json != nullptr) {
            nlohmann::json j = {{"samples", dataset.sample_count()},
                                {"sample_length", dataset.sample_length},
                                {"document_tokens", stats.document_tokens},
                                {"separators", stats.separators},
                                {"dropped_tail", stats.dropped_tail}};
            *report_json = dup_string(j.dump(2));
        }
    });
}

tibc_status tibc_crawl_run(const tibc_config* config, const char* seeds_path,
                           const char* out_jsonl, char** report_json) {
    return wrap([&] {
        require(config != nullptr && seeds_path != nullptr && out_jsonl != nullptr,
                "config, seeds, out must not be null");
        std::ifstream in(seeds_path, std::ios::binary);
        if (!in) {
            throw IoError("cannot read seeds file: " + std::string(seeds_path));
        }
        std::vector<std::string> seeds;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || line[0] == '#') {
                continue;
            }
            seeds.push_back(line);
        }
        const auto fetcher = crawl::make_http_fetcher(config->cfg.crawl);
        const auto pages = crawl::crawl(seeds, *fetcher, config->cfg.crawl);

        std::vector<pipeline::Document> docs;
        std::uint64_t errors = 0;
        for (const auto& page : pages) {
            if (page.status < 200 || page.status >= 300) {
                ++errors;
            }
            pipeline::Document doc;
            doc.source = pipeline::Source::kCrawl;
            doc.url = page.url;
            doc.text = page.text;
            doc.extra["depth"] = page.depth;
            doc.extra["status"] = page.status;
            doc.extra["fetched_at"] = page.fetched_at;
            doc.ensure_id();
            docs.push_back(std::move(doc));
        }
        pipeline::write_jsonl_atomic(out_jsonl, docs);
        if (report_json != nullptr) {
            nlohmann::json j = {{"pages", pages.size()}, {"fetch_errors", errors}};
            *report_json = dup_string(j.dump(2));
        }
    });
}

}  // extern "C"
