// SPDX-License-Identifier: Apache-2.0
//
// tibcorpus CLI. Thin shell over the C API: subcommands map one-to-one onto
// tibc_* calls; exit codes are 0 on success, 2 for configuration errors,
// 3 for I/O errors, 1 otherwise.
#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "tibcorpus/tibcorpus.h"

namespace {

struct ConfigHandle {
    tibc_config* ptr = nullptr;
    ~ConfigHandle() { tibc_config_free(ptr); }
};

struct TokenizerHandle {
    tibc_tokenizer* ptr = nullptr;
    ~TokenizerHandle() { tibc_tokenizer_free(ptr); }
};

struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { tibc_string_free(ptr); }
};

int exit_code(tibc_status status) {
    switch (status) {
        case TIBC_OK:
            return 0;
        case TIBC_ERROR_CONFIG:
        case TIBC_ERROR_INVALID_ARGUMENT:
            return 2;
        case TIBC_ERROR_IO:
            return 3;
        default:
            return 1;
    }
}

int fail(tibc_status status) {
    std::fprintf(stderr, "tibcorpus: %s: %s\n", tibc_status_name(status), tibc_last_error());
    return exit_code(status);
}

int emit_report(const StringHandle& report, const std::string& report_path) {
    if (report.ptr == nullptr) {
        return 0;
    }
    if (report_path.empty()) {
        std::printf("%s\n", report.ptr);
        return 0;
    }
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << report.ptr << "\n")) {
        std::fprintf(stderr, "tibcorpus: cannot write report to %s\n", report_path.c_str());
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tibetan pre-training corpus curation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global --config/--jobs/--seed may follow the subcommand

    std::string config_path;
    std::uint64_t jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "Path to a pipeline config JSON file");
    app.add_option("--jobs", jobs, "Worker threads (default: from config)");
    app.add_option("--seed", seed, "MinHash seed override")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* crawl_cmd = app.add_subcommand("crawl", "Recursive same-root-domain crawl");
    std::string seeds_path, crawl_out, crawl_report;
    std::uint64_t max_pages = 0;
    std::uint64_t delay_ms = UINT64_MAX;
    std::int64_t max_depth = -2;
    bool no_robots = false;
    crawl_cmd->add_option("--seeds", seeds_path, "Seed URL list, one per line")->required();
    crawl_cmd->add_option("--out", crawl_out, "Output JSONL of fetched pages")->required();
    crawl_cmd->add_option("--max-pages", max_pages, "Page budget");
    crawl_cmd->add_option("--max-depth", max_depth, "Link depth limit (-1 = unlimited)");
    crawl_cmd->add_option("--delay-ms", delay_ms, "Politeness delay per host");
    crawl_cmd->add_flag("--no-robots", no_robots, "Ignore robots.txt");
    crawl_cmd->add_option("--report", crawl_report, "Write the crawl report here");

    auto* filter_cmd = app.add_subcommand("filter", "Language + quality filtering");
    std::string filter_in, filter_out, filter_report;
    filter_cmd->add_option("--in", filter_in, "Input JSONL corpus")->required();
    filter_cmd->add_option("--out", filter_out, "Output JSONL of kept documents")->required();
    filter_cmd->add_option("--report", filter_report, "Write the stage report here");

    auto* dedup_cmd = app.add_subcommand("dedup", "MinHash near-duplicate removal");
    std::string dedup_in, dedup_out, dedup_report;
    dedup_cmd->add_option("--in", dedup_in, "Input JSONL corpus")->required();
    dedup_cmd->add_option("--out", dedup_out, "Output JSONL of kept documents")->required();
    dedup_cmd->add_option("--report", dedup_report, "Write the stage report here");

    auto* train_cmd = app.add_subcommand("train-tokenizer", "Train byte-level BPE");
    std::string train_in, train_vocab, train_merges;
    std::uint64_t target_size = 0;
    train_cmd->add_option("--in", train_in, "Training corpus (.jsonl or raw text)")->required();
    train_cmd->add_option("--vocab-out", train_vocab, "Vocabulary file to write")->required();
    train_cmd->add_option("--merges-out", train_merges, "Merges file to write")->required();
    train_cmd->add_option("--target-size", target_size, "Vocabulary size (default from config)");

    auto* merge_cmd = app.add_subcommand("merge-vocab", "Extend a base vocabulary");
    std::string base_vocab, base_merges, add_vocab, add_merges, merged_vocab, merged_merges;
    merge_cmd->add_option("--base-vocab", base_vocab)->required();
    merge_cmd->add_option("--base-merges", base_merges)->required();
    merge_cmd->add_option("--add-vocab", add_vocab)->required();
    merge_cmd->add_option("--add-merges", add_merges)->required();
    merge_cmd->add_option("--vocab-out", merged_vocab)->required();
    merge_cmd->add_option("--merges-out", merged_merges)->required();

    auto* tokenize_cmd = app.add_subcommand("tokenize", "Encode documents to token ids");
    std::string tok_in, tok_out, tok_vocab, tok_merges, tok_report;
    tokenize_cmd->add_option("--in", tok_in, "Input JSONL corpus")->required();
    tokenize_cmd->add_option("--out", tok_out, "Output JSONL of {id, ids}")->required();
    tokenize_cmd->add_option("--vocab", tok_vocab, "Vocabulary file")->required();
    tokenize_cmd->add_option("--merges", tok_merges, "Merges file")->required();
    tokenize_cmd->add_option("--report", tok_report, "Write the token report here");

    auto* pack_cmd = app.add_subcommand("pack", "Pack documents into fixed-length samples");
    std::string pack_in, pack_out, pack_vocab, pack_merges, pack_report;
    pack_cmd->add_option("--in", pack_in, "Input JSONL corpus")->required();
    pack_cmd->add_option("--out", pack_out, "Output PKDS dataset")->required();
    pack_cmd->add_option("--vocab", pack_vocab, "Vocabulary file")->required();
    pack_cmd->add_option("--merges", pack_merges, "Merges file")->required();
    pack_cmd->add_option("--report", pack_report, "Write the pack report here");

    auto* stats_cmd = app.add_subcommand("stats", "Per-source / per-language corpus totals");
    std::string stats_in, stats_vocab, stats_merges, stats_report;
    stats_cmd->add_option("--in", stats_in, "Input JSONL corpus")->required();
    stats_cmd->add_option("--vocab", stats_vocab, "Vocabulary file (enables token counts)");
    stats_cmd->add_option("--merges", stats_merges, "Merges file");
    stats_cmd->add_option("--report", stats_report, "Write the report here (default stdout)");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Full langid/quality/dedup run");
    std::string pipe_in, pipe_out, pipe_report;
    pipeline_cmd->add_option("--in", pipe_in, "Input JSONL corpus")->required();
    pipeline_cmd->add_option("--out", pipe_out, "Output JSONL of kept documents")->required();
    pipeline_cmd->add_option("--report", pipe_report, "Write the run report here");

    CLI11_PARSE(app, argc, argv);

    ConfigHandle config;
    tibc_status status = config_path.empty() ? tibc_config_create(&config.ptr)
                                             : tibc_config_load(config_path.c_str(), &config.ptr);
    if (status != TIBC_OK) {
        return fail(status);
    }
    if (jobs > 0 && (status = tibc_config_set_jobs(config.ptr, jobs)) != TIBC_OK) {
        return fail(status);
    }
    if (seed_set && (status = tibc_config_set_seed(config.ptr, seed)) != TIBC_OK) {
        return fail(status);
    }

    if (crawl_cmd->parsed()) {
        status = tibc_config_set_crawl_limits(config.ptr, max_pages, max_depth, delay_ms,
                                              no_robots ? 0 : -1);
        if (status != TIBC_OK) {
            return fail(status);
        }
        StringHandle report;
        status = tibc_crawl_run(config.ptr, seeds_path.c_str(), crawl_out.c_str(), &report.ptr);
        if (status != TIBC_OK) {
            return fail(status);
        }
        return emit_report(report, crawl_report);
    }

    if (filter_cmd->parsed()) {
        StringHandle report;
        status = tibc_filter_run(config.ptr, filter_in.c_str(), filter_out.c_str(), &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, filter_report);
    }

    if (dedup_cmd->parsed()) {
        StringHandle report;
        status = tibc_dedup_run(config.ptr, dedup_in.c_str(), dedup_out.c_str(), &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, dedup_report);
    }

    if (train_cmd->parsed()) {
        TokenizerHandle tokenizer;
        status = tibc_tokenizer_train_file(config.ptr, train_in.c_str(),
                                           static_cast<uint32_t>(target_size), &tokenizer.ptr);
        if (status != TIBC_OK) {
            return fail(status);
        }
        status = tibc_tokenizer_save(tokenizer.ptr, train_vocab.c_str(), train_merges.c_str());
        if (status != TIBC_OK) {
            return fail(status);
        }
        std::printf("trained vocabulary of %u tokens\n",
                    tibc_tokenizer_vocab_size(tokenizer.ptr));
        return 0;
    }

    if (merge_cmd->parsed()) {
        TokenizerHandle base, addition, merged;
        if ((status = tibc_tokenizer_load(base_vocab.c_str(), base_merges.c_str(), &base.ptr)) !=
            TIBC_OK) {
            return fail(status);
        }
        if ((status = tibc_tokenizer_load(add_vocab.c_str(), add_merges.c_str(),
                                          &addition.ptr)) != TIBC_OK) {
            return fail(status);
        }
        if ((status = tibc_tokenizer_merge(base.ptr, addition.ptr, &merged.ptr)) != TIBC_OK) {
            return fail(status);
        }
        if ((status = tibc_tokenizer_save(merged.ptr, merged_vocab.c_str(),
                                          merged_merges.c_str())) != TIBC_OK) {
            return fail(status);
        }
        std::printf("merged vocabulary: %u base + %u addition -> %u tokens\n",
                    tibc_tokenizer_vocab_size(base.ptr), tibc_tokenizer_vocab_size(addition.ptr),
                    tibc_tokenizer_vocab_size(merged.ptr));
        return 0;
    }

    if (tokenize_cmd->parsed()) {
        TokenizerHandle tokenizer;
        if ((status = tibc_tokenizer_load(tok_vocab.c_str(), tok_merges.c_str(),
                                          &tokenizer.ptr)) != TIBC_OK) {
            return fail(status);
        }
        StringHandle report;
        status = tibc_tokenize_run(config.ptr, tokenizer.ptr, tok_in.c_str(), tok_out.c_str(),
                                   &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, tok_report);
    }

    if (pack_cmd->parsed()) {
        TokenizerHandle tokenizer;
        if ((status = tibc_tokenizer_load(pack_vocab.c_str(), pack_merges.c_str(),
                                          &tokenizer.ptr)) != TIBC_OK) {
            return fail(status);
        }
        StringHandle report;
        status = tibc_pack_run(config.ptr, tokenizer.ptr, pack_in.c_str(), pack_out.c_str(),
                               &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, pack_report);
    }

    if (stats_cmd->parsed()) {
        TokenizerHandle tokenizer;
        if (!stats_vocab.empty()) {
            if (stats_merges.empty()) {
                std::fprintf(stderr, "tibcorpus: stats --vocab requires --merges\n");
                return 2;
            }
            if ((status = tibc_tokenizer_load(stats_vocab.c_str(), stats_merges.c_str(),
                                              &tokenizer.ptr)) != TIBC_OK) {
                return fail(status);
            }
        }
        StringHandle report;
        status = tibc_stats_run(config.ptr, stats_in.c_str(), tokenizer.ptr, &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, stats_report);
    }

    if (pipeline_cmd->parsed()) {
        StringHandle report;
        status = tibc_pipeline_run(config.ptr, pipe_in.c_str(), pipe_out.c_str(), &report.ptr);
        return status != TIBC_OK ? fail(status) : emit_report(report, pipe_report);
    }

    return 0;
}
