/* SPDX-License-Identifier: Apache-2.0
 *
 * tibcorpus — C API for the Tibetan corpus curation toolkit.
 *
 * All functions return tibc_status; on failure tibc_last_error() gives a
 * human-readable message for the calling thread. Objects are opaque handles
 * freed with their matching *_free function. Strings and id buffers returned
 * through out-parameters are owned by the caller and released with
 * tibc_string_free / tibc_ids_free.
 */
#ifndef TIBCORPUS_TIBCORPUS_H
#define TIBCORPUS_TIBCORPUS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TIBC_API __declspec(dllexport)
#else
#define TIBC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tibc_status {
    TIBC_OK = 0,
    TIBC_ERROR_INVALID_ARGUMENT = 1,
    TIBC_ERROR_CONFIG = 2,
    TIBC_ERROR_IO = 3,
    TIBC_ERROR_PARSE = 4,
    TIBC_ERROR_VOCAB_MISMATCH = 5,
    TIBC_ERROR_INTERNAL = 6
} tibc_status;

typedef struct tibc_config tibc_config;
typedef struct tibc_tokenizer tibc_tokenizer;

TIBC_API const char* tibc_version(void);
TIBC_API const char* tibc_status_name(tibc_status status);

/* Message for the most recent failure on this thread; empty string if none. */
TIBC_API const char* tibc_last_error(void);

TIBC_API void tibc_string_free(char* s);
TIBC_API void tibc_ids_free(uint32_t* ids);

/* ------------------------------------------------------------------ config */

/* Default configuration (published filter thresholds, built-in profiles). */
TIBC_API tibc_status tibc_config_create(tibc_config** out);
TIBC_API tibc_status tibc_config_load(const char* path, tibc_config** out);
TIBC_API tibc_status tibc_config_save(const tibc_config* config, const char* path);
TIBC_API tibc_status tibc_config_set_jobs(tibc_config* config, uint64_t jobs);
/* Overrides the MinHash seed. */
TIBC_API tibc_status tibc_config_set_seed(tibc_config* config, uint64_t seed);
/* Crawl limit overrides. Sentinels keep the config value: max_pages 0,
 * max_depth -2 (-1 means unlimited), delay_ms UINT64_MAX, obey_robots -1. */
TIBC_API tibc_status tibc_config_set_crawl_limits(tibc_config* config, uint64_t max_pages,
                                                  int64_t max_depth, uint64_t delay_ms,
                                                  int obey_robots);
TIBC_API void tibc_config_free(tibc_config* config);

/* --------------------------------------------------------------- tokenizer */

TIBC_API tibc_status tibc_tokenizer_byte_level(tibc_tokenizer** out);

/* Trains byte-level BPE on a corpus file (.jsonl: text fields; otherwise the
 * whole file is one document). target_size of 0 uses the configured value. */
TIBC_API tibc_status tibc_tokenizer_train_file(const tibc_config* config,
                                               const char* corpus_path, uint32_t target_size,
                                               tibc_tokenizer** out);
TIBC_API tibc_status tibc_tokenizer_load(const char* vocab_path, const char* merges_path,
                                         tibc_tokenizer** out);
TIBC_API tibc_status tibc_tokenizer_save(const tibc_tokenizer* tokenizer, const char* vocab_path,
                                         const char* merges_path);
/* Vocabulary extension: base + addition with duplicates removed. */
TIBC_API tibc_status tibc_tokenizer_merge(const tibc_tokenizer* base,
                                          const tibc_tokenizer* addition, tibc_tokenizer** out);
TIBC_API tibc_status tibc_tokenizer_encode(const tibc_tokenizer* tokenizer, const char* text,
                                           size_t text_len, uint32_t** ids_out,
                                           size_t* count_out);
TIBC_API tibc_status tibc_tokenizer_decode(const tibc_tokenizer* tokenizer, const uint32_t* ids,
                                           size_t count, char** text_out, size_t* text_len_out);
TIBC_API uint32_t tibc_tokenizer_vocab_size(const tibc_tokenizer* tokenizer);
/* JSON: {"codepoints", "tokens", "ratio", "tibetan_codepoints", ...}. */
TIBC_API tibc_status tibc_tokenizer_compression(const tibc_tokenizer* tokenizer, const char* text,
                                                size_t text_len, char** report_json);
TIBC_API void tibc_tokenizer_free(tibc_tokenizer* tokenizer);

/* ----------------------------------------------------------- document ops */

/* JSON array of {"language", "confidence"}, confidence descending. */
TIBC_API tibc_status tibc_classify_text(const tibc_config* config, const char* text,
                                        size_t text_len, char** scores_json);

/* Runs the five-family quality chain on one text; JSON FilterOutcome. */
TIBC_API tibc_status tibc_quality_check(const tibc_config* config, const char* text,
                                        size_t text_len, char** outcome_json);

/* Fills a parallel-data template; JSON Document record. */
TIBC_API tibc_status tibc_format_parallel(const tibc_config* config, const char* template_id,
                                          const char* source_text, size_t source_len,
                                          const char* target_text, size_t target_len,
                                          char** doc_json);

/* -------------------------------------------------------------- corpus ops */

/* Full configured pipeline: JSONL in, kept JSONL out (atomic write). */
TIBC_API tibc_status tibc_pipeline_run(const tibc_config* config, const char* in_jsonl,
                                       const char* out_jsonl, char** report_json);
/* langid + quality only. */
TIBC_API tibc_status tibc_filter_run(const tibc_config* config, const char* in_jsonl,
                                     const char* out_jsonl, char** report_json);
/* MinHash dedup only. */
TIBC_API tibc_status tibc_dedup_run(const tibc_config* config, const char* in_jsonl,
                                    const char* out_jsonl, char** report_json);
/* Corpus statistics; tokenizer may be NULL (token counts omitted). */
TIBC_API tibc_status tibc_stats_run(const tibc_config* config, const char* in_jsonl,
                                    const tibc_tokenizer* tokenizer, char** report_json);
/* Encodes every document; writes JSONL of {"id", "ids"}. */
TIBC_API tibc_status tibc_tokenize_run(const tibc_config* config,
                                       const tibc_tokenizer* tokenizer, const char* in_jsonl,
                                       const char* out_jsonl, char** report_json);
/* Packs to fixed-length samples in the PKDS binary format. */
TIBC_API tibc_status tibc_pack_run(const tibc_config* config, const tibc_tokenizer* tokenizer,
                                   const char* in_jsonl, const char* out_path,
                                   char** report_json);
/* Same-root-domain web crawl from a seed list file (one URL per line). */
TIBC_API tibc_status tibc_crawl_run(const tibc_config* config, const char* seeds_path,
                                    const char* out_jsonl, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* TIBCORPUS_TIBCORPUS_H */
