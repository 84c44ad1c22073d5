// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "common/outcome.hpp"
#include "text/segment.hpp"

namespace tibcorpus::quality {

/// Threshold bundle for the five filter families. Defaults are the published
/// Gopher/C4/FineWeb values this pipeline runs with; every "more than X" /
/// "fewer than X" comparison is strict, so a measurement equal to its
/// threshold keeps the document.
struct FilterConfig {
    // Gopher repetition: most-frequent n-gram coverage (n = 2..4) and
    // any-repeated n-gram coverage (n = 5..10).
    std::map<int, double> top_ngram_max_frac = {{2, 0.20}, {3, 0.18}, {4, 0.16}};
    std::map<int, double> dup_ngram_max_frac = {{5, 0.15}, {6, 0.14}, {7, 0.13},
                                                {8, 0.12}, {9, 0.11}, {10, 0.10}};
    double dup_sentence_char_max_frac = 0.20;
    double dup_sentence_max_frac = 0.30;
    double dup_paragraph_max_frac = 0.30;

    // Gopher quality.
    std::uint64_t min_words = 50;
    std::uint64_t max_words = 10000;
    double min_avg_word_len = 2.0;
    double max_avg_word_len = 10.0;
    double max_symbol_word_ratio = 0.1;
    double min_alpha_word_frac = 0.80;
    double max_bullet_frac = 0.90;
    double max_ellipsis_frac = 0.30;

    // C4.
    std::uint64_t c4_min_line_words = 3;

    // FineWeb.
    std::uint64_t short_sentence_len = 30;
    double max_short_sentence_frac = 0.67;
    double max_dup_char_frac = 0.01;
    double max_newline_word_ratio = 0.3;

    std::u32string bullet_prefixes = U"•-*‣·";
    std::vector<std::string> ellipsis_suffixes = {"...", "…"};
    std::vector<std::string> policy_phrases = {"terms of use",  "privacy policy", "cookie policy",
                                               "uses cookies",  "use of cookie",  "use cookie"};
    std::vector<std::string> badwords;
    std::vector<std::string> sensitive_terms;

    /// Throws ConfigError when a value is out of range or inconsistent.
    void validate() const;
};

/// Decoded text plus its segmentation, shared by all metric functions.
struct DocView {
    std::u32string cps;
    text::SegmentedText seg;

    static DocView of(std::string_view utf8);
};

// Repetition metrics. Fractions are codepoint fractions of the whole text;
// the numerators exclude inter-word delimiters, the denominator is the full
// codepoint count. n-grams are over words.
double top_ngram_char_fraction(const DocView& doc, int n);
double dup_ngram_char_fraction(const DocView& doc, int n);
/// Codepoints in duplicate sentence occurrences beyond the first, over total.
double dup_sentence_char_fraction(const DocView& doc);
/// Sentence occurrences beyond the first of their content, over sentence count.
double dup_sentence_fraction(const DocView& doc);
double dup_paragraph_fraction(const DocView& doc);

FilterOutcome gopher_repetition(const DocView& doc, const FilterConfig& cfg);
FilterOutcome gopher_quality(const DocView& doc, const FilterConfig& cfg);

struct C4Result {
    FilterOutcome outcome;
    std::string text;  // surviving lines, set iff outcome.verdict == kTransformed
};
C4Result c4_filter(std::string_view text, const FilterConfig& cfg);

FilterOutcome fineweb_filter(const DocView& doc, const FilterConfig& cfg);
FilterOutcome sensitive_filter(std::string_view text, const std::vector<std::string>& terms);

struct ChainResult {
    FilterOutcome outcome;
    std::string transformed_text;  // set iff transformed
    bool transformed = false;
};

/// gopher repetition -> gopher quality -> C4 -> FineWeb -> sensitive, stopping
/// at the first removal. C4 line drops feed the transformed text to the
/// later filters. Measurements from every family that ran are aggregated.
ChainResult run_quality_chain(std::string_view text, const FilterConfig& cfg);

/// One term per line, UTF-8; '#'-prefixed comment lines and blanks ignored.
std::vector<std::string> load_term_file(const std::string& path);

}  // namespace tibcorpus::quality
