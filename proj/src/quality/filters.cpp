// SPDX-License-Identifier: Apache-2.0
#include "quality/filters.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "common/errors.hpp"
#include "common/utf8.hpp"

namespace tibcorpus::quality {

namespace {

using text::TextSpan;

void check_frac(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string("quality: ") + name + " must be in [0,1]");
    }
}

// Maps each distinct word to a small integer id; grams become id strings.
struct WordIds {
    std::vector<std::uint32_t> ids;
    std::vector<std::size_t> lens;  // codepoint length per word occurrence

    static WordIds of(const DocView& doc) {
        WordIds w;
        w.ids.reserve(doc.seg.words.size());
        w.lens.reserve(doc.seg.words.size());
        std::unordered_map<std::u32string, std::uint32_t> table;
        for (const TextSpan& s : doc.seg.words) {
            std::u32string word(text::span_text(doc.cps, s));
            const auto [it, inserted] = table.emplace(std::move(word), table.size());
            w.ids.push_back(it->second);
            w.lens.push_back(s.length());
        }
        return w;
    }
};

std::string gram_key(const std::vector<std::uint32_t>& ids, std::size_t pos, int n) {
    std::string key(static_cast<std::size_t>(n) * sizeof(std::uint32_t), '\0');
    std::memcpy(key.data(), ids.data() + pos, key.size());
    return key;
}

struct SpanStats {
    std::size_t total = 0;     // span occurrences
    std::size_t distinct = 0;  // distinct contents
    std::size_t dup_chars = 0; // codepoints in occurrences beyond the first
};

SpanStats span_duplication(const DocView& doc, const std::vector<TextSpan>& spans) {
    SpanStats st;
    st.total = spans.size();
    std::unordered_map<std::u32string, std::size_t> counts;
    for (const TextSpan& s : spans) {
        const auto [it, inserted] = counts.emplace(text::span_text(doc.cps, s), 0);
        if (!inserted) {
            st.dup_chars += s.length();
        }
        ++it->second;
    }
    st.distinct = counts.size();
    return st;
}

bool ascii_ifind(std::string_view haystack, std::string_view needle) {
    if (needle.empty() || needle.size() > haystack.size()) {
        return false;
    }
    const auto fold = [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    };
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (fold(haystack[i + j]) != fold(needle[j])) {
                match = false;
                break;
            }
        }
        if (match) {
            return true;
        }
    }
    return false;
}

bool has_citation_marker(const std::u32string& cps) {
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] != U'[') {
            continue;
        }
        std::size_t j = i + 1;
        while (j < cps.size() && cps[j] >= U'0' && cps[j] <= U'9') {
            ++j;
        }
        if (j > i + 1 && j < cps.size() && cps[j] == U']') {
            return true;
        }
    }
    return false;
}

bool ends_with(std::u32string_view s, std::u32string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

void FilterConfig::validate() const {
    for (int n = 2; n <= 4; ++n) {
        const auto it = top_ngram_max_frac.find(n);
        if (it == top_ngram_max_frac.end()) {
            throw ConfigError("quality: top_ngram_max_frac missing n=" + std::to_string(n));
        }
        check_frac(it->second, "top_ngram_max_frac");
    }
    for (int n = 5; n <= 10; ++n) {
        const auto it = dup_ngram_max_frac.find(n);
        if (it == dup_ngram_max_frac.end()) {
            throw ConfigError("quality: dup_ngram_max_frac missing n=" + std::to_string(n));
        }
        check_frac(it->second, "dup_ngram_max_frac");
    }
    check_frac(dup_sentence_char_max_frac, "dup_sentence_char_max_frac");
    check_frac(dup_sentence_max_frac, "dup_sentence_max_frac");
    check_frac(dup_paragraph_max_frac, "dup_paragraph_max_frac");
    check_frac(min_alpha_word_frac, "min_alpha_word_frac");
    check_frac(max_bullet_frac, "max_bullet_frac");
    check_frac(max_ellipsis_frac, "max_ellipsis_frac");
    check_frac(max_short_sentence_frac, "max_short_sentence_frac");
    check_frac(max_dup_char_frac, "max_dup_char_frac");
    if (min_words >= max_words) {
        throw ConfigError("quality: min_words must be < max_words");
    }
    if (!(min_avg_word_len < max_avg_word_len)) {
        throw ConfigError("quality: min_avg_word_len must be < max_avg_word_len");
    }
    if (max_symbol_word_ratio < 0 || max_newline_word_ratio < 0) {
        throw ConfigError("quality: ratios must be non-negative");
    }
}

DocView DocView::of(std::string_view utf8) {
    DocView doc;
    doc.cps = utf8::decode_lossy(utf8);
    doc.seg = text::segment(doc.cps);
    return doc;
}

double top_ngram_char_fraction(const DocView& doc, int n) {
    const std::size_t total_cp = doc.cps.size();
    if (n < 2 || total_cp == 0 || doc.seg.words.size() < static_cast<std::size_t>(n)) {
        return 0.0;
    }
    const WordIds w = WordIds::of(doc);

    struct Agg {
        std::size_t count = 0;
        std::size_t chars = 0;
        std::size_t first = 0;
    };
    std::unordered_map<std::string, Agg> grams;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= w.ids.size(); ++i) {
        auto& agg = grams[gram_key(w.ids, i, n)];
        if (agg.count == 0) {
            agg.first = i;
            for (int k = 0; k < n; ++k) {
                agg.chars += w.lens[i + static_cast<std::size_t>(k)];
            }
        }
        ++agg.count;
    }

    // Most frequent repeated gram; ties by larger coverage, then first seen.
    std::size_t best_cover = 0;
    std::size_t best_count = 0;
    std::size_t best_first = 0;
    bool found = false;
    for (const auto& [key, agg] : grams) {
        if (agg.count < 2) {
            continue;
        }
        const std::size_t cover = agg.count * agg.chars;
        const bool better =
            !found || agg.count > best_count ||
            (agg.count == best_count &&
             (cover > best_cover || (cover == best_cover && agg.first < best_first)));
        if (better) {
            found = true;
            best_count = agg.count;
            best_cover = cover;
            best_first = agg.first;
        }
    }
    if (!found) {
        return 0.0;
    }
    return static_cast<double>(best_cover) / static_cast<double>(total_cp);
}

double dup_ngram_char_fraction(const DocView& doc, int n) {
    const std::size_t total_cp = doc.cps.size();
    if (n < 1 || total_cp == 0 || doc.seg.words.size() < static_cast<std::size_t>(n)) {
        return 0.0;
    }
    const WordIds w = WordIds::of(doc);
    std::unordered_map<std::string, std::size_t> counts;
    const std::size_t positions = w.ids.size() - static_cast<std::size_t>(n) + 1;
    for (std::size_t i = 0; i < positions; ++i) {
        ++counts[gram_key(w.ids, i, n)];
    }
    std::vector<bool> marked(w.ids.size(), false);
    for (std::size_t i = 0; i < positions; ++i) {
        if (counts[gram_key(w.ids, i, n)] >= 2) {
            for (int k = 0; k < n; ++k) {
                marked[i + static_cast<std::size_t>(k)] = true;
            }
        }
    }
    std::size_t covered = 0;
    for (std::size_t i = 0; i < marked.size(); ++i) {
        if (marked[i]) {
            covered += w.lens[i];
        }
    }
    return static_cast<double>(covered) / static_cast<double>(total_cp);
}

double dup_sentence_char_fraction(const DocView& doc) {
    if (doc.cps.empty()) {
        return 0.0;
    }
    const SpanStats st = span_duplication(doc, doc.seg.sentences);
    return static_cast<double>(st.dup_chars) / static_cast<double>(doc.cps.size());
}

double dup_sentence_fraction(const DocView& doc) {
    const SpanStats st = span_duplication(doc, doc.seg.sentences);
    if (st.total == 0) {
        return 0.0;
    }
    return static_cast<double>(st.total - st.distinct) / static_cast<double>(st.total);
}

double dup_paragraph_fraction(const DocView& doc) {
    const SpanStats st = span_duplication(doc, doc.seg.paragraphs);
    if (st.total == 0) {
        return 0.0;
    }
    return static_cast<double>(st.total - st.distinct) / static_cast<double>(st.total);
}

FilterOutcome gopher_repetition(const DocView& doc, const FilterConfig& cfg) {
    FilterOutcome out;
    auto& m = out.measurements;
    for (int n = 2; n <= 4; ++n) {
        m["gopher.top_ngram_frac.n" + std::to_string(n)] = top_ngram_char_fraction(doc, n);
    }
    for (int n = 5; n <= 10; ++n) {
        m["gopher.dup_ngram_frac.n" + std::to_string(n)] = dup_ngram_char_fraction(doc, n);
    }
    m["gopher.dup_sentence_char_frac"] = dup_sentence_char_fraction(doc);
    m["gopher.dup_sentence_frac"] = dup_sentence_fraction(doc);
    m["gopher.dup_paragraph_frac"] = dup_paragraph_fraction(doc);

    for (int n = 2; n <= 4; ++n) {
        if (m["gopher.top_ngram_frac.n" + std::to_string(n)] > cfg.top_ngram_max_frac.at(n)) {
            out.verdict = Verdict::kRemoved;
            out.reason = "gopher.top_ngram_frac";
            out.detail = "n=" + std::to_string(n);
            return out;
        }
    }
    for (int n = 5; n <= 10; ++n) {
        if (m["gopher.dup_ngram_frac.n" + std::to_string(n)] > cfg.dup_ngram_max_frac.at(n)) {
            out.verdict = Verdict::kRemoved;
            out.reason = "gopher.dup_ngram_frac";
            out.detail = "n=" + std::to_string(n);
            return out;
        }
    }
    if (m["gopher.dup_sentence_char_frac"] > cfg.dup_sentence_char_max_frac) {
        return FilterOutcome{Verdict::kRemoved, "gopher.dup_sentence_char_frac", 0, {}, m};
    }
    if (m["gopher.dup_sentence_frac"] > cfg.dup_sentence_max_frac) {
        return FilterOutcome{Verdict::kRemoved, "gopher.dup_sentence_frac", 0, {}, m};
    }
    if (m["gopher.dup_paragraph_frac"] > cfg.dup_paragraph_max_frac) {
        return FilterOutcome{Verdict::kRemoved, "gopher.dup_paragraph_frac", 0, {}, m};
    }
    return out;
}

FilterOutcome gopher_quality(const DocView& doc, const FilterConfig& cfg) {
    FilterOutcome out;
    auto& m = out.measurements;

    const auto& words = doc.seg.words;
    const double word_count = static_cast<double>(words.size());

    std::size_t total_word_cp = 0;
    std::size_t alpha_words = 0;
    for (const TextSpan& w : words) {
        total_word_cp += w.length();
        if (text::is_alphabetic_word(text::span_text(doc.cps, w))) {
            ++alpha_words;
        }
    }
    const double avg_word_len = words.empty() ? 0.0 : static_cast<double>(total_word_cp) / word_count;
    const double alpha_frac = words.empty() ? 0.0 : static_cast<double>(alpha_words) / word_count;

    // Symbols: '#', '…', and non-overlapping "..." runs.
    std::size_t symbols = 0;
    for (std::size_t i = 0; i < doc.cps.size();) {
        const char32_t c = doc.cps[i];
        if (c == U'#' || c == U'…') {
            ++symbols;
            ++i;
        } else if (c == U'.' && i + 2 < doc.cps.size() && doc.cps[i + 1] == U'.' &&
                   doc.cps[i + 2] == U'.') {
            ++symbols;
            i += 3;
        } else {
            ++i;
        }
    }
    const double symbol_ratio = words.empty() ? 0.0 : static_cast<double>(symbols) / word_count;

    std::vector<std::u32string> ellipses;
    ellipses.reserve(cfg.ellipsis_suffixes.size());
    for (const std::string& s : cfg.ellipsis_suffixes) {
        ellipses.push_back(utf8::decode_lossy(s));
    }
    std::size_t bullet_sentences = 0;
    std::size_t ellipsis_sentences = 0;
    for (const TextSpan& s : doc.seg.sentences) {
        const auto sent = text::span_text(doc.cps, s);
        if (!sent.empty() && cfg.bullet_prefixes.find(sent.front()) != std::u32string::npos) {
            ++bullet_sentences;
        }
        for (const auto& suffix : ellipses) {
            if (ends_with(sent, suffix)) {
                ++ellipsis_sentences;
                break;
            }
        }
    }
    const double sentence_count = static_cast<double>(doc.seg.sentences.size());
    const double bullet_frac =
        doc.seg.sentences.empty() ? 0.0 : static_cast<double>(bullet_sentences) / sentence_count;
    const double ellipsis_frac =
        doc.seg.sentences.empty() ? 0.0 : static_cast<double>(ellipsis_sentences) / sentence_count;

    m["gopher.word_count"] = word_count;
    m["gopher.avg_word_len"] = avg_word_len;
    m["gopher.symbol_word_ratio"] = symbol_ratio;
    m["gopher.alpha_word_frac"] = alpha_frac;
    m["gopher.bullet_frac"] = bullet_frac;
    m["gopher.ellipsis_frac"] = ellipsis_frac;

    const auto removed = [&](const char* reason) {
        FilterOutcome o{Verdict::kRemoved, reason, 0, {}, m};
        return o;
    };
    if (words.size() < cfg.min_words) {
        return removed("gopher.too_few_words");
    }
    if (words.size() > cfg.max_words) {
        return removed("gopher.too_many_words");
    }
    if (avg_word_len < cfg.min_avg_word_len) {
        return removed("gopher.avg_word_len_low");
    }
    if (avg_word_len > cfg.max_avg_word_len) {
        return removed("gopher.avg_word_len_high");
    }
    if (symbol_ratio > cfg.max_symbol_word_ratio) {
        return removed("gopher.symbol_word_ratio");
    }
    if (alpha_frac < cfg.min_alpha_word_frac) {
        return removed("gopher.alpha_word_frac");
    }
    if (bullet_frac > cfg.max_bullet_frac) {
        return removed("gopher.bullet_frac");
    }
    if (ellipsis_frac > cfg.max_ellipsis_frac) {
        return removed("gopher.ellipsis_frac");
    }
    return out;
}

C4Result c4_filter(std::string_view input, const FilterConfig& cfg) {
    C4Result result;
    FilterOutcome& out = result.outcome;

    for (const std::string& bad : cfg.badwords) {
        if (!bad.empty() && ascii_ifind(input, bad)) {
            out = FilterOutcome::remove("c4.badword");
            out.detail = bad;
            return result;
        }
    }
    if (ascii_ifind(input, "lorem ipsum")) {
        out = FilterOutcome::remove("c4.lorem_ipsum");
        return result;
    }
    if (input.find('{') != std::string_view::npos || input.find('}') != std::string_view::npos) {
        out = FilterOutcome::remove("c4.curly_brace");
        return result;
    }
    const std::u32string cps = utf8::decode_lossy(input);
    if (has_citation_marker(cps)) {
        out = FilterOutcome::remove("c4.citation");
        return result;
    }

    // Line-level transform. Blank lines are paragraph structure, not content:
    // they pass through untouched and never count as dropped.
    std::vector<std::string_view> kept_lines;
    std::uint64_t dropped = 0;
    std::size_t content_kept = 0;
    std::size_t start = 0;
    const auto consider = [&](std::string_view line) {
        const std::u32string line_cps = utf8::decode_lossy(line);
        bool blank = true;
        for (char32_t c : line_cps) {
            if (!text::is_unicode_whitespace(c)) {
                blank = false;
                break;
            }
        }
        if (blank) {
            kept_lines.push_back(line);
            return;
        }
        const std::size_t words = text::split_words(line_cps).size();
        bool drop = words < cfg.c4_min_line_words;
        if (!drop && line.find("Javascript") != std::string_view::npos) {
            drop = true;
        }
        if (!drop) {
            for (const std::string& phrase : cfg.policy_phrases) {
                if (!phrase.empty() && ascii_ifind(line, phrase)) {
                    drop = true;
                    break;
                }
            }
        }
        if (drop) {
            ++dropped;
        } else {
            kept_lines.push_back(line);
            ++content_kept;
        }
    };
    for (std::size_t i = 0; i <= input.size(); ++i) {
        if (i == input.size() || input[i] == '\n') {
            if (i > start || i < input.size()) {
                consider(input.substr(start, i - start));
            }
            start = i + 1;
        }
    }

    out.measurements["c4.lines_dropped"] = static_cast<double>(dropped);
    if (content_kept == 0) {
        const auto measurements = out.measurements;
        out = FilterOutcome::remove("c4.empty");
        out.measurements = measurements;
        return result;
    }
    if (dropped > 0) {
        out.verdict = Verdict::kTransformed;
        out.lines_dropped = dropped;
        std::string text;
        for (std::size_t i = 0; i < kept_lines.size(); ++i) {
            if (i > 0) {
                text += '\n';
            }
            text += kept_lines[i];
        }
        result.text = std::move(text);
    }
    return result;
}

FilterOutcome fineweb_filter(const DocView& doc, const FilterConfig& cfg) {
    FilterOutcome out;
    auto& m = out.measurements;

    std::size_t short_sentences = 0;
    for (const TextSpan& s : doc.seg.sentences) {
        if (s.length() <= cfg.short_sentence_len) {
            ++short_sentences;
        }
    }
    const double short_frac = doc.seg.sentences.empty()
                                  ? 0.0
                                  : static_cast<double>(short_sentences) /
                                        static_cast<double>(doc.seg.sentences.size());

    // Duplicate-line character fraction over non-blank lines.
    std::unordered_map<std::u32string, std::size_t> line_counts;
    std::vector<const TextSpan*> content_lines;
    std::size_t line_cp_total = 0;
    for (const TextSpan& line : doc.seg.lines) {
        bool blank = true;
        for (std::size_t i = line.begin; i < line.end; ++i) {
            if (!text::is_unicode_whitespace(doc.cps[i])) {
                blank = false;
                break;
            }
        }
        if (blank) {
            continue;
        }
        content_lines.push_back(&line);
        line_cp_total += line.length();
        ++line_counts[std::u32string(text::span_text(doc.cps, line))];
    }
    std::size_t dup_line_cp = 0;
    for (const TextSpan* line : content_lines) {
        if (line_counts[std::u32string(text::span_text(doc.cps, *line))] >= 2) {
            dup_line_cp += line->length();
        }
    }
    const double dup_char_frac =
        line_cp_total == 0 ? 0.0
                           : static_cast<double>(dup_line_cp) / static_cast<double>(line_cp_total);

    std::size_t newlines = 0;
    for (char32_t c : doc.cps) {
        if (c == U'\n') {
            ++newlines;
        }
    }
    const std::size_t word_count = doc.seg.words.size();
    const double newline_ratio =
        static_cast<double>(newlines) / static_cast<double>(word_count == 0 ? 1 : word_count);

    m["fineweb.short_sentence_frac"] = short_frac;
    m["fineweb.dup_char_frac"] = dup_char_frac;
    m["fineweb.newline_word_ratio"] = newline_ratio;

    const auto removed = [&](const char* reason) {
        return FilterOutcome{Verdict::kRemoved, reason, 0, {}, m};
    };
    if (short_frac > cfg.max_short_sentence_frac) {
        return removed("fineweb.short_sentence_frac");
    }
    if (dup_char_frac > cfg.max_dup_char_frac) {
        return removed("fineweb.dup_char_frac");
    }
    if (newline_ratio > cfg.max_newline_word_ratio) {
        return removed("fineweb.newline_word_ratio");
    }
    return out;
}

FilterOutcome sensitive_filter(std::string_view input, const std::vector<std::string>& terms) {
    FilterOutcome out;
    out.measurements["sensitive.matched"] = 0.0;
    for (const std::string& term : terms) {
        if (!term.empty() && input.find(term) != std::string_view::npos) {
            out.verdict = Verdict::kRemoved;
            out.reason = "sensitive.term";
            out.detail = term;
            out.measurements["sensitive.matched"] = 1.0;
            return out;
        }
    }
    return out;
}

ChainResult run_quality_chain(std::string_view input, const FilterConfig& cfg) {
    ChainResult chain;
    auto& final_out = chain.outcome;
    const auto merge = [&](const FilterOutcome& o) {
        for (const auto& [k, v] : o.measurements) {
            final_out.measurements[k] = v;
        }
    };
    const auto finish_removed = [&](const FilterOutcome& o) {
        merge(o);
        final_out.verdict = Verdict::kRemoved;
        final_out.reason = o.reason;
        final_out.detail = o.detail;
        return chain;
    };

    DocView doc = DocView::of(input);
    const FilterOutcome rep = gopher_repetition(doc, cfg);
    if (rep.removed()) {
        return finish_removed(rep);
    }
    merge(rep);
    const FilterOutcome gq = gopher_quality(doc, cfg);
    if (gq.removed()) {
        return finish_removed(gq);
    }
    merge(gq);

    C4Result c4 = c4_filter(input, cfg);
    if (c4.outcome.removed()) {
        return finish_removed(c4.outcome);
    }
    merge(c4.outcome);
    std::string_view current = input;
    if (c4.outcome.verdict == Verdict::kTransformed) {
        chain.transformed = true;
        chain.transformed_text = std::move(c4.text);
        current = chain.transformed_text;
        final_out.lines_dropped = c4.outcome.lines_dropped;
        doc = DocView::of(current);
    }

    const FilterOutcome fw = fineweb_filter(doc, cfg);
    if (fw.removed()) {
        return finish_removed(fw);
    }
    merge(fw);

    const FilterOutcome sens = sensitive_filter(current, cfg.sensitive_terms);
    if (sens.removed()) {
        return finish_removed(sens);
    }
    merge(sens);

    final_out.verdict = chain.transformed ? Verdict::kTransformed : Verdict::kKept;
    return chain;
}

std::vector<std::string> load_term_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("quality: cannot read term file: " + path);
    }
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        // Trim ASCII whitespace.
        std::size_t b = line.find_first_not_of(" \t");
        std::size_t e = line.find_last_not_of(" \t");
        if (b == std::string::npos) {
            continue;
        }
        std::string term = line.substr(b, e - b + 1);
        if (term.empty() || term[0] == '#') {
            continue;
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

}  // namespace tibcorpus::quality
