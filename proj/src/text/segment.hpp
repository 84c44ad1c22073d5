// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tibcorpus::text {

/// Half-open range of codepoint offsets into a decoded text.
struct TextSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
    bool operator==(const TextSpan&) const = default;
};

/// All segmentation views of one text. Spans within each list are
/// non-overlapping and ordered; every sentence lies inside exactly one
/// paragraph because sentences are segmented per paragraph.
struct SegmentedText {
    std::vector<TextSpan> words;
    std::vector<TextSpan> sentences;
    std::vector<TextSpan> paragraphs;
    std::vector<TextSpan> lines;
};

constexpr char32_t kTsheg = U'་';
constexpr char32_t kShad = U'།';
constexpr char32_t kNyisShad = U'༎';

/// True iff cp lies in the Tibetan Unicode block [U+0F00, U+0FFF].
constexpr bool is_tibetan_codepoint(char32_t cp) { return cp >= 0x0F00 && cp <= 0x0FFF; }

bool is_unicode_whitespace(char32_t cp);
bool is_ascii_punct(char32_t cp);

/// Word delimiters: tsheg, shad, nyis shad, Unicode whitespace, ASCII
/// punctuation. A Tibetan word is therefore one tsheg-delimited syllable;
/// Latin-script words fall back to whitespace/punctuation tokens.
bool is_word_delimiter(char32_t cp);

/// Letter check over the scripts this pipeline sees in practice (Latin,
/// Greek, Cyrillic, Hebrew, Arabic, Devanagari, Tibetan consonants and
/// subjoined letters, CJK, Kana, Hangul).
bool is_letter(char32_t cp);

std::vector<TextSpan> split_words(std::u32string_view text);
std::vector<TextSpan> split_sentences(std::u32string_view text);
std::vector<TextSpan> split_paragraphs(std::u32string_view text);
std::vector<TextSpan> split_lines(std::u32string_view text);

SegmentedText segment(std::u32string_view text);

/// True iff at least one codepoint of the word is a letter.
bool is_alphabetic_word(std::u32string_view word);

inline std::u32string_view span_text(std::u32string_view text, TextSpan s) {
    return text.substr(s.begin, s.end - s.begin);
}

}  // namespace tibcorpus::text
