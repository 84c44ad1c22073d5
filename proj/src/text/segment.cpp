// SPDX-License-Identifier: Apache-2.0
#include "text/segment.hpp"

namespace tibcorpus::text {

bool is_unicode_whitespace(char32_t cp) {
    switch (cp) {
        case U'\t':
        case U'\n':
        case U'\v':
        case U'\f':
        case U'\r':
        case U' ':
        case U'':
        case U' ':
        case U' ':
        case U' ':
        case U' ':
        case U' ':
        case U' ':
        case U'　':
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_ascii_punct(char32_t cp) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool is_word_delimiter(char32_t cp) {
    return cp == kTsheg || cp == kShad || cp == kNyisShad || is_unicode_whitespace(cp) ||
           is_ascii_punct(cp);
}

bool is_letter(char32_t cp) {
    if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) return true;
    if (cp < 0x80) return false;
    if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
    if (cp >= 0x0386 && cp <= 0x03F5) return true;   // Greek
    if (cp >= 0x0400 && cp <= 0x04FF) return true;   // Cyrillic
    if (cp >= 0x05D0 && cp <= 0x05EA) return true;   // Hebrew
    if (cp >= 0x0620 && cp <= 0x064A) return true;   // Arabic
    if (cp >= 0x0904 && cp <= 0x0939) return true;   // Devanagari
    if (cp >= 0x0F40 && cp <= 0x0F6C) return true;   // Tibetan consonants
    if (cp >= 0x0F88 && cp <= 0x0F8C) return true;
    if (cp >= 0x0F90 && cp <= 0x0FBC) return true;   // Tibetan subjoined
    if (cp >= 0x3041 && cp <= 0x3096) return true;   // Hiragana
    if (cp >= 0x30A1 && cp <= 0x30FA) return true;   // Katakana
    if (cp >= 0x3400 && cp <= 0x4DBF) return true;   // CJK ext A
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;   // CJK
    if (cp >= 0xAC00 && cp <= 0xD7A3) return true;   // Hangul
    if (cp >= 0xF900 && cp <= 0xFA6D) return true;
    return false;
}

std::vector<TextSpan> split_words(std::u32string_view text) {
    std::vector<TextSpan> words;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_word_delimiter(text[i])) {
            ++i;
        }
        if (i >= n) {
            break;
        }
        const std::size_t start = i;
        while (i < n && !is_word_delimiter(text[i])) {
            ++i;
        }
        words.push_back({start, i});
    }
    return words;
}

std::vector<TextSpan> split_lines(std::u32string_view text) {
    std::vector<TextSpan> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == U'\n') {
            lines.push_back({start, i});
            start = i + 1;
        }
    }
    if (start < text.size()) {
        lines.push_back({start, text.size()});
    }
    return lines;
}

namespace {

bool is_blank(std::u32string_view text, TextSpan line) {
    for (std::size_t i = line.begin; i < line.end; ++i) {
        if (!is_unicode_whitespace(text[i])) {
            return false;
        }
    }
    return true;
}

TextSpan trimmed(std::u32string_view text, std::size_t begin, std::size_t end) {
    while (begin < end && is_unicode_whitespace(text[begin])) {
        ++begin;
    }
    while (end > begin && is_unicode_whitespace(text[end - 1])) {
        --end;
    }
    return {begin, end};
}

bool is_ascii_terminator(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }
bool is_shad(char32_t cp) { return cp == kShad || cp == kNyisShad; }

void sentences_in(std::u32string_view text, std::size_t begin, std::size_t end,
                  std::vector<TextSpan>& out) {
    std::size_t i = begin;
    while (i < end) {
        while (i < end && is_unicode_whitespace(text[i])) {
            ++i;
        }
        if (i >= end) {
            break;
        }
        const std::size_t start = i;
        bool terminated = false;
        while (i < end) {
            const char32_t c = text[i];
            if (is_shad(c)) {
                ++i;
                while (i < end && is_shad(text[i])) {
                    ++i;
                }
                terminated = true;
                break;
            }
            if (is_ascii_terminator(c)) {
                std::size_t j = i + 1;
                while (j < end && is_ascii_terminator(text[j])) {
                    ++j;
                }
                if (j >= end || is_unicode_whitespace(text[j])) {
                    i = j;
                    terminated = true;
                    break;
                }
                i = j;  // embedded dot, e.g. "3.14"
                continue;
            }
            ++i;
        }
        const TextSpan span = terminated ? TextSpan{start, i} : trimmed(text, start, end);
        if (span.begin < span.end) {
            out.push_back(span);
        }
        if (!terminated) {
            break;
        }
    }
}

}  // namespace

std::vector<TextSpan> split_paragraphs(std::u32string_view text) {
    std::vector<TextSpan> paragraphs;
    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size()) {
        while (i < lines.size() && is_blank(text, lines[i])) {
            ++i;
        }
        if (i >= lines.size()) {
            break;
        }
        const std::size_t first = i;
        while (i < lines.size() && !is_blank(text, lines[i])) {
            ++i;
        }
        const TextSpan span = trimmed(text, lines[first].begin, lines[i - 1].end);
        if (span.begin < span.end) {
            paragraphs.push_back(span);
        }
    }
    return paragraphs;
}

std::vector<TextSpan> split_sentences(std::u32string_view text) {
    std::vector<TextSpan> sentences;
    for (const TextSpan& p : split_paragraphs(text)) {
        sentences_in(text, p.begin, p.end, sentences);
    }
    return sentences;
}

SegmentedText segment(std::u32string_view text) {
    SegmentedText seg;
    seg.words = split_words(text);
    seg.paragraphs = split_paragraphs(text);
    for (const TextSpan& p : seg.paragraphs) {
        sentences_in(text, p.begin, p.end, seg.sentences);
    }
    seg.lines = split_lines(text);
    return seg;
}

bool is_alphabetic_word(std::u32string_view word) {
    for (char32_t cp : word) {
        if (is_letter(cp)) {
            return true;
        }
    }
    return false;
}

}  // namespace tibcorpus::text
