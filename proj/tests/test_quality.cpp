// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "common/errors.hpp"
#include "common/utf8.hpp"
#include "quality/filters.hpp"
#include "support/boundary.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace tibcorpus;
using quality::DocView;
using quality::FilterConfig;
using testutil::ascii_word;

namespace {

const FilterConfig kDefaults{};

// Words/sentences mixer for oracle-equivalence runs: Tibetan and ASCII with
// planted repetitions.
std::string random_doc(std::uint64_t seed, std::size_t max_words) {
    testutil::TibetanGenerator gen(seed);
    auto& rng = gen.rng();
    const std::size_t words = 1 + rng.next_below(max_words);
    std::string doc;
    std::vector<std::string> history;
    for (std::size_t i = 0; i < words; ++i) {
        std::string w;
        if (!history.empty() && rng.next_below(100) < 35) {
            w = history[rng.next_below(history.size())];  // repetition
        } else if (rng.next_below(2) == 0) {
            w = gen.syllable();
        } else {
            w = ascii_word(rng.next_below(300), 2 + rng.next_below(5));
        }
        history.push_back(w);
        if (!doc.empty()) {
            const std::uint64_t sep = rng.next_below(12);
            if (sep == 0) {
                doc += ". ";
            } else if (sep == 1) {
                doc += "། ";
            } else if (sep == 2) {
                doc += "\n";
            } else if (sep == 3) {
                doc += "\n\n";
            } else if (sep < 8) {
                doc += "་";
            } else {
                doc += " ";
            }
        }
        doc += w;
    }
    return doc;
}

}  // namespace

TEST_CASE("top n-gram fraction examples") {
    // Two-word phrase repeated 10x and nothing else: coverage 10*4 of 59 cps.
    std::string phrase_doc;
    for (int i = 0; i < 10; ++i) {
        if (i > 0) {
            phrase_doc += ' ';
        }
        phrase_doc += "ab cd";
    }
    const DocView doc = DocView::of(phrase_doc);
    CHECK(quality::top_ngram_char_fraction(doc, 2) == doctest::Approx(40.0 / 59.0).epsilon(1e-12));

    CHECK(quality::top_ngram_char_fraction(DocView::of("all words here are distinct tokens"), 2) ==
          0.0);
    CHECK(quality::top_ngram_char_fraction(DocView::of("single"), 2) == 0.0);
}

TEST_CASE("duplicate n-gram fraction examples") {
    CHECK(quality::dup_ngram_char_fraction(DocView::of("six distinct words appear exactly once"),
                                           5) == 0.0);
    // The same 5-word sentence twice; value must equal the quadratic marker.
    const std::string twice = "aa bb cc dd ee. aa bb cc dd ee.";
    const double expected = oracles::dup_ngram_char_fraction(twice, 5);
    CHECK(expected == doctest::Approx(20.0 / 31.0).epsilon(1e-12));
    CHECK(quality::dup_ngram_char_fraction(DocView::of(twice), 5) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(quality::dup_ngram_char_fraction(DocView::of("only four words here"), 5) == 0.0);
}

TEST_CASE("metric oracle equivalence on randomized documents") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const std::string doc_text = random_doc(seed, 120);
        const DocView doc = DocView::of(doc_text);
        for (int n = 2; n <= 4; ++n) {
            CHECK(quality::top_ngram_char_fraction(doc, n) ==
                  doctest::Approx(oracles::top_ngram_char_fraction(doc_text, n)).epsilon(1e-12));
        }
        for (int n = 5; n <= 10; ++n) {
            CHECK(quality::dup_ngram_char_fraction(doc, n) ==
                  doctest::Approx(oracles::dup_ngram_char_fraction(doc_text, n)).epsilon(1e-12));
        }
        CHECK(quality::dup_sentence_char_fraction(doc) ==
              doctest::Approx(oracles::dup_sentence_char_fraction(doc_text)).epsilon(1e-12));
        CHECK(quality::dup_sentence_fraction(doc) ==
              doctest::Approx(oracles::dup_sentence_fraction(doc_text)).epsilon(1e-12));
        CHECK(quality::dup_paragraph_fraction(doc) ==
              doctest::Approx(oracles::dup_paragraph_fraction(doc_text)).epsilon(1e-12));
    }
}

TEST_CASE("gopher repetition verdicts") {
    // A sentence repeated four times among distinct long sentences trips the
    // duplicate-sentence fraction (the short duplicate is a single word, so
    // no n-gram rule fires first).
    std::string doc;
    std::size_t uniq = 0;
    const auto fresh = [&uniq](std::size_t count) {
        std::vector<std::string> words;
        for (std::size_t k = 0; k < count; ++k) {
            words.push_back(ascii_word(uniq++, 9));
        }
        return testutil::join_words(words);
    };
    for (int i = 0; i < 4; ++i) {
        doc += "dup.";
        doc += " ";
        doc += fresh(3) + ". ";
    }
    doc += fresh(2) + ".";
    const auto removed = quality::gopher_repetition(DocView::of(doc), kDefaults);
    CHECK(removed.removed());
    CHECK(removed.reason == "gopher.dup_sentence_frac");

    std::vector<std::string> sentences;
    for (int i = 0; i < 10; ++i) {
        sentences.push_back(ascii_word(100 + i, 6) + " " + ascii_word(200 + i, 6) + " " +
                            ascii_word(300 + i, 6) + ".");
    }
    const auto kept = quality::gopher_repetition(DocView::of(testutil::join_words(sentences)),
                                                 kDefaults);
    CHECK(kept.kept());
    CHECK(kept.measurements.count("gopher.top_ngram_frac.n2") == 1);

    // One repeated 3-gram covering ~17% of characters stays under 0.18.
    std::string three_gram = "abc def ghi qqq abc def ghi";  // coverage 18
    const std::size_t pad = 106 - utf8::count_codepoints(three_gram) - 1;
    three_gram += " ";
    three_gram += ascii_word(50, pad);
    REQUIRE(utf8::count_codepoints(three_gram) == 106);
    const DocView tg = DocView::of(three_gram);
    CHECK(quality::top_ngram_char_fraction(tg, 3) ==
          doctest::Approx(18.0 / 106.0).epsilon(1e-12));
    const auto at = quality::gopher_repetition(tg, kDefaults);
    CHECK(at.kept());
}

TEST_CASE("gopher quality verdicts") {
    {
        std::vector<std::string> words;
        for (int i = 0; i < 49; ++i) {
            words.push_back(ascii_word(i, 4));
        }
        const auto out = quality::gopher_quality(DocView::of(testutil::join_words(words)),
                                                 kDefaults);
        CHECK(out.removed());
        CHECK(out.reason == "gopher.too_few_words");
    }
    {
        std::vector<std::string> words;
        for (int i = 0; i < 50; ++i) {
            words.push_back(ascii_word(i, 4));
        }
        const auto out = quality::gopher_quality(DocView::of(testutil::join_words(words)),
                                                 kDefaults);
        CHECK(out.kept());
        CHECK(out.measurements.at("gopher.word_count") == 50.0);
        CHECK(out.measurements.at("gopher.avg_word_len") == 4.0);
    }
    {
        // 80 sentences of five words, 25 ending with an ellipsis: 0.3125.
        std::size_t uniq = 0;
        std::vector<std::string> sentences;
        for (int i = 0; i < 80; ++i) {
            std::vector<std::string> words;
            for (int k = 0; k < 5; ++k) {
                words.push_back(ascii_word(uniq++, 4));
            }
            sentences.push_back(testutil::join_words(words) + (i < 25 ? "..." : "."));
        }
        const auto out = quality::gopher_quality(DocView::of(testutil::join_words(sentences)),
                                                 kDefaults);
        CHECK(out.removed());
        CHECK(out.reason == "gopher.ellipsis_frac");
        CHECK(out.measurements.at("gopher.ellipsis_frac") ==
              doctest::Approx(25.0 / 80.0).epsilon(1e-12));
    }
}

TEST_CASE("c4 filter verdicts") {
    const FilterConfig& cfg = kDefaults;
    CHECK(quality::c4_filter("curly { anywhere removes the page", cfg).outcome.reason ==
          "c4.curly_brace");
    CHECK(quality::c4_filter("Lorem Ipsum dolor sit amet", cfg).outcome.reason ==
          "c4.lorem_ipsum");
    CHECK(quality::c4_filter("a wikipedia style citation [12] appears", cfg).outcome.reason ==
          "c4.citation");

    // Javascript is case-sensitive.
    const auto js = quality::c4_filter("lines with Javascript are dropped here\nbut this one stays put", cfg);
    CHECK(js.outcome.verdict == Verdict::kTransformed);
    CHECK(js.outcome.lines_dropped == 1);
    const auto lower_js =
        quality::c4_filter("plain javascript lowercase survives the line filter fine", cfg);
    CHECK(lower_js.outcome.verdict == Verdict::kKept);

    // Two short lines out of five are dropped.
    const std::string page =
        "one two three words\n"
        "two words\n"
        "this line has plenty of words\n"
        "short line\n"
        "final line also has enough words";
    const auto out = quality::c4_filter(page, cfg);
    CHECK(out.outcome.verdict == Verdict::kTransformed);
    CHECK(out.outcome.lines_dropped == 2);
    CHECK(out.text == "one two three words\nthis line has plenty of words\nfinal line also has enough words");

    // Policy phrases are case-insensitive.
    const auto policy = quality::c4_filter("read our Privacy Policy today please\nactual content stays here fine", cfg);
    CHECK(policy.outcome.verdict == Verdict::kTransformed);
    CHECK(policy.outcome.lines_dropped == 1);

    FilterConfig with_badwords = cfg;
    with_badwords.badwords = {"offensiveterm"};
    CHECK(quality::c4_filter("page with OffensiveTerm inside", with_badwords).outcome.reason ==
          "c4.badword");
}

TEST_CASE("fineweb filter verdicts") {
    // Sentence lengths {10, 12, 200}: short fraction 2/3 < 0.67 keeps it.
    const std::string doc = ascii_word(0, 9) + ". " + ascii_word(1, 11) + ". " +
                            ascii_word(2, 100) + " " + ascii_word(3, 98) + ".";
    const auto out = quality::fineweb_filter(DocView::of(doc), kDefaults);
    CHECK(out.kept());
    CHECK(out.measurements.at("fineweb.short_sentence_frac") ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Single-line 100-word document: newline ratio 0.
    std::vector<std::string> words;
    for (int i = 0; i < 100; ++i) {
        words.push_back(ascii_word(i, 5));
    }
    const auto single = quality::fineweb_filter(DocView::of(testutil::join_words(words)),
                                                kDefaults);
    CHECK(single.measurements.at("fineweb.newline_word_ratio") == 0.0);

    // Duplicated-line character fraction agrees with the quadratic oracle.
    std::string lines;
    for (int i = 0; i < 100; ++i) {
        lines += ascii_word(2000 + i, 20) + " " + ascii_word(2200 + i, 20) + " " +
                 ascii_word(2400 + i, 7) + ".\n";
    }
    const std::string repeated = ascii_word(3000, 15) + " " + ascii_word(3001, 15) + " " +
                                 ascii_word(3002, 16) + ".";
    for (int i = 0; i < 5; ++i) {
        lines += repeated + "\n";
    }
    const double expected = oracles::fineweb_dup_char_fraction(lines);
    const auto dup = quality::fineweb_filter(DocView::of(lines), kDefaults);
    CHECK(dup.measurements.at("fineweb.dup_char_frac") ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(dup.removed());
    CHECK(dup.reason == "fineweb.dup_char_frac");
}

TEST_CASE("sensitive filter") {
    CHECK(quality::sensitive_filter("any text at all", {}).kept());
    const auto hit = quality::sensitive_filter("contains the term X here", {"X"});
    CHECK(hit.removed());
    CHECK(hit.reason == "sensitive.term");
    CHECK(hit.detail == "X");
    CHECK(quality::sensitive_filter("clean text", {"absent"}).kept());
}

TEST_CASE("term file loading") {
    const auto dir = testutil::fresh_temp_dir("terms");
    const std::string path = (dir / "terms.txt").string();
    {
        std::ofstream out(path);
        out << "# comment line\n\nfirst term\n  padded  \nsecond\n";
    }
    const auto terms = quality::load_term_file(path);
    REQUIRE(terms.size() == 3);
    CHECK(terms[0] == "first term");
    CHECK(terms[1] == "padded");
    CHECK(terms[2] == "second");
    CHECK_THROWS_AS(quality::load_term_file((dir / "missing.txt").string()), IoError);
}

TEST_CASE("quality chain order and transforms") {
    // Failing both gopher-quality (too few words) and fineweb: the chain
    // reports the gopher rule.
    const auto both = quality::run_quality_chain("tiny. doc.", kDefaults);
    CHECK(both.outcome.removed());
    CHECK(both.outcome.reason == "gopher.too_few_words");

    // A clean long document passes with all five measurement families present.
    testutil::TibetanGenerator gen(5);
    const std::string clean = gen.document(120, 3);
    const auto kept = quality::run_quality_chain(clean, kDefaults);
    CHECK(kept.outcome.verdict == Verdict::kKept);
    CHECK(kept.outcome.measurements.count("gopher.top_ngram_frac.n2") == 1);
    CHECK(kept.outcome.measurements.count("gopher.word_count") == 1);
    CHECK(kept.outcome.measurements.count("c4.lines_dropped") == 1);
    CHECK(kept.outcome.measurements.count("fineweb.short_sentence_frac") == 1);
    CHECK(kept.outcome.measurements.count("sensitive.matched") == 1);

    // A document whose only flaw is short lines is kept with transformed text.
    std::string doc = gen.paragraph(80);
    doc += "\nab cd\n";
    doc += gen.paragraph(80);
    const auto transformed = quality::run_quality_chain(doc, kDefaults);
    CHECK(transformed.outcome.verdict == Verdict::kTransformed);
    CHECK(transformed.transformed);
    CHECK(transformed.outcome.lines_dropped == 1);
    CHECK(transformed.transformed_text.find("ab cd") == std::string::npos);

    // The transformed text feeds the sensitive filter: a term only inside a
    // dropped line cannot remove the document.
    FilterConfig cfg = kDefaults;
    cfg.sensitive_terms = {"zzterm"};
    std::string doc2 = gen.paragraph(80);
    doc2 += "\nzzterm here\n";
    doc2 += gen.paragraph(80);
    const auto after_drop = quality::run_quality_chain(doc2, cfg);
    CHECK(after_drop.outcome.verdict == Verdict::kTransformed);

    std::string doc3 = gen.paragraph(40);
    doc3 += " zzterm";
    doc3 += gen.paragraph(40);
    const auto direct_hit = quality::run_quality_chain(doc3, cfg);
    CHECK(direct_hit.outcome.removed());
    CHECK(direct_hit.outcome.reason == "sensitive.term");
}

TEST_CASE("threshold boundary pairs flip verdicts") {
    for (const auto& c : boundary::boundary_cases()) {
        CAPTURE(c.name);
        const auto kept = boundary::run_family(c.family, c.kept_doc, kDefaults);
        const auto removed = boundary::run_family(c.family, c.removed_doc, kDefaults);
        CHECK_FALSE(kept.removed());
        CHECK(removed.removed());
        CHECK(removed.reason == c.expected_reason);
    }
}

TEST_CASE("tightening a threshold never converts removed to kept") {
    FilterConfig tight = kDefaults;
    for (auto& [n, v] : tight.top_ngram_max_frac) {
        v *= 0.5;
    }
    for (auto& [n, v] : tight.dup_ngram_max_frac) {
        v *= 0.5;
    }
    tight.dup_sentence_char_max_frac *= 0.5;
    tight.dup_sentence_max_frac *= 0.5;
    tight.dup_paragraph_max_frac *= 0.5;
    tight.max_symbol_word_ratio *= 0.5;
    tight.max_bullet_frac *= 0.5;
    tight.max_ellipsis_frac *= 0.5;
    tight.max_short_sentence_frac *= 0.5;
    tight.max_dup_char_frac *= 0.5;
    tight.max_newline_word_ratio *= 0.5;
    tight.min_words *= 2;
    tight.min_alpha_word_frac = 0.9;

    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const std::string doc_text = random_doc(seed, 150);
        const DocView doc = DocView::of(doc_text);
        const bool loose_removed = quality::gopher_repetition(doc, kDefaults).removed() ||
                                   quality::gopher_quality(doc, kDefaults).removed() ||
                                   quality::fineweb_filter(doc, kDefaults).removed();
        const bool tight_removed = quality::gopher_repetition(doc, tight).removed() ||
                                   quality::gopher_quality(doc, tight).removed() ||
                                   quality::fineweb_filter(doc, tight).removed();
        if (loose_removed) {
            CHECK(tight_removed);
        }
    }
}

TEST_CASE("config validation rejects bad values") {
    FilterConfig bad = kDefaults;
    bad.min_words = 20000;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    FilterConfig frac = kDefaults;
    frac.max_bullet_frac = 1.5;
    CHECK_THROWS_AS(frac.validate(), ConfigError);

    FilterConfig missing = kDefaults;
    missing.dup_ngram_max_frac.erase(7);
    CHECK_THROWS_AS(missing.validate(), ConfigError);

    CHECK_NOTHROW(kDefaults.validate());
}
