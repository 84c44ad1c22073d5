// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Budgets are generous on purpose; timings are printed per line.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "bpe/tokenizer.hpp"
#include "common/hash.hpp"
#include "common/utf8.hpp"
#include "crawl/crawler.hpp"
#include "dedup/minhash.hpp"
#include "pipeline/config.hpp"
#include "pipeline/document.hpp"
#include "pipeline/pack.hpp"
#include "pipeline/pipeline.hpp"
#include "quality/filters.hpp"
#include "support/boundary.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"
#include "text/segment.hpp"

using namespace tibcorpus;

namespace {

#ifndef TIBC_FIXTURE_DIR
#define TIBC_FIXTURE_DIR "tests/fixtures"
#endif

struct Check {
    bool ok = true;
    std::string detail;

    void fail(std::string message) {
        if (ok) {
            detail = std::move(message);
        }
        ok = false;
    }
    void expect(bool condition, const std::string& message) {
        if (!condition) {
            fail(message);
        }
    }
    void note(std::string message) {
        if (ok) {
            detail = std::move(message);
        }
    }
};

// ---------------------------------------------------------------------------
// 1. Threshold boundary suite
// ---------------------------------------------------------------------------
void criterion_boundaries(Check& check) {
    const quality::FilterConfig cfg{};
    const auto cases = boundary::boundary_cases();
    check.expect(cases.size() == 25, "expected 25 boundary cases");
    for (const auto& c : cases) {
        const auto kept = boundary::run_family(c.family, c.kept_doc, cfg);
        const auto removed = boundary::run_family(c.family, c.removed_doc, cfg);
        check.expect(!kept.removed(), c.name + ": at-threshold document was removed");
        check.expect(removed.removed(), c.name + ": past-threshold document was kept");
        if (removed.removed()) {
            check.expect(removed.reason == c.expected_reason,
                         c.name + ": wrong reason " + removed.reason);
        }
    }
    check.note(std::to_string(cases.size()) + " thresholds, 2 fixtures each");
}

// ---------------------------------------------------------------------------
// 2. Metric oracle equivalence
// ---------------------------------------------------------------------------
std::string random_metric_doc(std::uint64_t seed) {
    testutil::TibetanGenerator gen(seed);
    auto& rng = gen.rng();
    const std::size_t words = 1 + rng.next_below(200);
    std::string doc;
    std::vector<std::string> history;
    for (std::size_t i = 0; i < words; ++i) {
        std::string w;
        if (!history.empty() && rng.next_below(100) < 40) {
            w = history[rng.next_below(history.size())];
        } else if (rng.next_below(2) == 0) {
            w = gen.syllable();
        } else {
            w = testutil::ascii_word(rng.next_below(250), 2 + rng.next_below(5));
        }
        history.push_back(w);
        if (!doc.empty()) {
            switch (rng.next_below(12)) {
                case 0: doc += ". "; break;
                case 1: doc += "། "; break;
                case 2: doc += "\n"; break;
                case 3: doc += "\n\n"; break;
                case 4: case 5: case 6: case 7: doc += "་"; break;
                default: doc += " ";
            }
        }
        doc += w;
    }
    return doc;
}

void criterion_metric_oracles(Check& check) {
    const double tol = 1e-12;
    const auto close = [&](double a, double b) {
        return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
    };
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        const std::string text = random_metric_doc(seed);
        const quality::DocView doc = quality::DocView::of(text);
        for (int n = 2; n <= 4; ++n) {
            if (!close(quality::top_ngram_char_fraction(doc, n),
                       oracles::top_ngram_char_fraction(text, n))) {
                check.fail("top_ngram mismatch at seed " + std::to_string(seed));
                return;
            }
        }
        for (int n = 5; n <= 10; ++n) {
            if (!close(quality::dup_ngram_char_fraction(doc, n),
                       oracles::dup_ngram_char_fraction(text, n))) {
                check.fail("dup_ngram mismatch at seed " + std::to_string(seed));
                return;
            }
        }
        if (!close(quality::dup_sentence_char_fraction(doc),
                   oracles::dup_sentence_char_fraction(text)) ||
            !close(quality::dup_sentence_fraction(doc), oracles::dup_sentence_fraction(text)) ||
            !close(quality::dup_paragraph_fraction(doc),
                   oracles::dup_paragraph_fraction(text))) {
            check.fail("sentence/paragraph duplication mismatch at seed " +
                       std::to_string(seed));
            return;
        }
        const auto outcome = quality::fineweb_filter(doc, quality::FilterConfig{});
        if (!close(outcome.measurements.at("fineweb.dup_char_frac"),
                   oracles::fineweb_dup_char_fraction(text))) {
            check.fail("fineweb dup-char mismatch at seed " + std::to_string(seed));
            return;
        }
    }
    check.note("500 documents x 11 metrics vs quadratic references");
}

// ---------------------------------------------------------------------------
// 3. MinHash statistical suite
// ---------------------------------------------------------------------------
void criterion_minhash(Check& check) {
    const dedup::MinHashParams params{};
    std::size_t eligible_pairs = 0;
    std::size_t recalled_pairs = 0;
    std::size_t bad_confirmed = 0;
    double estimate_sum_at_half = 0.0;
    std::size_t estimate_count_at_half = 0;

    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        testutil::TibetanGenerator gen(9000 + trial);
        auto& rng = gen.rng();

        std::vector<std::string> texts;
        for (int i = 0; i < 100; ++i) {
            texts.push_back(gen.document(130 + rng.next_below(90), 1));
        }
        // 30 close duplicates of the first 30 docs: one extra short sentence
        // keeps the exact Jaccard above 0.9.
        for (int i = 0; i < 30; ++i) {
            texts.push_back(texts[static_cast<std::size_t>(i)] + " " + gen.sentence(6, 7));
        }
        // 40 medium/far perturbations of docs 30..69.
        for (int i = 0; i < 40; ++i) {
            std::string t = texts[static_cast<std::size_t>(30 + i)];
            for (int k = 0; k < 6; ++k) {
                t += " " + gen.sentence(12, 15);
            }
            texts.push_back(std::move(t));
        }
        // 30 more unrelated docs.
        for (int i = 0; i < 30; ++i) {
            texts.push_back(gen.document(60 + rng.next_below(60), 1));
        }

        // Exact-Jaccard oracle over shingle sets.
        std::vector<std::unordered_set<std::string>> shingles(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) {
            const auto list = dedup::shingle(texts[i], params);
            shingles[i] = std::unordered_set<std::string>(list.begin(), list.end());
        }
        const auto exact = [&](std::size_t a, std::size_t b) {
            std::size_t inter = 0;
            const auto& small = shingles[a].size() <= shingles[b].size() ? shingles[a]
                                                                         : shingles[b];
            const auto& large = shingles[a].size() <= shingles[b].size() ? shingles[b]
                                                                         : shingles[a];
            for (const auto& s : small) {
                inter += large.count(s);
            }
            const std::size_t uni = shingles[a].size() + shingles[b].size() - inter;
            return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
        };

        std::vector<dedup::MinHashSignature> sigs(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) {
            sigs[i] = dedup::compute_signature(texts[i], params, std::to_string(i));
        }
        const auto clusters = dedup::find_duplicates(sigs, params);
        std::vector<std::size_t> cluster_of(texts.size(), SIZE_MAX);
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            for (const std::size_t member : clusters[c].members) {
                cluster_of[member] = c;
            }
        }

        for (std::size_t a = 0; a < texts.size(); ++a) {
            for (std::size_t b = a + 1; b < texts.size(); ++b) {
                const double j = exact(a, b);
                if (j >= 0.9) {
                    ++eligible_pairs;
                    if (cluster_of[a] != SIZE_MAX && cluster_of[a] == cluster_of[b]) {
                        ++recalled_pairs;
                    }
                }
                if (j < 0.4 &&
                    dedup::estimate_jaccard(sigs[a], sigs[b]) >= params.confirm_threshold) {
                    ++bad_confirmed;
                }
            }
        }

        // Exact-0.5 pairs: 24 shared words then 10 fresh words per side.
        for (int p = 0; p < 10; ++p) {
            std::vector<std::string> shared, left, right;
            for (int w = 0; w < 24; ++w) {
                shared.push_back(testutil::ascii_word(rng.next_below(1000000), 6));
            }
            std::string a = testutil::join_words(shared);
            std::string b = a;
            for (int w = 0; w < 10; ++w) {
                a += " " + testutil::ascii_word(1000000 + rng.next_below(500000), 6);
                b += " " + testutil::ascii_word(2000000 + rng.next_below(500000), 6);
            }
            const double j = oracles::exact_jaccard(a, b, params);
            if (std::abs(j - 0.5) > 1e-9) {
                continue;  // random word collision spoiled the construction
            }
            estimate_sum_at_half += dedup::estimate_jaccard(
                dedup::compute_signature(a, params), dedup::compute_signature(b, params));
            ++estimate_count_at_half;
        }
    }

    const double recall = eligible_pairs == 0
                              ? 1.0
                              : static_cast<double>(recalled_pairs) /
                                    static_cast<double>(eligible_pairs);
    const double bias =
        std::abs(estimate_sum_at_half / static_cast<double>(estimate_count_at_half) - 0.5);
    check.expect(eligible_pairs >= 20 * 25, "too few planted high-similarity pairs");
    check.expect(recall >= 0.95, "recall " + std::to_string(recall) + " below 0.95");
    check.expect(bad_confirmed == 0,
                 std::to_string(bad_confirmed) + " confirmed pairs with exact J < 0.4");
    check.expect(bias <= 0.05, "estimator bias " + std::to_string(bias) + " above 0.05");
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer),
                  "recall %.4f over %zu pairs, 0 low-J confirms required, bias %.4f", recall,
                  eligible_pairs, bias);
    check.note(buffer);
}

// ---------------------------------------------------------------------------
// 4. BPE trainer equivalence
// ---------------------------------------------------------------------------
void criterion_trainer(Check& check) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        hash::SplitMix rng(seed * 0x9E37);
        std::vector<std::string> corpus;
        std::size_t budget = 512 + rng.next_below(3584);  // <= 4 KB
        while (budget > 0) {
            const std::size_t take = std::min<std::size_t>(budget, 128 + rng.next_below(1024));
            std::string doc;
            if (rng.next_below(4) == 0) {
                for (std::size_t i = 0; i < take; ++i) {
                    doc.push_back(static_cast<char>(rng.next_below(256)));
                }
            } else {
                testutil::TibetanGenerator gen(seed * 31 + budget);
                while (doc.size() < take) {
                    doc += gen.sentence(4, 9);
                    doc += " ";
                }
                doc.resize(take);
            }
            corpus.push_back(std::move(doc));
            budget -= take;
        }
        const std::uint32_t target = 258 + static_cast<std::uint32_t>(rng.next_below(62));
        const bpe::Tokenizer tok = bpe::train_bpe(corpus, target);
        const auto reference = oracles::reference_train_bpe(corpus, target);
        if (tok.merges().size() != reference.size()) {
            check.fail("merge count mismatch at seed " + std::to_string(seed));
            return;
        }
        for (std::size_t i = 0; i < reference.size(); ++i) {
            if (tok.vocab().token(tok.merges()[i].left) != reference[i].left_bytes ||
                tok.vocab().token(tok.merges()[i].right) != reference[i].right_bytes) {
                check.fail("merge " + std::to_string(i) + " differs at seed " +
                           std::to_string(seed));
                return;
            }
        }
    }
    check.note("50 corpora, exact merge-list match");
}

// ---------------------------------------------------------------------------
// 5. Vocabulary merge identity
// ---------------------------------------------------------------------------
bpe::Tokenizer synthetic_vocab(std::uint32_t total_tokens, std::uint64_t seed,
                               bool reserve_nul_byte) {
    // Random small-token merges; byte 0x00 never appears inside results when
    // reserved, which lets a second vocabulary stay provably disjoint.
    hash::SplitMix rng(seed);
    std::vector<std::string> tokens;
    for (int b = 0; b < 256; ++b) {
        tokens.emplace_back(1, static_cast<char>(b));
    }
    std::vector<std::uint32_t> light;  // ids with short byte sequences
    for (int b = reserve_nul_byte ? 1 : 0; b < 256; ++b) {
        light.push_back(static_cast<std::uint32_t>(b));
    }
    std::vector<bpe::MergeRule> merges;
    std::unordered_set<std::string> seen(tokens.begin(), tokens.end());
    while (tokens.size() < total_tokens) {
        const std::uint32_t l = light[rng.next_below(light.size())];
        const std::uint32_t r = light[rng.next_below(light.size())];
        std::string bytes = tokens[l] + tokens[r];
        if (bytes.size() > 12 || !seen.insert(bytes).second) {
            continue;
        }
        const auto id = static_cast<std::uint32_t>(tokens.size());
        tokens.push_back(std::move(bytes));
        merges.push_back({l, r, id, static_cast<std::uint32_t>(merges.size())});
        if (tokens.back().size() <= 6) {
            light.push_back(id);
        }
    }
    bpe::Vocabulary vocab = bpe::Vocabulary::byte_level();
    for (std::size_t i = 256; i < tokens.size(); ++i) {
        vocab.add_token(tokens[i]);
    }
    return bpe::Tokenizer(std::move(vocab), std::move(merges));
}

void criterion_merge_identity(Check& check) {
    // Randomized pairs via real training runs.
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        testutil::TibetanGenerator gen_a(seed), gen_b(seed + 10000);
        const std::vector<std::string> ca = {gen_a.document(120, 1)};
        const std::vector<std::string> cb = {gen_b.document(120, 1)};
        const bpe::Tokenizer base = bpe::train_bpe(ca, 280 + (seed % 60));
        const bpe::Tokenizer addition = bpe::train_bpe(cb, 280 + (seed % 40));
        std::size_t overlap = 0;
        for (std::uint32_t id = 0; id < addition.vocab().size(); ++id) {
            if (base.vocab().id_of(addition.vocab().token(id))) {
                ++overlap;
            }
        }
        const bpe::Tokenizer merged = bpe::merge_vocab(base, addition);
        if (merged.vocab().size() != base.vocab().size() + addition.vocab().size() - overlap) {
            check.fail("size identity failed at seed " + std::to_string(seed));
            return;
        }
    }

    // The published arithmetic shape: 151,665 + 15,000 with overlap 1,237
    // (256 byte primitives + 981 shared merges) must merge to 165,428.
    // The base never contains byte 0x00 inside a merged token, so every
    // addition-only token embeds NULs and is disjoint by construction;
    // NUL-separated composition makes them pairwise distinct too.
    const bpe::Tokenizer base = synthetic_vocab(151665, 0xBA5E, true);
    bpe::Tokenizer addition = [&] {
        bpe::Vocabulary vocab = bpe::Vocabulary::byte_level();
        std::vector<bpe::MergeRule> merges;
        // 981 merges copied from the base (a prefix is self-consistent).
        for (std::size_t i = 0; i < 981; ++i) {
            const auto& m = base.merges()[i];
            vocab.add_token(base.vocab().token(m.result));
            merges.push_back({m.left, m.right, static_cast<std::uint32_t>(256 + i),
                              static_cast<std::uint32_t>(i)});
        }
        // Phase 1: "\0" ++ shared_k  (981 tokens, one NUL each).
        std::vector<std::uint32_t> nul1;
        for (std::uint32_t k = 0; k < 981; ++k) {
            const std::uint32_t id = vocab.add_token(vocab.token(0) + vocab.token(256 + k));
            merges.push_back({0, 256 + k, id, static_cast<std::uint32_t>(merges.size())});
            nul1.push_back(id);
        }
        // Phase 2: nul1[i] ++ nul1[j] (two NULs; the NUL separators make
        // every (i, j) combination a distinct byte sequence).
        for (std::uint32_t p = 0; p < 15000 - 256 - 981 - 981; ++p) {
            const std::uint32_t left = nul1[p / 981];
            const std::uint32_t right = nul1[p % 981];
            const std::uint32_t id = vocab.add_token(vocab.token(left) + vocab.token(right));
            merges.push_back({left, right, id, static_cast<std::uint32_t>(merges.size())});
        }
        return bpe::Tokenizer(std::move(vocab), std::move(merges));
    }();

    check.expect(base.vocab().size() == 151665, "synthetic base size wrong");
    check.expect(addition.vocab().size() == 15000, "synthetic addition size wrong");
    std::size_t overlap = 0;
    for (std::uint32_t id = 0; id < addition.vocab().size(); ++id) {
        if (base.vocab().id_of(addition.vocab().token(id))) {
            ++overlap;
        }
    }
    check.expect(overlap == 1237, "constructed overlap is " + std::to_string(overlap));
    const bpe::Tokenizer merged = bpe::merge_vocab(base, addition);
    check.expect(merged.vocab().size() == 165428,
                 "merged size " + std::to_string(merged.vocab().size()) + " != 165428");
    check.note("100 randomized pairs + 151665+15000-1237=165428 replay");
}

// ---------------------------------------------------------------------------
// 6. Compression properties
// ---------------------------------------------------------------------------
void criterion_compression(Check& check) {
    const bpe::Tokenizer bytes = bpe::Tokenizer::byte_level();
    const auto ascii = bytes.compression(
        "The quick brown fox jumps over the lazy dog 0123456789 times.");
    check.expect(ascii.ratio == 1.0, "ASCII byte-level ratio != 1.0");

    testutil::TibetanGenerator held_out(0xE0);
    const std::string tibetan_sample = held_out.document(2500, 4);
    const auto bo_bytes = bytes.compression(tibetan_sample);
    // Pure Tibetan under a byte vocabulary: 3 bytes per codepoint exactly,
    // except the ASCII space/newline separators; measure on a space-free
    // sample for the exact 1/3.
    std::string no_sep;
    for (const char32_t cp : utf8::decode(tibetan_sample)) {
        if (text::is_tibetan_codepoint(cp)) {
            utf8::append(no_sep, cp);
        }
    }
    const auto pure = bytes.compression(no_sep);
    check.expect(pure.ratio == 1.0 / 3.0, "pure Tibetan byte-level ratio != 1/3");
    check.expect(pure.other_codepoints == 0, "sample not pure Tibetan");

    // Train a 15K vocabulary on ~5 MB of synthetic Tibetan.
    testutil::TibetanGenerator train_gen(0x7E417);
    std::vector<std::string> corpus;
    std::size_t corpus_bytes = 0;
    while (corpus_bytes < 5 * 1024 * 1024) {
        corpus.push_back(train_gen.document(600, 4));
        corpus_bytes += corpus.back().size();
    }
    const bpe::Tokenizer trained = bpe::train_bpe(corpus, 15000);
    check.expect(trained.vocab().size() == 15000, "trained vocabulary size != 15000");

    const auto trained_report = trained.compression(tibetan_sample);
    check.expect(trained_report.ratio >= 3.0 * bo_bytes.ratio,
                 "held-out ratio " + std::to_string(trained_report.ratio) + " < 3x baseline " +
                     std::to_string(bo_bytes.ratio));
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer),
                  "trained 15000 on %.1f MB; held-out %.4f cp/token vs byte %.4f",
                  static_cast<double>(corpus_bytes) / (1024.0 * 1024.0), trained_report.ratio,
                  bo_bytes.ratio);
    check.note(buffer);
}

// ---------------------------------------------------------------------------
// 7. Packing conservation
// ---------------------------------------------------------------------------
void criterion_packing(Check& check) {
    bpe::Tokenizer tok = bpe::Tokenizer::byte_level();
    const std::uint32_t sep = tok.ensure_special("<|endoftext|>");
    const auto dir = testutil::fresh_temp_dir("acceptance-pack");
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        testutil::TibetanGenerator gen(70000 + seed);
        auto& rng = gen.rng();
        std::vector<pipeline::Document> docs(1 + rng.next_below(8));
        for (auto& doc : docs) {
            doc.text = gen.document(100 + rng.next_below(900), 2);
        }
        pipeline::PackStats stats;
        const auto dataset = pipeline::pack(docs, tok, 4096, sep, &stats);
        std::uint64_t tokens = 0;
        for (const auto& doc : docs) {
            tokens += tok.encode(doc.text).size();
        }
        if (tokens != stats.document_tokens || stats.separators != docs.size()) {
            check.fail("pack stats mismatch at seed " + std::to_string(seed));
            return;
        }
        if (dataset.sample_count() * 4096 + stats.dropped_tail != tokens + stats.separators) {
            check.fail("conservation violated at seed " + std::to_string(seed));
            return;
        }
        if (dataset.flat.size() != dataset.sample_count() * 4096) {
            check.fail("ragged samples at seed " + std::to_string(seed));
            return;
        }
        if (seed % 10 == 0) {
            const std::string path = (dir / ("pack-" + std::to_string(seed))).string();
            pipeline::save_packed(path, dataset);
            const auto fp = tok.fingerprint();
            const auto loaded = pipeline::load_packed(path, &fp);
            if (loaded.flat != dataset.flat || loaded.sample_length != dataset.sample_length) {
                check.fail("save/load round-trip differs at seed " + std::to_string(seed));
                return;
            }
            pipeline::save_packed(path + ".again", loaded);
            if (testutil::read_file_bytes(path) != testutil::read_file_bytes(path + ".again")) {
                check.fail("re-saved bytes differ at seed " + std::to_string(seed));
                return;
            }
        }
    }
    check.note("100 corpora, conservation + bit-exact persistence");
}

// ---------------------------------------------------------------------------
// 8. Crawler confinement
// ---------------------------------------------------------------------------
struct GraphNode {
    std::string url;
    std::string domain;  // registrable domain label used by the oracle
    std::vector<std::size_t> edges;
};

class GraphFetcher final : public crawl::Fetcher {
public:
    explicit GraphFetcher(const std::vector<GraphNode>& nodes) {
        for (const auto& node : nodes) {
            std::string html = "<html><body><p>node body text</p>";
            for (const std::size_t edge : node.edges) {
                html += "<a href=\"" + nodes[edge].url + "\">x</a>";
            }
            html += "</body></html>";
            pages_[crawl::normalize_url(node.url)] = std::move(html);
        }
    }

    crawl::FetchResult fetch(const std::string& url) override {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++counts_[url];
        }
        const auto it = pages_.find(url);
        if (it == pages_.end()) {
            return {404, "", "text/html"};
        }
        return {200, it->second, "text/html"};
    }

    std::map<std::string, int> counts() const { return counts_; }

private:
    std::mutex mutex_;
    std::map<std::string, std::string> pages_;
    std::map<std::string, int> counts_;
};

void criterion_crawler(Check& check) {
    // 50 nodes over three registrable domains with cycles and off-domain
    // edges; the seed's domain is example.bo.
    hash::SplitMix rng(0xC4A3);
    std::vector<GraphNode> nodes;
    const char* hosts_bo[] = {"www.example.bo", "news.example.bo", "lib.example.bo"};
    const char* hosts_other[] = {"other.org", "www.offsite.com"};
    for (int i = 0; i < 50; ++i) {
        GraphNode node;
        if (i < 35) {
            node.url = std::string("https://") + hosts_bo[i % 3] + "/p" + std::to_string(i);
            node.domain = "example.bo";
        } else {
            node.url =
                std::string("https://") + hosts_other[i % 2] + "/p" + std::to_string(i);
            node.domain = i % 2 == 0 ? "other.org" : "offsite.com";
        }
        nodes.push_back(std::move(node));
    }
    for (int i = 0; i < 50; ++i) {
        const std::size_t fanout = 1 + rng.next_below(4);
        for (std::size_t e = 0; e < fanout; ++e) {
            nodes[static_cast<std::size_t>(i)].edges.push_back(rng.next_below(50));
        }
    }
    // A spine through part of the on-domain nodes guarantees depth; the rest
    // stays reachable only through the random edges (or not at all).
    for (std::size_t i = 0; i + 1 < 20; ++i) {
        nodes[i].edges.push_back(i + 1);
    }
    nodes[0].edges.push_back(0);    // self loop
    nodes[4].edges.push_back(0);    // cycle back to the seed
    nodes[2].edges.push_back(40);   // off-domain edge
    nodes[19].edges.push_back(3);   // long back edge

    // Oracle: BFS over same-domain edges, where only fetched (same-domain)
    // pages expose their links.
    std::set<std::string> expected;
    {
        std::vector<std::size_t> frontier = {0};
        std::set<std::size_t> visited = {0};
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (const std::size_t at : frontier) {
                expected.insert(crawl::normalize_url(nodes[at].url));
                for (const std::size_t edge : nodes[at].edges) {
                    if (nodes[edge].domain == "example.bo" && !visited.count(edge)) {
                        visited.insert(edge);
                        next.push_back(edge);
                    }
                }
            }
            frontier = std::move(next);
        }
    }

    std::vector<std::set<std::string>> fetched_sets;
    for (const std::size_t jobs : {std::size_t{1}, std::size_t{8}}) {
        GraphFetcher fetcher(nodes);
        crawl::CrawlConfig config;
        config.obey_robots = false;
        config.concurrency = jobs;
        const auto pages = crawl::crawl({nodes[0].url}, fetcher, config);
        std::set<std::string> fetched;
        for (const auto& page : pages) {
            fetched.insert(page.url);
        }
        for (const auto& [url, count] : fetcher.counts()) {
            if (count != 1) {
                check.fail("URL fetched " + std::to_string(count) + " times: " + url);
            }
        }
        fetched_sets.push_back(std::move(fetched));
    }
    check.expect(fetched_sets[0] == expected, "fetched set != same-domain reachability");
    check.expect(fetched_sets[0] == fetched_sets[1], "fetched set differs across concurrency");
    check.note(std::to_string(expected.size()) + " reachable of 50 nodes, 1 vs 8 fetchers");
}

// ---------------------------------------------------------------------------
// 9. End-to-end golden run
// ---------------------------------------------------------------------------
void criterion_golden(Check& check) {
    const std::string fixtures = TIBC_FIXTURE_DIR;
    const std::string corpus_path = fixtures + "/corpus_1k.jsonl";
    const std::string manifest_path = fixtures + "/golden_manifest.json";
    const auto manifest = nlohmann::json::parse(testutil::read_file_bytes(manifest_path));

    const std::string corpus_bytes = testutil::read_file_bytes(corpus_path);
    check.expect(hash::sha256_hex(corpus_bytes) == manifest.at("corpus_sha256"),
                 "fixture corpus bytes changed; regenerate the manifest");

    std::vector<std::string> outputs;
    std::vector<std::string> reports;
    std::vector<pipeline::StatsReport> stats;
    for (const std::size_t jobs : {std::size_t{1}, std::size_t{1}, std::size_t{8}}) {
        pipeline::PipelineConfig cfg;
        cfg.jobs = jobs;
        auto result = pipeline::run_pipeline(pipeline::read_jsonl(corpus_path), cfg);
        std::string blob;
        for (const auto& doc : result.kept) {
            blob += pipeline::doc_to_jsonl_line(doc);
            blob += '\n';
        }
        outputs.push_back(std::move(blob));
        reports.push_back(result.report.to_json().dump(2) + "\n");
        stats.push_back(std::move(result.report));
    }
    check.expect(outputs[0] == outputs[1], "two identical runs differ");
    check.expect(outputs[0] == outputs[2], "jobs=8 output differs from jobs=1");
    check.expect(reports[0] == reports[2], "jobs=8 report differs");
    check.expect(hash::sha256_hex(outputs[0]) == manifest.at("output_sha256"),
                 "output does not match the golden manifest");
    check.expect(hash::sha256_hex(reports[0]) == manifest.at("report_sha256"),
                 "report does not match the golden manifest");

    std::uint64_t input = 1000;
    for (const auto& [name, stage] : stats[0].stages) {
        check.expect(stage.input == input, name + " input count broken");
        check.expect(stage.input == stage.kept + stage.removed, name + " does not reconcile");
        std::uint64_t reasons = 0;
        for (const auto& [reason, count] : stage.removed_by_reason) {
            reasons += count;
        }
        check.expect(reasons == stage.removed, name + " reason counts do not sum");
        input = stage.kept;
    }
    check.note("kept " + std::to_string(manifest.at("kept_documents").get<std::uint64_t>()) +
               "/1000, byte-identical across runs and worker counts");
}

// ---------------------------------------------------------------------------
// 10. Encode/decode round-trip
// ---------------------------------------------------------------------------
void criterion_roundtrip(Check& check) {
    testutil::TibetanGenerator gen(0x0F40);
    const std::vector<std::string> corpus = {gen.document(800, 3)};
    const bpe::Tokenizer trained = bpe::train_bpe(corpus, 600);
    const bpe::Tokenizer bytes = bpe::Tokenizer::byte_level();

    hash::SplitMix rng(0x10F40);
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        const std::size_t len = rng.next_below(80);
        for (std::size_t k = 0; k < len; ++k) {
            char32_t cp = 0;
            switch (rng.next_below(8)) {
                case 0: cp = static_cast<char32_t>(0x20 + rng.next_below(0x5F)); break;
                case 1: cp = static_cast<char32_t>(0x0F00 + rng.next_below(0x100)); break;
                case 2: cp = static_cast<char32_t>(0x1F300 + rng.next_below(0x500)); break;
                case 3: cp = rng.next_below(2) == 0 ? 0xD7FF : 0xE000; break;
                case 4: cp = static_cast<char32_t>(0x4E00 + rng.next_below(0x2000)); break;
                case 5: cp = static_cast<char32_t>(1 + rng.next_below(0x80)); break;
                case 6: cp = static_cast<char32_t>(0x10000 + rng.next_below(0xFFFF)); break;
                default: cp = static_cast<char32_t>(0xFF00 + rng.next_below(0xF0));
            }
            utf8::append(text, cp);
        }
        if (bytes.decode(bytes.encode(text)) != text ||
            trained.decode(trained.encode(text)) != text) {
            check.fail("round-trip failed at iteration " + std::to_string(i));
            return;
        }
    }
    check.note("10000 strings under byte-level and trained vocabularies");
}

struct Criterion {
    int number;
    const char* name;
    void (*run)(Check&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "threshold boundary suite", criterion_boundaries},
        {2, "metric oracle equivalence", criterion_metric_oracles},
        {3, "minhash statistical suite", criterion_minhash},
        {4, "bpe trainer equivalence", criterion_trainer},
        {5, "vocabulary merge identity", criterion_merge_identity},
        {6, "compression properties", criterion_compression},
        {7, "packing conservation", criterion_packing},
        {8, "crawler confinement", criterion_crawler},
        {9, "end-to-end golden run", criterion_golden},
        {10, "encode/decode round-trip", criterion_roundtrip},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.fail(std::string("exception: ") + e.what());
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::printf("[%s] criterion %2d: %s%s%s [%lld ms]\n", check.ok ? "PASS" : "FAIL",
                    criterion.number, criterion.name, check.detail.empty() ? "" : " — ",
                    check.detail.c_str(), static_cast<long long>(ms));
        std::fflush(stdout);
        if (!check.ok) {
            ++failures;
        }
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", std::size(criteria));
    return 0;
}
