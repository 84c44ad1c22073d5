// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used only by tests. They recompute
// every metric from first principles (full rescans, quadratic comparisons)
// and deliberately avoid the incremental data structures of the library so
// agreement is meaningful.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bpe/tokenizer.hpp"
#include "dedup/minhash.hpp"

namespace tibcorpus::oracles {

double top_ngram_char_fraction(std::string_view text, int n);
double dup_ngram_char_fraction(std::string_view text, int n);
double dup_sentence_char_fraction(std::string_view text);
double dup_sentence_fraction(std::string_view text);
double dup_paragraph_fraction(std::string_view text);
double fineweb_dup_char_fraction(std::string_view text);

/// Quadratic BPE trainer: full recount of every adjacent pair each step,
/// greedy left-to-right replacement, same tie-breaks as the production
/// trainer (count, then left bytes, then right bytes).
struct ReferenceMerge {
    std::string left_bytes;
    std::string right_bytes;
};
std::vector<ReferenceMerge> reference_train_bpe(const std::vector<std::string>& corpus,
                                                std::uint32_t target_size);

/// Exact shingle-set Jaccard between two texts.
double exact_jaccard(std::string_view a, std::string_view b, const dedup::MinHashParams& params);

}  // namespace tibcorpus::oracles
