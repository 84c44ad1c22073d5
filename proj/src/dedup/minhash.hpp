// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tibcorpus::dedup {

/// MinHash/LSH parameters. 112 hashes in 14 bands of 8 rows with 5-word
/// shingles and a 0.8 confirmation threshold mirror the defaults of the
/// common corpus-dedup tooling this module replaces.
struct MinHashParams {
    std::uint32_t num_hashes = 112;
    std::uint32_t bands = 14;
    std::uint32_t rows_per_band = 8;
    std::uint32_t shingle_words = 5;
    std::uint64_t seed = 0x7162636f72707573ULL;
    double confirm_threshold = 0.8;

    void validate() const;
    bool compatible(const MinHashParams& other) const;
};

struct MinHashSignature {
    std::string doc_id;
    std::vector<std::uint64_t> mins;
};

struct DuplicateCluster {
    std::vector<std::size_t> members;  // indices into the input order, ascending
    std::size_t representative() const { return members.front(); }
};

/// Word shingles joined with a single 0x1E separator; texts with fewer than
/// shingle_words words collapse to the whole text as one shingle.
std::vector<std::string> shingle(std::string_view text, const MinHashParams& params);

MinHashSignature compute_signature(std::string_view text, const MinHashParams& params,
                                   std::string doc_id = {});

/// Fraction of positions where the signatures agree. Throws on length
/// mismatch.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

/// LSH banding for candidates, estimator confirmation, connected components.
/// Clusters are ordered by representative; members ascend in input order.
std::vector<DuplicateCluster> find_duplicates(const std::vector<MinHashSignature>& signatures,
                                              const MinHashParams& params);

/// Keeps the earliest member of every cluster plus all unclustered docs;
/// returns indices in input order.
std::vector<std::size_t> deduplicate_indices(const std::vector<MinHashSignature>& signatures,
                                             const MinHashParams& params);

/// Binary sidecar round-trip for signatures (params header + per-doc id and
/// little-endian u64 mins). Loading with different params fails.
void save_signatures(const std::string& path, const std::vector<MinHashSignature>& signatures,
                     const MinHashParams& params);
std::vector<MinHashSignature> load_signatures(const std::string& path,
                                              const MinHashParams& expected);

}  // namespace tibcorpus::dedup
