// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tibcorpus::bpe {

/// Replace the adjacent pair (left, right) with result. Lower ranks merge
/// first; result's byte sequence is always left's bytes ++ right's bytes.
struct MergeRule {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t result = 0;
    std::uint32_t rank = 0;
};

/// Dense id <-> byte-sequence bijection. Ids 0..255 are always the single
/// bytes, so any UTF-8 text is encodable. Specials are reserved ids appended
/// after training (separator tokens and the like); they never participate in
/// merges.
class Vocabulary {
public:
    static Vocabulary byte_level();

    std::uint32_t size() const { return static_cast<std::uint32_t>(id_to_token_.size()); }
    const std::string& token(std::uint32_t id) const;
    std::optional<std::uint32_t> id_of(std::string_view bytes) const;

    /// Adds a new token; throws if the byte sequence already exists.
    std::uint32_t add_token(std::string bytes);

    /// Returns the id of `bytes`, appending it as a special if absent.
    std::uint32_t ensure_special(std::string_view bytes);
    void mark_special(std::uint32_t id);
    bool is_special(std::uint32_t id) const { return specials_.count(id) > 0; }
    const std::set<std::uint32_t>& specials() const { return specials_; }

private:
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, std::uint32_t> token_to_id_;
    std::set<std::uint32_t> specials_;
};

struct CompressionReport {
    std::uint64_t codepoints = 0;
    std::uint64_t tokens = 0;
    double ratio = 0.0;  // codepoints per token
    std::uint64_t tibetan_codepoints = 0;
    std::uint64_t other_codepoints = 0;
};

/// A frozen vocabulary plus its ranked merge list.
class Tokenizer {
public:
    Tokenizer() : vocab_(Vocabulary::byte_level()) {}
    Tokenizer(Vocabulary vocab, std::vector<MergeRule> merges);

    static Tokenizer byte_level() { return Tokenizer(); }

    const Vocabulary& vocab() const { return vocab_; }
    Vocabulary& vocab() { return vocab_; }
    const std::vector<MergeRule>& merges() const { return merges_; }

    /// UTF-8 bytes to byte tokens, then merges by rank until no rule applies.
    std::vector<std::uint32_t> encode(std::string_view text) const;

    /// Concatenated token bytes. With replace_invalid, malformed UTF-8 in the
    /// result is rewritten to U+FFFD. Throws std::invalid_argument on unknown
    /// ids.
    std::string decode(std::span<const std::uint32_t> ids, bool replace_invalid = false) const;

    CompressionReport compression(std::string_view text) const;

    void save(const std::string& vocab_path, const std::string& merges_path) const;
    static Tokenizer load(const std::string& vocab_path, const std::string& merges_path);

    std::string vocab_file_contents() const;
    std::string merges_file_contents() const;

    /// SHA-256 over the serialized vocab and merges.
    std::array<std::uint8_t, 32> fingerprint() const;

    std::uint32_t ensure_special(std::string_view bytes);

private:
    Vocabulary vocab_;
    std::vector<MergeRule> merges_;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_rank_;  // (l,r) -> rank

    void rebuild_pair_index();
};

struct TrainOptions {
    std::uint32_t target_size = 15000;
    /// When true (the default), target_size counts the 256 byte primitives.
    bool target_includes_bytes = true;
};

/// Byte-level BPE training: repeatedly merge the most frequent adjacent pair
/// (ties: lexicographically smaller left bytes, then right bytes) until the
/// vocabulary reaches the target or no adjacent pair remains. There is no
/// pre-tokenization; merges may cross whitespace and syllable boundaries.
Tokenizer train_bpe(std::span<const std::string> corpus, const TrainOptions& options);
Tokenizer train_bpe(std::span<const std::string> corpus, std::uint32_t target_size);

/// Extends `base` with every addition token whose byte sequence it lacks
/// (in addition id order). Addition merges are re-targeted to the merged
/// ids and appended after base's merges; duplicate pairs keep base's rule.
Tokenizer merge_vocab(const Tokenizer& base, const Tokenizer& addition);

// Byte-string escaping used by the vocab file format (one token per line).
std::string escape_token(std::string_view bytes);
std::string unescape_token(std::string_view escaped);

}  // namespace tibcorpus::bpe
