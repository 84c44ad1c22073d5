// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bpe/tokenizer.hpp"
#include "pipeline/document.hpp"

namespace tibcorpus::pipeline {

/// Fixed-length token-id samples in a bit-exact binary layout:
/// "PKDS", u32 version, u32 sample_length, u64 sample count, 32-byte vocab
/// fingerprint, then all samples as consecutive little-endian u32 ids.
struct PackedDataset {
    std::uint32_t sample_length = 4096;
    std::array<std::uint8_t, 32> vocab_fingerprint{};
    std::vector<std::uint32_t> flat;

    std::uint64_t sample_count() const {
        return sample_length == 0 ? 0 : flat.size() / sample_length;
    }
    std::span<const std::uint32_t> sample(std::uint64_t i) const {
        return std::span<const std::uint32_t>(flat).subspan(i * sample_length, sample_length);
    }
};

struct PackStats {
    std::uint64_t document_tokens = 0;  // tokens from encode, before separators
    std::uint64_t separators = 0;
    std::uint64_t dropped_tail = 0;
};

/// Encodes every document, appends one separator after each, concatenates,
/// and slices into sample_length chunks; the final partial chunk is dropped.
PackedDataset pack(const std::vector<Document>& docs, const bpe::Tokenizer& tokenizer,
                   std::uint32_t sample_length, std::uint32_t separator_id,
                   PackStats* stats = nullptr, std::size_t jobs = 1);

void save_packed(const std::string& path, const PackedDataset& dataset);

/// Loads and integrity-checks a packed dataset. When `expected_fingerprint`
/// is non-null a mismatch raises VocabMismatchError.
PackedDataset load_packed(const std::string& path,
                          const std::array<std::uint8_t, 32>* expected_fingerprint = nullptr);

/// pack + save; returns the dataset.
PackedDataset pretokenize(const std::vector<Document>& docs, const bpe::Tokenizer& tokenizer,
                          std::uint32_t sample_length, std::uint32_t separator_id,
                          const std::string& out_path, PackStats* stats = nullptr,
                          std::size_t jobs = 1);

}  // namespace tibcorpus::pipeline
