// SPDX-License-Identifier: Apache-2.0
#include "pipeline/pack.hpp"

#include <cstring>
#include <fstream>

#include "common/errors.hpp"
#include "common/parallel.hpp"

namespace tibcorpus::pipeline {

namespace {

constexpr char kMagic[4] = {'P', 'K', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

PackedDataset pack(const std::vector<Document>& docs, const bpe::Tokenizer& tokenizer,
                   std::uint32_t sample_length, std::uint32_t separator_id, PackStats* stats,
                   std::size_t jobs) {
    if (sample_length < 2) {
        throw ConfigError("pack: sample_length must be >= 2");
    }
    tokenizer.vocab().token(separator_id);  // bounds check

    std::vector<std::vector<std::uint32_t>> encoded(docs.size());
    parallel_for(docs.size(), jobs,
                 [&](std::size_t i) { encoded[i] = tokenizer.encode(docs[i].text); });

    PackedDataset dataset;
    dataset.sample_length = sample_length;
    dataset.vocab_fingerprint = tokenizer.fingerprint();

    std::uint64_t total = 0;
    for (const auto& ids : encoded) {
        total += ids.size() + 1;  // one separator per document
    }
    const std::uint64_t keep = total - total % sample_length;
    dataset.flat.reserve(keep);

    PackStats local;
    std::uint64_t written = 0;
    const auto push = [&](std::uint32_t id) {
        if (written < keep) {
            dataset.flat.push_back(id);
        }
        ++written;
    };
    for (const auto& ids : encoded) {
        local.document_tokens += ids.size();
        for (std::uint32_t id : ids) {
            push(id);
        }
        push(separator_id);
        ++local.separators;
    }
    local.dropped_tail = total - keep;
    if (stats != nullptr) {
        *stats = local;
    }
    return dataset;
}

void save_packed(const std::string& path, const PackedDataset& dataset) {
    std::string out;
    out.reserve(64 + dataset.flat.size() * 4);
    out.append(kMagic, sizeof(kMagic));
    const auto put_u32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    };
    const auto put_u64 = [&out](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    };
    put_u32(kVersion);
    put_u32(dataset.sample_length);
    put_u64(dataset.sample_count());
    out.append(reinterpret_cast<const char*>(dataset.vocab_fingerprint.data()),
               dataset.vocab_fingerprint.size());
    for (std::uint32_t id : dataset.flat) {
        put_u32(id);
    }
    write_text_atomic(path, out);
}

PackedDataset load_packed(const std::string& path,
                          const std::array<std::uint8_t, 32>* expected_fingerprint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("pack: cannot read " + path);
    }
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 52 || std::memcmp(data.data(), kMagic, 4) != 0) {
        throw ParseError("pack: not a PKDS file: " + path);
    }
    std::size_t pos = 4;
    const auto get_u32 = [&]() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        }
        pos += 4;
        return v;
    };
    const auto get_u64 = [&]() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        }
        pos += 8;
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kVersion) {
        throw ParseError("pack: unsupported PKDS version " + std::to_string(version));
    }
    PackedDataset dataset;
    dataset.sample_length = get_u32();
    const std::uint64_t count = get_u64();
    std::memcpy(dataset.vocab_fingerprint.data(), data.data() + pos, 32);
    pos += 32;
    if (dataset.sample_length < 2) {
        throw ParseError("pack: corrupt sample_length in " + path);
    }
    const std::uint64_t expected_ids = count * dataset.sample_length;
    if (data.size() - pos != expected_ids * 4) {
        throw ParseError("pack: truncated or oversized PKDS payload in " + path);
    }
    if (expected_fingerprint != nullptr && dataset.vocab_fingerprint != *expected_fingerprint) {
        throw VocabMismatchError("pack: dataset was tokenized with a different vocabulary");
    }
    dataset.flat.resize(expected_ids);
    for (std::uint64_t i = 0; i < expected_ids; ++i) {
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i * 4 + k]))
                 << (8 * k);
        }
        dataset.flat[i] = v;
    }
    return dataset;
}

PackedDataset pretokenize(const std::vector<Document>& docs, const bpe::Tokenizer& tokenizer,
                          std::uint32_t sample_length, std::uint32_t separator_id,
                          const std::string& out_path, PackStats* stats, std::size_t jobs) {
    PackedDataset dataset = pack(docs, tokenizer, sample_length, separator_id, stats, jobs);
    save_packed(out_path, dataset);
    return dataset;
}

}  // namespace tibcorpus::pipeline
