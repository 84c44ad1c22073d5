// SPDX-License-Identifier: Apache-2.0
#include "dedup/minhash.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "common/errors.hpp"
#include "common/hash.hpp"
#include "common/utf8.hpp"
#include "text/segment.hpp"

namespace tibcorpus::dedup {

void MinHashParams::validate() const {
    if (num_hashes == 0 || bands == 0 || rows_per_band == 0) {
        throw ConfigError("dedup: num_hashes, bands, rows_per_band must be positive");
    }
    if (num_hashes != bands * rows_per_band) {
        throw ConfigError("dedup: num_hashes must equal bands * rows_per_band");
    }
    if (shingle_words < 1) {
        throw ConfigError("dedup: shingle_words must be >= 1");
    }
    if (!(confirm_threshold >= 0.0 && confirm_threshold <= 1.0)) {
        throw ConfigError("dedup: confirm_threshold must be in [0,1]");
    }
}

bool MinHashParams::compatible(const MinHashParams& other) const {
    return num_hashes == other.num_hashes && bands == other.bands &&
           rows_per_band == other.rows_per_band && shingle_words == other.shingle_words &&
           seed == other.seed;
}

std::vector<std::string> shingle(std::string_view input, const MinHashParams& params) {
    const std::u32string cps = utf8::decode_lossy(input);
    const auto words = text::split_words(cps);
    std::vector<std::string> out;
    if (words.size() < params.shingle_words) {
        out.push_back(std::string(input));
        return out;
    }
    const std::size_t n = params.shingle_words;
    out.reserve(words.size() - n + 1);
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        std::string s;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) {
                s.push_back('\x1e');
            }
            s += utf8::encode(text::span_text(cps, words[i + k]));
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MinHashSignature compute_signature(std::string_view input, const MinHashParams& params,
                                   std::string doc_id) {
    params.validate();
    MinHashSignature sig;
    sig.doc_id = std::move(doc_id);
    sig.mins.assign(params.num_hashes, std::numeric_limits<std::uint64_t>::max());

    std::vector<std::uint64_t> salts(params.num_hashes);
    for (std::uint32_t i = 0; i < params.num_hashes; ++i) {
        salts[i] = hash::splitmix64(params.seed + i) | 1ULL;
    }
    for (const std::string& sv : shingle(input, params)) {
        const std::uint64_t base = hash::splitmix64(hash::fnv1a64(sv) ^ params.seed);
        for (std::uint32_t i = 0; i < params.num_hashes; ++i) {
            const std::uint64_t h = hash::splitmix64(base * salts[i] + i);
            if (h < sig.mins[i]) {
                sig.mins[i] = h;
            }
        }
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.mins.size() != b.mins.size() || a.mins.empty()) {
        throw std::invalid_argument("dedup: signatures have mismatched parameters");
    }
    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.mins.size(); ++i) {
        if (a.mins[i] == b.mins[i]) {
            ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(a.mins.size());
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        // Smaller index wins so representatives follow corpus order.
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<DuplicateCluster> find_duplicates(const std::vector<MinHashSignature>& signatures,
                                              const MinHashParams& params) {
    params.validate();
    for (const auto& sig : signatures) {
        if (sig.mins.size() != params.num_hashes) {
            throw std::invalid_argument("dedup: signature length does not match params");
        }
    }

    // Band bucketing: documents sharing all rows of any band are candidates.
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    {
        std::unordered_map<std::string, std::vector<std::size_t>> buckets;
        const std::size_t rows = params.rows_per_band;
        for (std::uint32_t band = 0; band < params.bands; ++band) {
            buckets.clear();
            for (std::size_t doc = 0; doc < signatures.size(); ++doc) {
                std::string key(rows * sizeof(std::uint64_t) + 1, '\0');
                key[0] = static_cast<char>(band);
                std::memcpy(key.data() + 1, signatures[doc].mins.data() + band * rows,
                            rows * sizeof(std::uint64_t));
                buckets[std::move(key)].push_back(doc);
            }
            for (const auto& [key, docs] : buckets) {
                for (std::size_t i = 0; i + 1 < docs.size(); ++i) {
                    for (std::size_t j = i + 1; j < docs.size(); ++j) {
                        candidates.emplace_back(docs[i], docs[j]);
                    }
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    UnionFind uf(signatures.size());
    for (const auto& [a, b] : candidates) {
        if (estimate_jaccard(signatures[a], signatures[b]) >= params.confirm_threshold) {
            uf.unite(a, b);
        }
    }

    std::unordered_map<std::size_t, DuplicateCluster> by_root;
    for (std::size_t i = 0; i < signatures.size(); ++i) {
        by_root[uf.find(i)].members.push_back(i);
    }
    std::vector<DuplicateCluster> clusters;
    for (auto& [root, cluster] : by_root) {
        if (cluster.members.size() >= 2) {
            std::sort(cluster.members.begin(), cluster.members.end());
            clusters.push_back(std::move(cluster));
        }
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        return a.representative() < b.representative();
    });
    return clusters;
}

std::vector<std::size_t> deduplicate_indices(const std::vector<MinHashSignature>& signatures,
                                             const MinHashParams& params) {
    std::vector<bool> drop(signatures.size(), false);
    for (const DuplicateCluster& cluster : find_duplicates(signatures, params)) {
        for (std::size_t i = 1; i < cluster.members.size(); ++i) {
            drop[cluster.members[i]] = true;
        }
    }
    std::vector<std::size_t> kept;
    kept.reserve(signatures.size());
    for (std::size_t i = 0; i < signatures.size(); ++i) {
        if (!drop[i]) {
            kept.push_back(i);
        }
    }
    return kept;
}

namespace {

constexpr char kMagic[4] = {'T', 'C', 'M', 'H'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint32_t get_u32(const std::string& data, std::size_t& pos) {
    if (pos + 4 > data.size()) {
        throw ParseError("dedup: truncated signature file");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    }
    pos += 4;
    return v;
}

std::uint64_t get_u64(const std::string& data, std::size_t& pos) {
    if (pos + 8 > data.size()) {
        throw ParseError("dedup: truncated signature file");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    }
    pos += 8;
    return v;
}

}  // namespace

void save_signatures(const std::string& path, const std::vector<MinHashSignature>& signatures,
                     const MinHashParams& params) {
    params.validate();
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, 1);  // version
    put_u32(out, params.num_hashes);
    put_u32(out, params.bands);
    put_u32(out, params.rows_per_band);
    put_u32(out, params.shingle_words);
    put_u64(out, params.seed);
    put_u64(out, signatures.size());
    for (const auto& sig : signatures) {
        put_u32(out, static_cast<std::uint32_t>(sig.doc_id.size()));
        out += sig.doc_id;
        for (std::uint64_t v : sig.mins) {
            put_u64(out, v);
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
        throw IoError("dedup: cannot write signature file: " + path);
    }
}

std::vector<MinHashSignature> load_signatures(const std::string& path,
                                              const MinHashParams& expected) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("dedup: cannot read signature file: " + path);
    }
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0) {
        throw ParseError("dedup: bad signature file magic: " + path);
    }
    pos = 4;
    const std::uint32_t version = get_u32(data, pos);
    if (version != 1) {
        throw ParseError("dedup: unsupported signature file version");
    }
    MinHashParams actual = expected;
    actual.num_hashes = get_u32(data, pos);
    actual.bands = get_u32(data, pos);
    actual.rows_per_band = get_u32(data, pos);
    actual.shingle_words = get_u32(data, pos);
    actual.seed = get_u64(data, pos);
    if (!actual.compatible(expected)) {
        throw VocabMismatchError("dedup: signature file params do not match");
    }
    const std::uint64_t count = get_u64(data, pos);
    std::vector<MinHashSignature> sigs;
    sigs.reserve(count);
    for (std::uint64_t d = 0; d < count; ++d) {
        MinHashSignature sig;
        const std::uint32_t id_len = get_u32(data, pos);
        if (pos + id_len > data.size()) {
            throw ParseError("dedup: truncated signature file");
        }
        sig.doc_id = data.substr(pos, id_len);
        pos += id_len;
        sig.mins.resize(expected.num_hashes);
        for (std::uint32_t i = 0; i < expected.num_hashes; ++i) {
            sig.mins[i] = get_u64(data, pos);
        }
        sigs.push_back(std::move(sig));
    }
    return sigs;
}

}  // namespace tibcorpus::dedup
