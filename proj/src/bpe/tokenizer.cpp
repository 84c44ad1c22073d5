// SPDX-License-Identifier: Apache-2.0
#include "bpe/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <stdexcept>

#include "common/errors.hpp"
#include "common/hash.hpp"
#include "common/utf8.hpp"
#include "text/segment.hpp"

namespace tibcorpus::bpe {

namespace {

constexpr std::uint32_t kDead = 0xFFFFFFFFu;

constexpr std::uint64_t pack_pair(std::uint32_t l, std::uint32_t r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
}

}  // namespace

Vocabulary Vocabulary::byte_level() {
    Vocabulary v;
    v.id_to_token_.reserve(256);
    for (int b = 0; b < 256; ++b) {
        std::string t(1, static_cast<char>(b));
        v.token_to_id_.emplace(t, static_cast<std::uint32_t>(b));
        v.id_to_token_.push_back(std::move(t));
    }
    return v;
}

const std::string& Vocabulary::token(std::uint32_t id) const {
    if (id >= id_to_token_.size()) {
        throw std::invalid_argument("vocab: unknown token id " + std::to_string(id));
    }
    return id_to_token_[id];
}

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view bytes) const {
    const auto it = token_to_id_.find(std::string(bytes));
    if (it == token_to_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint32_t Vocabulary::add_token(std::string bytes) {
    if (bytes.empty()) {
        throw std::invalid_argument("vocab: empty token");
    }
    const std::uint32_t id = size();
    const auto [it, inserted] = token_to_id_.emplace(std::move(bytes), id);
    if (!inserted) {
        throw std::invalid_argument("vocab: duplicate token byte sequence");
    }
    id_to_token_.push_back(it->first);
    return id;
}

std::uint32_t Vocabulary::ensure_special(std::string_view bytes) {
    if (const auto existing = id_of(bytes)) {
        specials_.insert(*existing);
        return *existing;
    }
    const std::uint32_t id = add_token(std::string(bytes));
    specials_.insert(id);
    return id;
}

void Vocabulary::mark_special(std::uint32_t id) {
    token(id);  // bounds check
    specials_.insert(id);
}

Tokenizer::Tokenizer(Vocabulary vocab, std::vector<MergeRule> merges)
    : vocab_(std::move(vocab)), merges_(std::move(merges)) {
    std::sort(merges_.begin(), merges_.end(),
              [](const MergeRule& a, const MergeRule& b) { return a.rank < b.rank; });
    for (std::size_t i = 0; i < merges_.size(); ++i) {
        const MergeRule& m = merges_[i];
        if (m.rank != i) {
            throw ParseError("bpe: merge ranks must be dense from 0");
        }
        if (vocab_.token(m.result) != vocab_.token(m.left) + vocab_.token(m.right)) {
            throw ParseError("bpe: merge result bytes != left ++ right at rank " +
                             std::to_string(i));
        }
    }
    rebuild_pair_index();
}

void Tokenizer::rebuild_pair_index() {
    pair_rank_.clear();
    pair_rank_.reserve(merges_.size() * 2);
    for (const MergeRule& m : merges_) {
        pair_rank_.emplace(pack_pair(m.left, m.right), m.rank);
    }
}

std::vector<std::uint32_t> Tokenizer::encode(std::string_view input) const {
    std::vector<std::uint32_t> tok(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        tok[i] = static_cast<unsigned char>(input[i]);
    }
    if (input.empty() || merges_.empty()) {
        return tok;
    }

    const std::size_t n = input.size();
    std::vector<std::int32_t> nxt(n), prv(n);
    for (std::size_t i = 0; i < n; ++i) {
        nxt[i] = i + 1 < n ? static_cast<std::int32_t>(i + 1) : -1;
        prv[i] = i > 0 ? static_cast<std::int32_t>(i - 1) : -1;
    }

    // Min-heap of (rank, position): lowest rank first, leftmost first.
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> heap;
    const auto push_candidate = [&](std::int32_t i) {
        if (i < 0) {
            return;
        }
        const std::int32_t j = nxt[static_cast<std::size_t>(i)];
        if (j < 0) {
            return;
        }
        const auto it = pair_rank_.find(
            pack_pair(tok[static_cast<std::size_t>(i)], tok[static_cast<std::size_t>(j)]));
        if (it != pair_rank_.end()) {
            heap.push((static_cast<std::uint64_t>(it->second) << 32) |
                      static_cast<std::uint32_t>(i));
        }
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        push_candidate(static_cast<std::int32_t>(i));
    }

    while (!heap.empty()) {
        const std::uint64_t entry = heap.top();
        heap.pop();
        const std::uint32_t rank = static_cast<std::uint32_t>(entry >> 32);
        const std::size_t i = static_cast<std::uint32_t>(entry);
        if (tok[i] == kDead) {
            continue;
        }
        const std::int32_t j = nxt[i];
        if (j < 0) {
            continue;
        }
        const auto it = pair_rank_.find(pack_pair(tok[i], tok[static_cast<std::size_t>(j)]));
        if (it == pair_rank_.end() || it->second != rank) {
            continue;  // stale entry
        }
        tok[i] = merges_[rank].result;
        tok[static_cast<std::size_t>(j)] = kDead;
        const std::int32_t k = nxt[static_cast<std::size_t>(j)];
        nxt[i] = k;
        if (k >= 0) {
            prv[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(i);
        }
        push_candidate(prv[i]);
        push_candidate(static_cast<std::int32_t>(i));
    }

    std::vector<std::uint32_t> out;
    out.reserve(n / 2 + 1);
    for (std::int32_t i = 0; i >= 0; i = nxt[static_cast<std::size_t>(i)]) {
        out.push_back(tok[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::string Tokenizer::decode(std::span<const std::uint32_t> ids, bool replace_invalid) const {
    std::string out;
    for (std::uint32_t id : ids) {
        out += vocab_.token(id);
    }
    if (replace_invalid) {
        return utf8::sanitize(out);
    }
    return out;
}

CompressionReport Tokenizer::compression(std::string_view input) const {
    CompressionReport report;
    const std::u32string cps = utf8::decode_lossy(input);
    report.codepoints = cps.size();
    for (char32_t cp : cps) {
        if (text::is_tibetan_codepoint(cp)) {
            ++report.tibetan_codepoints;
        } else {
            ++report.other_codepoints;
        }
    }
    report.tokens = encode(input).size();
    report.ratio = report.tokens == 0 ? 0.0
                                      : static_cast<double>(report.codepoints) /
                                            static_cast<double>(report.tokens);
    return report;
}

std::string escape_token(std::string_view bytes) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size());
    for (unsigned char c : bytes) {
        if (c == '\\') {
            out += "\\\\";
        } else if (c >= 0x21 && c <= 0x7E) {
            out.push_back(static_cast<char>(c));
        } else {
            out += "\\x";
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

std::string unescape_token(std::string_view escaped) {
    const auto hex_val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        const char c = escaped[i];
        if (c != '\\') {
            out.push_back(c);
            continue;
        }
        if (i + 1 < escaped.size() && escaped[i + 1] == '\\') {
            out.push_back('\\');
            ++i;
        } else if (i + 3 < escaped.size() && escaped[i + 1] == 'x' &&
                   hex_val(escaped[i + 2]) >= 0 && hex_val(escaped[i + 3]) >= 0) {
            out.push_back(static_cast<char>(hex_val(escaped[i + 2]) * 16 + hex_val(escaped[i + 3])));
            i += 3;
        } else {
            throw ParseError("bpe: bad escape in token: " + std::string(escaped));
        }
    }
    return out;
}

std::string Tokenizer::vocab_file_contents() const {
    std::string out;
    for (std::uint32_t id = 0; id < vocab_.size(); ++id) {
        out += escape_token(vocab_.token(id));
        out.push_back('\n');
    }
    return out;
}

std::string Tokenizer::merges_file_contents() const {
    std::string out;
    for (const MergeRule& m : merges_) {
        out += std::to_string(m.rank);
        out.push_back('\t');
        out += std::to_string(m.left);
        out.push_back('\t');
        out += std::to_string(m.right);
        out.push_back('\t');
        out += std::to_string(m.result);
        out.push_back('\n');
    }
    return out;
}

void Tokenizer::save(const std::string& vocab_path, const std::string& merges_path) const {
    const auto write = [](const std::string& path, const std::string& contents) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f || !f.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
            throw IoError("bpe: cannot write " + path);
        }
    };
    write(vocab_path, vocab_file_contents());
    write(merges_path, merges_file_contents());
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("bpe: cannot read " + path);
    }
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

Tokenizer Tokenizer::load(const std::string& vocab_path, const std::string& merges_path) {
    const std::string vocab_data = read_file(vocab_path);
    const std::string merges_data = read_file(merges_path);

    Vocabulary vocab;  // built token by token, bypassing byte_level()
    {
        std::vector<std::string> tokens;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= vocab_data.size(); ++i) {
            if (i == vocab_data.size() || vocab_data[i] == '\n') {
                if (i > start) {
                    tokens.push_back(unescape_token(
                        std::string_view(vocab_data).substr(start, i - start)));
                } else if (i < vocab_data.size()) {
                    throw ParseError("bpe: empty vocab line " + std::to_string(tokens.size()));
                }
                start = i + 1;
            }
        }
        if (tokens.size() < 256) {
            throw ParseError("bpe: vocab file has fewer than 256 entries");
        }
        for (int b = 0; b < 256; ++b) {
            if (tokens[static_cast<std::size_t>(b)].size() != 1 ||
                static_cast<unsigned char>(tokens[static_cast<std::size_t>(b)][0]) != b) {
                throw ParseError("bpe: vocab ids 0..255 must be the single bytes in order");
            }
        }
        vocab = Vocabulary::byte_level();
        for (std::size_t i = 256; i < tokens.size(); ++i) {
            vocab.add_token(std::move(tokens[i]));
        }
    }

    std::vector<MergeRule> merges;
    {
        std::size_t start = 0;
        std::size_t lineno = 0;
        for (std::size_t i = 0; i <= merges_data.size(); ++i) {
            if (i != merges_data.size() && merges_data[i] != '\n') {
                continue;
            }
            if (i > start) {
                ++lineno;
                const std::string_view line = std::string_view(merges_data).substr(start, i - start);
                MergeRule m;
                unsigned long long vals[4];
                std::size_t field = 0;
                std::size_t fstart = 0;
                for (std::size_t k = 0; k <= line.size(); ++k) {
                    if (k == line.size() || line[k] == '\t') {
                        if (field >= 4 || k == fstart) {
                            throw ParseError("bpe: bad merges line " + std::to_string(lineno));
                        }
                        try {
                            vals[field] = std::stoull(std::string(line.substr(fstart, k - fstart)));
                        } catch (const std::exception&) {
                            throw ParseError("bpe: bad merges line " + std::to_string(lineno));
                        }
                        ++field;
                        fstart = k + 1;
                    }
                }
                if (field != 4) {
                    throw ParseError("bpe: bad merges line " + std::to_string(lineno));
                }
                m.rank = static_cast<std::uint32_t>(vals[0]);
                m.left = static_cast<std::uint32_t>(vals[1]);
                m.right = static_cast<std::uint32_t>(vals[2]);
                m.result = static_cast<std::uint32_t>(vals[3]);
                if (m.left >= vocab.size() || m.right >= vocab.size() || m.result >= vocab.size()) {
                    throw ParseError("bpe: merges reference unknown ids at line " +
                                     std::to_string(lineno));
                }
                merges.push_back(m);
            }
            start = i + 1;
        }
    }

    Tokenizer tok(std::move(vocab), std::move(merges));
    // Specials are the non-byte ids no merge produces.
    std::vector<bool> is_result(tok.vocab_.size(), false);
    for (const MergeRule& m : tok.merges_) {
        is_result[m.result] = true;
    }
    for (std::uint32_t id = 256; id < tok.vocab_.size(); ++id) {
        if (!is_result[id]) {
            tok.vocab_.mark_special(id);
        }
    }
    return tok;
}

std::array<std::uint8_t, 32> Tokenizer::fingerprint() const {
    std::string blob = vocab_file_contents();
    blob.push_back('\0');
    blob += merges_file_contents();
    return hash::sha256(blob);
}

std::uint32_t Tokenizer::ensure_special(std::string_view bytes) {
    return vocab_.ensure_special(bytes);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

// Incremental pair bookkeeping over a doubly linked token list. Counts stay
// exact under merges; position lists may hold stale entries that are
// re-validated on use. Node indices increase left to right within a document,
// so sorting positions restores document order after out-of-order inserts.
class PairTracker {
public:
    explicit PairTracker(const std::vector<std::string>* tokens) : cmp_{tokens}, sel_(cmp_) {}

    void bootstrap_count(std::uint32_t l, std::uint32_t r, std::int32_t pos) {
        ++counts_[pack_pair(l, r)];
        positions_[pack_pair(l, r)].push_back(pos);
    }

    void finish_bootstrap() {
        for (const auto& [key, count] : counts_) {
            sel_.insert({count, static_cast<std::uint32_t>(key >> 32),
                         static_cast<std::uint32_t>(key)});
        }
    }

    void inc(std::uint32_t l, std::uint32_t r, std::int32_t pos) {
        const std::uint64_t key = pack_pair(l, r);
        std::int64_t& count = counts_[key];
        if (count > 0) {
            sel_.erase({count, l, r});
        }
        ++count;
        sel_.insert({count, l, r});
        positions_[key].push_back(pos);
    }

    void dec(std::uint32_t l, std::uint32_t r) {
        const std::uint64_t key = pack_pair(l, r);
        std::int64_t& count = counts_[key];
        sel_.erase({count, l, r});
        --count;
        if (count > 0) {
            sel_.insert({count, l, r});
        }
    }

    bool empty() const { return sel_.empty(); }

    std::pair<std::uint32_t, std::uint32_t> best() const {
        const SelEntry& top = *sel_.begin();
        return {top.left, top.right};
    }

    std::vector<std::int32_t> take_positions(std::uint32_t l, std::uint32_t r) {
        const auto it = positions_.find(pack_pair(l, r));
        if (it == positions_.end()) {
            return {};
        }
        std::vector<std::int32_t> out = std::move(it->second);
        positions_.erase(it);
        return out;
    }

private:
    struct SelEntry {
        std::int64_t count;
        std::uint32_t left;
        std::uint32_t right;
    };
    struct SelCmp {
        const std::vector<std::string>* tokens;
        bool operator()(const SelEntry& a, const SelEntry& b) const {
            if (a.count != b.count) {
                return a.count > b.count;
            }
            if (a.left != b.left) {
                return (*tokens)[a.left] < (*tokens)[b.left];
            }
            if (a.right != b.right) {
                return (*tokens)[a.right] < (*tokens)[b.right];
            }
            return false;
        }
    };

    SelCmp cmp_;
    std::unordered_map<std::uint64_t, std::int64_t> counts_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> positions_;
    std::set<SelEntry, SelCmp> sel_;
};

}  // namespace

Tokenizer train_bpe(std::span<const std::string> corpus, const TrainOptions& options) {
    std::size_t total_bytes = 0;
    for (const std::string& doc : corpus) {
        total_bytes += doc.size();
    }
    if (total_bytes == 0) {
        throw std::invalid_argument("bpe: cannot train on an empty corpus");
    }
    if (total_bytes > static_cast<std::size_t>(INT32_MAX)) {
        throw std::invalid_argument("bpe: corpus too large for the trainer (2 GB limit)");
    }
    const std::uint64_t target =
        options.target_includes_bytes ? options.target_size : 256ULL + options.target_size;
    if (target <= 256) {
        throw std::invalid_argument("bpe: target_size must exceed the 256 byte primitives");
    }

    // Token byte sequences live here; the tracker's comparator reads them.
    std::vector<std::string> token_bytes;
    token_bytes.reserve(target);
    for (int b = 0; b < 256; ++b) {
        token_bytes.emplace_back(1, static_cast<char>(b));
    }

    std::vector<std::uint32_t> tok(total_bytes);
    std::vector<std::int32_t> nxt(total_bytes), prv(total_bytes);
    PairTracker tracker(&token_bytes);
    {
        std::size_t pos = 0;
        for (const std::string& doc : corpus) {
            const std::size_t begin = pos;
            for (unsigned char c : doc) {
                tok[pos] = c;
                prv[pos] = pos > begin ? static_cast<std::int32_t>(pos - 1) : -1;
                nxt[pos] = pos + 1 < begin + doc.size() ? static_cast<std::int32_t>(pos + 1) : -1;
                if (pos > begin) {
                    tracker.bootstrap_count(tok[pos - 1], c, static_cast<std::int32_t>(pos - 1));
                }
                ++pos;
            }
        }
        tracker.finish_bootstrap();
    }

    std::vector<MergeRule> merges;
    merges.reserve(target - 256);
    while (token_bytes.size() < target && !tracker.empty()) {
        const auto [left, right] = tracker.best();
        const std::uint32_t result = static_cast<std::uint32_t>(token_bytes.size());
        token_bytes.push_back(token_bytes[left] + token_bytes[right]);
        merges.push_back({left, right, result, static_cast<std::uint32_t>(merges.size())});

        std::vector<std::int32_t> occurrences = tracker.take_positions(left, right);
        std::sort(occurrences.begin(), occurrences.end());
        for (const std::int32_t pos : occurrences) {
            const auto i = static_cast<std::size_t>(pos);
            if (tok[i] != left) {
                continue;  // stale or already merged
            }
            const std::int32_t jn = nxt[i];
            if (jn < 0) {
                continue;
            }
            const auto j = static_cast<std::size_t>(jn);
            if (tok[j] != right) {
                continue;
            }
            const std::int32_t p = prv[i];
            const std::int32_t k = nxt[j];
            if (p >= 0) {
                tracker.dec(tok[static_cast<std::size_t>(p)], left);
            }
            if (k >= 0) {
                tracker.dec(right, tok[static_cast<std::size_t>(k)]);
            }
            tracker.dec(left, right);
            tok[i] = result;
            tok[j] = kDead;
            nxt[i] = k;
            if (k >= 0) {
                prv[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(i);
            }
            if (p >= 0) {
                tracker.inc(tok[static_cast<std::size_t>(p)], result, p);
            }
            if (k >= 0) {
                tracker.inc(result, tok[static_cast<std::size_t>(k)],
                            static_cast<std::int32_t>(i));
            }
        }
    }

    Vocabulary vocab = Vocabulary::byte_level();
    for (std::size_t id = 256; id < token_bytes.size(); ++id) {
        vocab.add_token(std::move(token_bytes[id]));
    }
    return Tokenizer(std::move(vocab), std::move(merges));
}

Tokenizer train_bpe(std::span<const std::string> corpus, std::uint32_t target_size) {
    TrainOptions options;
    options.target_size = target_size;
    return train_bpe(corpus, options);
}

Tokenizer merge_vocab(const Tokenizer& base, const Tokenizer& addition) {
    for (int b = 0; b < 256; ++b) {
        if (base.vocab().token(static_cast<std::uint32_t>(b)).size() != 1) {
            throw std::invalid_argument("bpe: base vocabulary is missing byte primitives");
        }
    }

    Vocabulary vocab = base.vocab();
    std::vector<MergeRule> merges = base.merges();

    // Addition id -> merged id, appending unseen byte sequences in id order.
    std::vector<std::uint32_t> remap(addition.vocab().size());
    for (std::uint32_t id = 0; id < addition.vocab().size(); ++id) {
        const std::string& bytes = addition.vocab().token(id);
        if (const auto existing = vocab.id_of(bytes)) {
            remap[id] = *existing;
        } else {
            remap[id] = vocab.add_token(bytes);
        }
        if (addition.vocab().is_special(id)) {
            vocab.mark_special(remap[id]);
        }
    }

    std::unordered_map<std::uint64_t, bool> have_pair;
    for (const MergeRule& m : merges) {
        have_pair[pack_pair(m.left, m.right)] = true;
    }
    for (const MergeRule& m : addition.merges()) {
        const std::uint32_t l = remap[m.left];
        const std::uint32_t r = remap[m.right];
        if (have_pair.count(pack_pair(l, r))) {
            continue;  // base's rule wins for duplicate pairs
        }
        have_pair[pack_pair(l, r)] = true;
        merges.push_back({l, r, remap[m.result], static_cast<std::uint32_t>(merges.size())});
    }

    Tokenizer merged(std::move(vocab), std::move(merges));
    for (std::uint32_t id : base.vocab().specials()) {
        merged.vocab().mark_special(id);
    }
    return merged;
}

}  // namespace tibcorpus::bpe
