// SPDX-License-Identifier: Apache-2.0
#include "langid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "common/errors.hpp"
#include "common/utf8.hpp"
#include "text/segment.hpp"

namespace tibcorpus::langid {

namespace {

std::uint64_t pack_gram(const char32_t* cps, int n) {
    std::uint64_t key = 0;
    for (int k = 0; k < n; ++k) {
        key |= static_cast<std::uint64_t>(cps[k] & 0x1FFFFF) << (21 * k);
    }
    return key;
}

std::string escape_gram(std::u32string_view gram) {
    std::string out;
    for (char32_t cp : gram) {
        switch (cp) {
            case U'\\':
                out += "\\\\";
                break;
            case U'\n':
                out += "\\n";
                break;
            case U'\t':
                out += "\\t";
                break;
            case U'\r':
                out += "\\r";
                break;
            default:
                utf8::append(out, cp);
        }
    }
    return out;
}

std::u32string unescape_gram(std::string_view s) {
    std::string raw;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            ++i;
            switch (s[i]) {
                case 'n':
                    raw += '\n';
                    break;
                case 't':
                    raw += '\t';
                    break;
                case 'r':
                    raw += '\r';
                    break;
                default:
                    raw += s[i];
            }
        } else {
            raw += s[i];
        }
    }
    return utf8::decode_lossy(raw);
}

}  // namespace

ClassifierProfile ClassifierProfile::train(std::string language, std::string_view seed_utf8) {
    const std::u32string cps = utf8::decode_lossy(seed_utf8);
    if (cps.empty()) {
        throw ConfigError("langid: empty seed text for profile '" + language + "'");
    }
    ClassifierProfile p;
    p.language_ = std::move(language);
    const std::size_t len = cps.size();
    for (int n = 1; n <= kMaxOrder; ++n) {
        auto& counts = p.weights_[static_cast<std::size_t>(n - 1)];
        char32_t gram[kMaxOrder];
        for (std::size_t i = 0; i < len; ++i) {
            for (int k = 0; k < n; ++k) {
                gram[k] = cps[(i + static_cast<std::size_t>(k)) % len];
            }
            counts[pack_gram(gram, n)] += 1.0;
        }
        const double total = static_cast<double>(len);
        for (auto& [key, value] : counts) {
            value = std::log(value / total);
        }
    }
    p.validate();
    return p;
}

void ClassifierProfile::validate() const {
    bool any = false;
    for (const auto& m : weights_) {
        for (const auto& [key, w] : m) {
            if (!std::isfinite(w)) {
                throw ConfigError("langid: non-finite weight in profile '" + language_ + "'");
            }
            any = true;
        }
    }
    if (!any) {
        throw ConfigError("langid: profile '" + language_ + "' has no n-grams");
    }
}

double ClassifierProfile::weight(std::u32string_view gram) const {
    const int n = static_cast<int>(gram.size());
    if (n < 1 || n > kMaxOrder) {
        return oov_log_weight();
    }
    const auto& m = weights_[static_cast<std::size_t>(n - 1)];
    const auto it = m.find(pack_gram(gram.data(), n));
    return it == m.end() ? oov_log_weight() : it->second;
}

double ClassifierProfile::log_likelihood_per_gram(const std::u32string& cps) const {
    const std::size_t len = cps.size();
    if (len == 0) {
        return oov_log_weight();
    }
    double total = 0.0;
    char32_t gram[kMaxOrder];
    for (int n = 1; n <= kMaxOrder; ++n) {
        const auto& m = weights_[static_cast<std::size_t>(n - 1)];
        for (std::size_t i = 0; i < len; ++i) {
            for (int k = 0; k < n; ++k) {
                gram[k] = cps[(i + static_cast<std::size_t>(k)) % len];
            }
            const auto it = m.find(pack_gram(gram, n));
            total += it == m.end() ? oov_log_weight() : it->second;
        }
    }
    return total / (3.0 * static_cast<double>(len));
}

bool ClassifierProfile::empty() const {
    for (const auto& m : weights_) {
        if (!m.empty()) {
            return false;
        }
    }
    return true;
}

void ClassifierProfile::save(const std::string& path) const {
    // Sorted by (order, gram) so saves are reproducible.
    std::map<std::pair<int, std::u32string>, double> sorted;
    for (int n = 1; n <= kMaxOrder; ++n) {
        for (const auto& [key, w] : weights_[static_cast<std::size_t>(n - 1)]) {
            std::u32string gram;
            for (int k = 0; k < n; ++k) {
                gram.push_back(static_cast<char32_t>((key >> (21 * k)) & 0x1FFFFF));
            }
            sorted[{n, gram}] = w;
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("langid: cannot write profile file: " + path);
    }
    char buf[64];
    for (const auto& [key, w] : sorted) {
        std::snprintf(buf, sizeof(buf), "%.17g", w);
        out << escape_gram(key.second) << '\t' << buf << '\n';
    }
    if (!out) {
        throw IoError("langid: write failed: " + path);
    }
}

ClassifierProfile ClassifierProfile::load(std::string language, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("langid: cannot read profile file: " + path);
    }
    ClassifierProfile p;
    p.language_ = std::move(language);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw ParseError("langid: missing tab in " + path + ":" + std::to_string(lineno));
        }
        const std::u32string gram = unescape_gram(std::string_view(line).substr(0, tab));
        if (gram.empty() || gram.size() > kMaxOrder) {
            throw ParseError("langid: bad n-gram length in " + path + ":" + std::to_string(lineno));
        }
        double w = 0.0;
        try {
            w = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw ParseError("langid: bad weight in " + path + ":" + std::to_string(lineno));
        }
        if (!std::isfinite(w)) {
            throw ParseError("langid: non-finite weight in " + path + ":" + std::to_string(lineno));
        }
        p.weights_[gram.size() - 1][pack_gram(gram.data(), static_cast<int>(gram.size()))] = w;
    }
    p.validate();
    return p;
}

Classifier::Classifier(std::vector<ClassifierProfile> profiles, double softmax_scale)
    : profiles_(std::move(profiles)), softmax_scale_(softmax_scale) {
    if (profiles_.empty()) {
        throw ConfigError("langid: classifier needs at least one profile");
    }
}

Classifier Classifier::builtin(double softmax_scale) {
    std::vector<ClassifierProfile> profiles;
    profiles.push_back(ClassifierProfile::train("bo", builtin_seed("bo")));
    profiles.push_back(ClassifierProfile::train("en", builtin_seed("en")));
    profiles.push_back(ClassifierProfile::train("zh", builtin_seed("zh")));
    return Classifier(std::move(profiles), softmax_scale);
}

std::vector<LanguageScore> Classifier::classify(std::string_view text_utf8) const {
    const std::u32string cps = utf8::decode_lossy(text_utf8);
    bool all_ws = true;
    for (char32_t cp : cps) {
        if (!text::is_unicode_whitespace(cp)) {
            all_ws = false;
            break;
        }
    }
    if (cps.empty() || all_ws) {
        throw std::invalid_argument("langid: cannot classify empty text");
    }

    std::vector<double> ll(profiles_.size());
    double max_ll = -1e300;
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
        ll[i] = softmax_scale_ * profiles_[i].log_likelihood_per_gram(cps);
        max_ll = std::max(max_ll, ll[i]);
    }
    double denom = 0.0;
    for (double v : ll) {
        denom += std::exp(v - max_ll);
    }
    std::vector<LanguageScore> scores(profiles_.size());
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
        scores[i] = {profiles_[i].language(), std::exp(ll[i] - max_ll) / denom};
    }
    std::sort(scores.begin(), scores.end(), [](const LanguageScore& a, const LanguageScore& b) {
        if (a.confidence != b.confidence) {
            return a.confidence > b.confidence;
        }
        return a.language < b.language;
    });
    return scores;
}

double Classifier::confidence_for(std::string_view text_utf8, const std::string& language) const {
    for (const auto& s : classify(text_utf8)) {
        if (s.language == language) {
            return s.confidence;
        }
    }
    return 0.0;
}

FilterOutcome filter_language(const Classifier& classifier, std::string_view text_utf8,
                              const std::string& language, double threshold) {
    const double confidence = classifier.confidence_for(text_utf8, language);
    FilterOutcome outcome;
    outcome.measurements["lang.confidence"] = confidence;
    if (!language_verdict(confidence, threshold)) {
        outcome.verdict = Verdict::kRemoved;
        outcome.reason = "lang.below_threshold";
    }
    return outcome;
}

}  // namespace tibcorpus::langid
