// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "common/outcome.hpp"

namespace tibcorpus::langid {

struct LanguageScore {
    std::string language;  // ISO 639 code
    double confidence = 0.0;
};

/// Character n-gram profile (n = 1..3) with log-probability weights.
///
/// N-grams are taken circularly over the codepoint sequence, so a text
/// repeated k times yields exactly k copies of the same gram multiset. That
/// makes per-gram log-likelihood — and therefore the classifier ranking —
/// invariant under repetition.
class ClassifierProfile {
public:
    static constexpr int kMaxOrder = 3;

    ClassifierProfile() = default;

    static ClassifierProfile train(std::string language, std::string_view seed_utf8);
    static ClassifierProfile load(std::string language, const std::string& path);
    void save(const std::string& path) const;

    const std::string& language() const { return language_; }
    bool empty() const;

    /// Mean log-weight per extracted gram (3 per codepoint); unseen grams
    /// contribute oov_log_weight.
    double log_likelihood_per_gram(const std::u32string& codepoints) const;

    /// Log weight of one gram (1..3 codepoints), or oov for unseen.
    double weight(std::u32string_view gram) const;

    static constexpr double oov_log_weight() { return -16.0; }

private:
    std::string language_;
    // One map per order; keys pack up to three 21-bit codepoints.
    std::array<std::unordered_map<std::uint64_t, double>, kMaxOrder> weights_;

    void validate() const;
};

/// Multi-profile softmax classifier over per-gram log-likelihoods.
class Classifier {
public:
    explicit Classifier(std::vector<ClassifierProfile> profiles, double softmax_scale = 0.25);

    /// Built-in bo/en/zh classifier trained from the bundled seed texts.
    static Classifier builtin(double softmax_scale = 0.25);

    /// Scores sum to 1 and are sorted by confidence descending (ties broken
    /// by language code). Throws std::invalid_argument on empty text or when
    /// no profiles are loaded.
    std::vector<LanguageScore> classify(std::string_view text_utf8) const;

    /// Confidence assigned to `language` regardless of rank (0 if unknown).
    double confidence_for(std::string_view text_utf8, const std::string& language) const;

    const std::vector<ClassifierProfile>& profiles() const { return profiles_; }

private:
    std::vector<ClassifierProfile> profiles_;
    double softmax_scale_;
};

/// Keep/remove decision for a Tibetan-confidence score. "Below threshold" is
/// strict: a score equal to the threshold is kept.
inline bool language_verdict(double confidence, double threshold) {
    return confidence >= threshold;
}

/// Applies the language threshold to a document text.
FilterOutcome filter_language(const Classifier& classifier, std::string_view text_utf8,
                              const std::string& language = "bo", double threshold = 0.5);

/// Seed texts the built-in profiles are trained from.
std::string_view builtin_seed(std::string_view language);

}  // namespace tibcorpus::langid
