// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace tibcorpus {

enum class Verdict : std::uint8_t {
    kKept = 0,
    kRemoved = 1,
    kTransformed = 2,
};

/// Per-document verdict from one filter stage. A removed outcome carries
/// exactly one primary reason code; measurements are recorded even when the
/// document is kept so audits can reconstruct every decision.
struct FilterOutcome {
    Verdict verdict = Verdict::kKept;
    std::string reason;                        // set iff removed
    std::uint64_t lines_dropped = 0;           // set iff transformed
    std::string detail;                        // e.g. matched sensitive term
    std::map<std::string, double> measurements;

    bool kept() const { return verdict != Verdict::kRemoved; }
    bool removed() const { return verdict == Verdict::kRemoved; }

    static FilterOutcome keep() { return {}; }

    static FilterOutcome remove(std::string reason_code) {
        FilterOutcome o;
        o.verdict = Verdict::kRemoved;
        o.reason = std::move(reason_code);
        return o;
    }
};

const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

}  // namespace tibcorpus
