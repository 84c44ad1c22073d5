// SPDX-License-Identifier: Apache-2.0
#include "common/outcome.hpp"

#include "common/errors.hpp"

namespace tibcorpus {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::kKept:
            return "kept";
        case Verdict::kRemoved:
            return "removed";
        case Verdict::kTransformed:
            return "transformed";
    }
    return "kept";
}

Verdict verdict_from_name(const std::string& name) {
    if (name == "kept") return Verdict::kKept;
    if (name == "removed") return Verdict::kRemoved;
    if (name == "transformed") return Verdict::kTransformed;
    throw ParseError("unknown verdict: " + name);
}

}  // namespace tibcorpus
