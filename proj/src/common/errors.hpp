// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tibcorpus {

/// Invalid or inconsistent configuration (thresholds, stage order, params).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem and network failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (JSONL records, vocab/merges files, URLs).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A persisted dataset was produced with a different vocabulary.
class VocabMismatchError : public std::runtime_error {
public:
    explicit VocabMismatchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tibcorpus
