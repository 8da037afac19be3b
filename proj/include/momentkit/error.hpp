// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace momentkit {

enum class ErrorCode {
    invalid_record,
    out_of_range,
    empty_input,
    format,
    service,
    synthesis_rejected,
    empty_evaluation,
    join,
    invalid_argument,
    io,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the toolkit.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when an LLM keeps returning dialogues that fail validation.
class SynthesisRejected : public Error {
public:
    SynthesisRejected(const std::string& message, std::string last_raw,
                      std::vector<std::string> violations)
        : Error(ErrorCode::synthesis_rejected, message),
          last_raw_(std::move(last_raw)),
          violations_(std::move(violations)) {}

    const std::string& last_raw() const noexcept { return last_raw_; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::string last_raw_;
    std::vector<std::string> violations_;
};

/// Raised when every item of an evaluation was excluded.
class EmptyEvaluation : public Error {
public:
    EmptyEvaluation(const std::string& message, std::size_t total, std::size_t excluded)
        : Error(ErrorCode::empty_evaluation, message), total_(total), excluded_(excluded) {}

    std::size_t total() const noexcept { return total_; }
    std::size_t excluded() const noexcept { return excluded_; }

private:
    std::size_t total_;
    std::size_t excluded_;
};

/// Raised when predictions and ground truth do not share keys.
class JoinError : public Error {
public:
    JoinError(const std::string& message, std::vector<std::string> orphans)
        : Error(ErrorCode::join, message), orphans_(std::move(orphans)) {}

    const std::vector<std::string>& orphans() const noexcept { return orphans_; }

private:
    std::vector<std::string> orphans_;
};

}  // namespace momentkit
