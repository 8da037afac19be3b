// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"
#include "momentkit/random.hpp"

namespace momentkit::dialoguegen {

/// Events of a record in frame-index space, sorted by (start, end).
std::vector<SpanCaption> to_span_captions(const VideoRecord& record);

Dialogue build_single_turn(std::span<const SpanCaption> events, Rng& rng);

/// Shuffles the events, then asks each one as captioning or grounding with
/// probability 1/2.
Dialogue build_multi_turn(std::span<const SpanCaption> events, Rng& rng);

struct CorpusFailure {
    std::string video_id;
    std::string message;
};

struct Stage2Corpus {
    std::vector<Dialogue> dialogues;
    std::vector<CorpusFailure> failures;
};

/// Each record seeds its own generator from (seed, video_id), so output does not
/// depend on record order or on how the records are partitioned.
Stage2Corpus generate_stage2_corpus(std::span<const VideoRecord> records,
                                    double single_turn_fraction, std::uint64_t seed);

/// Instruction-tuning synthesis prompt. Events are listed in start order with
/// <sK>/<eK> placeholders in place of timestamps.
std::string build_stage3_prompt(std::span<const Event> events);

// Training sequence assembly.

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// Pluggable text -> token segmentation. Tokens are reported as character spans
/// into the input text.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<CharSpan> tokenize(std::string_view text) const = 0;
};

/// Splits on whitespace and additionally cuts `<video>` and `</s>` out as
/// standalone tokens.
class WhitespaceTokenizer : public Tokenizer {
public:
    std::vector<CharSpan> tokenize(std::string_view text) const override;
};

struct TurnSegment {
    CharSpan question;  // characters of Q_i in `text`
    CharSpan answer;    // characters of A_i plus its terminator
    std::size_t answer_token_begin = 0;
    std::size_t answer_token_end = 0;  // exclusive
};

struct TokenLayout {
    std::string video_id;
    std::string text;
    std::vector<CharSpan> tokens;
    std::size_t video_slot = 0;  // token index of <video>
    std::vector<bool> loss_mask;
    std::vector<TurnSegment> turns;
    std::vector<std::string> warnings;

    std::string token_text(std::size_t i) const {
        return text.substr(tokens[i].begin, tokens[i].end - tokens[i].begin);
    }

    /// JSONL form with character-span mask annotations.
    nlohmann::json to_json() const;
};

/// Renders the dialogue in the chat format (system prompt, `USER: ... ASSISTANT: ...</s>`),
/// prefixes the first question with the video statement and masks the answers.
TokenLayout assemble_training_sequence(const Dialogue& dialogue, const Tokenizer& tokenizer);

}  // namespace momentkit::dialoguegen
