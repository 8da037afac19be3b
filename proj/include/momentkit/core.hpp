// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/error.hpp"

namespace momentkit {

/// Number of uniformly sampled frames; frame indices run 0..kFrameCount-1.
inline constexpr int kFrameCount = 100;
inline constexpr int kMaxFrameIndex = kFrameCount - 1;

struct Event {
    double start = 0.0;  // seconds
    double end = 0.0;    // seconds
    std::string caption;
};

struct VideoRecord {
    std::string video_id;
    double duration = 0.0;  // seconds
    std::vector<Event> events;
};

/// A moment in the 00..99 frame-index coordinate system.
struct FrameSpan {
    int start_index = 0;
    int end_index = 0;

    /// Throws out_of_range unless 0 <= start <= end <= 99.
    static FrameSpan make(int start_index, int end_index);

    int length() const noexcept { return end_index - start_index; }
    bool is_point() const noexcept { return start_index == end_index; }

    /// "from SS to EE"
    std::string render() const;

    friend bool operator==(const FrameSpan&, const FrameSpan&) = default;
    friend auto operator<=>(const FrameSpan&, const FrameSpan&) = default;
};

/// Two-digit zero-padded rendering of a frame index.
std::string format_frame_index(int index);

struct SpanCaption {
    FrameSpan span;
    std::string caption;

    friend bool operator==(const SpanCaption&, const SpanCaption&) = default;
};

enum class DialogueSource { template_single, template_multi, llm_synth, external };

const char* to_string(DialogueSource source);
DialogueSource dialogue_source_from_string(std::string_view text);

struct Turn {
    std::string user;
    std::string assistant;

    friend bool operator==(const Turn&, const Turn&) = default;
};

/// Alternating user/assistant exchanges. Holding pairs keeps alternation structural.
struct Dialogue {
    std::string video_id;
    DialogueSource source = DialogueSource::external;
    std::uint64_t seed = 0;
    std::vector<Turn> turns;

    friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

// Coordinate transform between seconds and frame indices. Index k denotes the
// sample time k/99 * duration, so index 0 is the first frame and 99 the last.

int seconds_to_frame_index(double t, double duration);
double frame_index_to_seconds(int index, double duration);
FrameSpan event_to_frame_span(const Event& event, double duration);

enum class ViolationKind {
    missing_id,
    bad_duration,
    inverted_event,
    out_of_bounds,
    empty_caption,
};

struct Violation {
    ViolationKind kind;
    std::optional<std::size_t> event_index;
    std::string message;
};

const char* to_string(ViolationKind kind);

/// Lists every invariant violation of a record; never throws.
std::vector<Violation> validate_record(const VideoRecord& record);

/// Trims whitespace and trailing periods so captions can be embedded in sentences.
std::string normalize_caption(std::string_view caption);

std::string trim(std::string_view text);

// JSON schema of the dataset JSONL files.
void to_json(nlohmann::json& j, const Event& e);
void from_json(const nlohmann::json& j, Event& e);
void to_json(nlohmann::json& j, const VideoRecord& r);
void from_json(const nlohmann::json& j, VideoRecord& r);
void to_json(nlohmann::json& j, const FrameSpan& s);
void to_json(nlohmann::json& j, const Dialogue& d);
void from_json(const nlohmann::json& j, Dialogue& d);

}  // namespace momentkit
