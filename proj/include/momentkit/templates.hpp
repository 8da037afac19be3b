// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "momentkit/core.hpp"

namespace momentkit::templates {

inline constexpr std::size_t kTemplatesPerTask = 10;

/// Dense captioning questions (single-turn QA).
inline constexpr std::array<std::string_view, kTemplatesPerTask> kDenseQuestions = {
    "Could you please detail the events that took place during different time segments in the video?",
    "I'm curious about what happened at different points in the video. Could you please describe the events?",
    "Could you provide a summary of the incidents that occurred at various timestamps in the video?",
    "I'd like to know what events transpired during specific time intervals in the video. Could you please elaborate?",
    "Can you give me a breakdown of the occurrences at different time stamps in the video?",
    "I'm interested in understanding the events that unfolded at different points in the video. Could you please specify?",
    "Could you outline the incidents that happened during different time periods in the video?",
    "I'm trying to grasp the sequence of events in the video. Could you please outline what happened at different times?",
    "Can you go through the video and describe what took place at different time intervals?",
    "I'd appreciate it if you could provide a detailed account of the events that occurred at different timestamps in the video.",
};

/// Event captioning questions; `{s}` and `{e}` are two-digit frame indices.
inline constexpr std::array<std::string_view, kTemplatesPerTask> kEventQuestions = {
    "Can you describe what occurred from {s} to {e} in the video?",
    "Could you tell me what happened from {s} to {e} in the video?",
    "What transpired from {s} to {e} in the video?",
    "Describe what took place from {s} to {e} in the video.",
    "Tell me about the events from {s} to {e} in the video.",
    "What was going on from {s} to {e} in the video?",
    "Please recount what occurred from {s} to {e} in the video.",
    "Explain what happened from {s} to {e} in the video.",
    "Provide details about the events from {s} to {e} in the video.",
    "Share what transpired from {s} to {e} in the video.",
};

/// Temporal grounding questions; `{T}` is the event caption.
inline constexpr std::array<std::string_view, kTemplatesPerTask> kGroundingQuestions = {
    "During which frames can we see {T} happening in the video?",
    "Between which frames is {T} visible in the video?",
    "At what point in the video can we observe {T} taking place?",
    "Between which two frames can we witness {T} occurring in the video?",
    "During which frames in the video can we observe {T} happening?",
    "At which time interval in the video can we see {T} occurring?",
    "Between which frames can we find {T} taking place in the video?",
    "At what point in the video can we witness {T} happening?",
    "Between which two frames in the video can we observe {T} taking place?",
    "During which frames does {T} occur in the video?",
};

/// Dense captioning query for instruction-tuned models (JSON answer format).
inline constexpr std::string_view kDenseJsonQuery =
    "Could you please describe the events in the video in detail? Be specific about the "
    "activities of individuals, their surroundings, and interactions with others. The output "
    "should be in JSON format, structured as follows: {'event': 'xx', 'timestamps': 'from xx to xx'}.";

/// Seconds-based dense query used for external baselines; `{D}` is the duration.
inline constexpr std::string_view kDenseSecondsQuery =
    "This video has a duration of {D} seconds. From which second to which second in the video, "
    "what event happens? Be specific about the activities of individuals, their surroundings, and "
    "interactions with others. List the events in the format: 1. From x1 second to y1 second: "
    "event1.\n 2. From x2 second to y2 second: event2.\n ...";

inline constexpr std::string_view kSystemPrompt =
    "A chat between a curious user and an artificial intelligence assistant. The assistant gives "
    "helpful, detailed, and polite answers to the user's questions.";

inline constexpr std::string_view kVideoPreamble = "This is a video with 100 frames: <video>\n";
inline constexpr std::string_view kVideoToken = "<video>";
inline constexpr std::string_view kTurnTerminator = "</s>";

/// Instruction block of the dialogue synthesis prompt.
inline constexpr std::string_view kStage3Instructions =
    "You are an AI visual assistant with the task of analyzing a single video.\n"
    "Craft a conversation between yourself and a user discussing the video's content. Develop "
    "responses that embody the persona of an active visual AI assistant, capable of observing the "
    "video and providing insightful answers. Include inquiries about temporal perception and "
    "reasoning, like events preceding or succeeding specific occurrences, or requesting timestamps "
    "for particular actions or events.\n"
    "Ensure that the questions can be definitively answered based on the observable video content "
    "or confidently ascertainable absence from the video. Utilize the timestamps <s?> and <t?> to "
    "create contextual questions considering the temporal relationships between events. The "
    "conversations should be concise.\n";

/// Event list of the worked example in the synthesis prompt.
inline constexpr std::string_view kStage3ExampleEvents =
    "Events:\n"
    "from <s1> to <e1>: A man and woman play rock paper scissors, the woman wins and smiles.\n"
    "from <s2> to <e2>: The woman puts a blindfold on.\n"
    "from <s3> to <e3>: The woman continues playing rock-paper-scissors with the man and wins again.\n"
    "from <s4> to <e4>: The woman gives the man a hug.\n";

/// Dialogue of the worked example. Note it writes `<t4>` for the fourth end placeholder.
inline constexpr std::string_view kStage3ExampleDialogue =
    "User: Could you provide a brief overview of the video's content?\n"
    "Assistant: Certainly! In the video, a man and a woman engage in a game of rock-paper-scissors. "
    "The woman emerges victorious and shares a smile. Subsequently, she places a blindfold on. She "
    "then proceeds to win another round of rock-paper-scissors against the man. The video concludes "
    "with the woman embracing the man warmly.\n"
    "User: Can you pinpoint when the woman achieved victory in the game twice?\n"
    "Assistant: Certainly. The first victory occurs from <s1> to <e1>, while the second triumph "
    "takes place from <s3> to <e3>.\n"
    "User: I'm curious about the interaction between <s4> and <t4>. Could you elaborate?\n"
    "Assistant: Absolutely. During the interval from <s4> to <t4>, the woman conveys her emotions "
    "through a heartfelt embrace, demonstrating her genuine affection for the man.\n"
    "User: What might be the underlying reason for the woman's affectionate hug?\n"
    "Assistant: The woman's affectionate hug likely stems from her desire to uplift the man's "
    "spirits after his loss in the rock-paper-scissors game.\n";

std::string event_question(std::size_t index, const FrameSpan& span);
std::string grounding_question(std::size_t index, std::string_view caption);

/// "T_1, from s_1 to e_1. T_2, from s_2 to e_2."
std::string dense_answer(const std::vector<SpanCaption>& events);
/// "T_i."
std::string event_answer(std::string_view caption);
/// "From s_i to e_i."
std::string grounding_answer(const FrameSpan& span);

}  // namespace momentkit::templates
