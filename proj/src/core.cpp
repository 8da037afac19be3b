// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace momentkit {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_record: return "invalid_record";
        case ErrorCode::out_of_range: return "out_of_range";
        case ErrorCode::empty_input: return "empty_input";
        case ErrorCode::format: return "format";
        case ErrorCode::service: return "service";
        case ErrorCode::synthesis_rejected: return "synthesis_rejected";
        case ErrorCode::empty_evaluation: return "empty_evaluation";
        case ErrorCode::join: return "join";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

FrameSpan FrameSpan::make(int start_index, int end_index) {
    if (start_index < 0 || end_index > kMaxFrameIndex || start_index > end_index) {
        throw Error(ErrorCode::out_of_range, "invalid frame span (" + std::to_string(start_index) +
                                                 ", " + std::to_string(end_index) + ")");
    }
    return FrameSpan{start_index, end_index};
}

std::string format_frame_index(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", index);
    return buf;
}

std::string FrameSpan::render() const {
    return "from " + format_frame_index(start_index) + " to " + format_frame_index(end_index);
}

const char* to_string(DialogueSource source) {
    switch (source) {
        case DialogueSource::template_single: return "template_single";
        case DialogueSource::template_multi: return "template_multi";
        case DialogueSource::llm_synth: return "llm_synth";
        case DialogueSource::external: return "external";
    }
    return "external";
}

DialogueSource dialogue_source_from_string(std::string_view text) {
    if (text == "template_single") return DialogueSource::template_single;
    if (text == "template_multi") return DialogueSource::template_multi;
    if (text == "llm_synth") return DialogueSource::llm_synth;
    if (text == "external") return DialogueSource::external;
    throw Error(ErrorCode::format, "unknown dialogue source '" + std::string(text) + "'");
}

int seconds_to_frame_index(double t, double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw Error(ErrorCode::invalid_record, "duration must be positive");
    }
    const double eps = 1e-6 * duration;
    if (!(t >= -eps && t <= duration + eps)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << duration << "]";
        throw Error(ErrorCode::out_of_range, os.str());
    }
    // std::round rounds half away from zero.
    const double scaled = std::round(t / duration * kMaxFrameIndex);
    return std::clamp(static_cast<int>(scaled), 0, kMaxFrameIndex);
}

double frame_index_to_seconds(int index, double duration) {
    if (index < 0 || index > kMaxFrameIndex) {
        throw Error(ErrorCode::out_of_range, "frame index " + std::to_string(index) + " outside 0..99");
    }
    if (!(duration > 0.0)) {
        throw Error(ErrorCode::invalid_record, "duration must be positive");
    }
    return static_cast<double>(index) / kMaxFrameIndex * duration;
}

FrameSpan event_to_frame_span(const Event& event, double duration) {
    const int s = seconds_to_frame_index(event.start, duration);
    const int e = seconds_to_frame_index(event.end, duration);
    return FrameSpan::make(s, e);
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::missing_id: return "missing_id";
        case ViolationKind::bad_duration: return "bad_duration";
        case ViolationKind::inverted_event: return "inverted_event";
        case ViolationKind::out_of_bounds: return "out_of_bounds";
        case ViolationKind::empty_caption: return "empty_caption";
    }
    return "unknown";
}

std::vector<Violation> validate_record(const VideoRecord& record) {
    std::vector<Violation> out;
    if (record.video_id.empty()) {
        out.push_back({ViolationKind::missing_id, std::nullopt, "video_id is empty"});
    }
    const bool duration_ok = record.duration > 0.0 && std::isfinite(record.duration);
    if (!duration_ok) {
        out.push_back({ViolationKind::bad_duration, std::nullopt, "duration must be positive and finite"});
    }
    for (std::size_t i = 0; i < record.events.size(); ++i) {
        const Event& ev = record.events[i];
        const std::string where = "event " + std::to_string(i);
        if (!(ev.end >= ev.start)) {
            out.push_back({ViolationKind::inverted_event, i, where + ": end precedes start"});
        }
        if (!(ev.start >= 0.0) || (duration_ok && !(ev.end <= record.duration))) {
            out.push_back({ViolationKind::out_of_bounds, i, where + ": outside [0, duration]"});
        }
        if (trim(ev.caption).empty()) {
            out.push_back({ViolationKind::empty_caption, i, where + ": empty caption"});
        }
    }
    return out;
}

std::string trim(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

std::string normalize_caption(std::string_view caption) {
    std::string out = trim(caption);
    while (!out.empty() && out.back() == '.') {
        out.pop_back();
        out = trim(out);
    }
    return out;
}

void to_json(nlohmann::json& j, const Event& e) {
    j = nlohmann::json{{"start", e.start}, {"end", e.end}, {"caption", e.caption}};
}

void from_json(const nlohmann::json& j, Event& e) {
    j.at("start").get_to(e.start);
    j.at("end").get_to(e.end);
    j.at("caption").get_to(e.caption);
}

void to_json(nlohmann::json& j, const VideoRecord& r) {
    j = nlohmann::json{{"video_id", r.video_id}, {"duration", r.duration}, {"events", r.events}};
}

void from_json(const nlohmann::json& j, VideoRecord& r) {
    j.at("video_id").get_to(r.video_id);
    j.at("duration").get_to(r.duration);
    r.events = j.at("events").get<std::vector<Event>>();
}

void to_json(nlohmann::json& j, const FrameSpan& s) {
    j = nlohmann::json::array({s.start_index, s.end_index});
}

void to_json(nlohmann::json& j, const Dialogue& d) {
    nlohmann::json turns = nlohmann::json::array();
    for (const Turn& t : d.turns) {
        turns.push_back({{"role", "user"}, {"text", t.user}});
        turns.push_back({{"role", "assistant"}, {"text", t.assistant}});
    }
    j = nlohmann::json{{"video_id", d.video_id},
                       {"source", to_string(d.source)},
                       {"seed", d.seed},
                       {"turns", std::move(turns)}};
}

void from_json(const nlohmann::json& j, Dialogue& d) {
    j.at("video_id").get_to(d.video_id);
    d.source = dialogue_source_from_string(j.at("source").get<std::string>());
    d.seed = j.value("seed", std::uint64_t{0});
    const auto& turns = j.at("turns");
    if (turns.empty() || turns.size() % 2 != 0) {
        throw Error(ErrorCode::format, "dialogue '" + d.video_id + "' must hold user/assistant pairs");
    }
    d.turns.clear();
    for (std::size_t i = 0; i < turns.size(); i += 2) {
        if (turns[i].at("role") != "user" || turns[i + 1].at("role") != "assistant") {
            throw Error(ErrorCode::format,
                        "dialogue '" + d.video_id + "' breaks user/assistant alternation at turn " +
                            std::to_string(i));
        }
        d.turns.push_back({turns[i].at("text").get<std::string>(),
                           turns[i + 1].at("text").get<std::string>()});
    }
}

}  // namespace momentkit
