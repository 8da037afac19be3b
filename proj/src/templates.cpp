// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/templates.hpp"

namespace momentkit::templates {

namespace {

std::string replace_all(std::string_view pattern, std::string_view hole, std::string_view value) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t hit = pattern.find(hole, pos);
        if (hit == std::string_view::npos) break;
        out.append(pattern.substr(pos, hit - pos));
        out.append(value);
        pos = hit + hole.size();
    }
    out.append(pattern.substr(pos));
    return out;
}

}  // namespace

std::string event_question(std::size_t index, const FrameSpan& span) {
    std::string q = replace_all(kEventQuestions.at(index), "{s}", format_frame_index(span.start_index));
    return replace_all(q, "{e}", format_frame_index(span.end_index));
}

std::string grounding_question(std::size_t index, std::string_view caption) {
    return replace_all(kGroundingQuestions.at(index), "{T}", normalize_caption(caption));
}

std::string dense_answer(const std::vector<SpanCaption>& events) {
    std::string out;
    for (const SpanCaption& ev : events) {
        if (!out.empty()) out += ' ';
        out += normalize_caption(ev.caption);
        out += ", ";
        out += ev.span.render();
        out += '.';
    }
    return out;
}

std::string event_answer(std::string_view caption) { return normalize_caption(caption) + "."; }

std::string grounding_answer(const FrameSpan& span) {
    return "From " + format_frame_index(span.start_index) + " to " + format_frame_index(span.end_index) + ".";
}

}  // namespace momentkit::templates
