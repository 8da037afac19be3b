// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/dialoguegen.hpp"

#include <algorithm>
#include <cctype>

#include "momentkit/templates.hpp"

namespace momentkit::dialoguegen {

namespace tpl = momentkit::templates;

namespace {

void sort_temporal(std::vector<SpanCaption>& events) {
    std::stable_sort(events.begin(), events.end(), [](const SpanCaption& a, const SpanCaption& b) {
        return a.span < b.span;
    });
}

}  // namespace

std::vector<SpanCaption> to_span_captions(const VideoRecord& record) {
    std::vector<SpanCaption> out;
    out.reserve(record.events.size());
    for (const Event& e : record.events) {
        out.push_back({event_to_frame_span(e, record.duration), normalize_caption(e.caption)});
    }
    sort_temporal(out);
    return out;
}

Dialogue build_single_turn(std::span<const SpanCaption> events, Rng& rng) {
    if (events.empty()) throw Error(ErrorCode::empty_input, "single-turn QA needs at least one event");
    std::vector<SpanCaption> ordered(events.begin(), events.end());
    sort_temporal(ordered);
    Dialogue d;
    d.source = DialogueSource::template_single;
    const std::size_t q = uniform_index(rng, tpl::kTemplatesPerTask);
    d.turns.push_back({std::string(tpl::kDenseQuestions[q]), tpl::dense_answer(ordered)});
    return d;
}

Dialogue build_multi_turn(std::span<const SpanCaption> events, Rng& rng) {
    if (events.empty()) throw Error(ErrorCode::empty_input, "multi-turn QA needs at least one event");
    std::vector<SpanCaption> order(events.begin(), events.end());
    shuffle(order, rng);
    Dialogue d;
    d.source = DialogueSource::template_multi;
    for (const SpanCaption& ev : order) {
        const bool grounding = bernoulli(rng, 0.5);
        const std::size_t q = uniform_index(rng, tpl::kTemplatesPerTask);
        if (grounding) {
            d.turns.push_back({tpl::grounding_question(q, ev.caption), tpl::grounding_answer(ev.span)});
        } else {
            d.turns.push_back({tpl::event_question(q, ev.span), tpl::event_answer(ev.caption)});
        }
    }
    return d;
}

Stage2Corpus generate_stage2_corpus(std::span<const VideoRecord> records,
                                    double single_turn_fraction, std::uint64_t seed) {
    if (!(single_turn_fraction >= 0.0 && single_turn_fraction <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "single-turn fraction must lie in [0,1]");
    }
    Stage2Corpus corpus;
    corpus.dialogues.reserve(records.size());
    for (const VideoRecord& record : records) {
        try {
            const std::vector<SpanCaption> events = to_span_captions(record);
            const std::uint64_t record_seed = derive_seed(seed, record.video_id);
            Rng rng(record_seed);
            Dialogue d = bernoulli(rng, single_turn_fraction) ? build_single_turn(events, rng)
                                                               : build_multi_turn(events, rng);
            d.video_id = record.video_id;
            d.seed = record_seed;
            corpus.dialogues.push_back(std::move(d));
        } catch (const Error& e) {
            corpus.failures.push_back({record.video_id, e.what()});
        }
    }
    return corpus;
}

std::string build_stage3_prompt(std::span<const Event> events) {
    if (events.empty()) throw Error(ErrorCode::empty_input, "synthesis prompt needs at least one event");
    std::vector<Event> ordered(events.begin(), events.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const Event& a, const Event& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.end < b.end;
    });
    std::string out;
    out += tpl::kStage3Instructions;
    out += "\nHere's an illustrative example:\n=== example start ===\n";
    out += tpl::kStage3ExampleEvents;
    out += "\nDialogue:\n";
    out += tpl::kStage3ExampleDialogue;
    out += "=== example end ===\n\nEvents:\n";
    for (std::size_t k = 0; k < ordered.size(); ++k) {
        const std::string n = std::to_string(k + 1);
        out += "from <s" + n + "> to <e" + n + ">: " + normalize_caption(ordered[k].caption) + ".\n";
    }
    out += "\nDialogue:";
    return out;
}

std::vector<CharSpan> WhitespaceTokenizer::tokenize(std::string_view text) const {
    static constexpr std::string_view kSpecial[] = {tpl::kVideoToken, tpl::kTurnTerminator};
    std::vector<CharSpan> out;
    std::size_t i = 0;
    std::size_t word_begin = std::string_view::npos;
    auto flush = [&](std::size_t end) {
        if (word_begin != std::string_view::npos && end > word_begin) out.push_back({word_begin, end});
        word_begin = std::string_view::npos;
    };
    while (i < text.size()) {
        bool special = false;
        for (std::string_view s : kSpecial) {
            if (text.substr(i, s.size()) == s) {
                flush(i);
                out.push_back({i, i + s.size()});
                i += s.size();
                special = true;
                break;
            }
        }
        if (special) continue;
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            flush(i);
        } else if (word_begin == std::string_view::npos) {
            word_begin = i;
        }
        ++i;
    }
    flush(text.size());
    return out;
}

nlohmann::json TokenLayout::to_json() const {
    nlohmann::json mask_spans = nlohmann::json::array();
    nlohmann::json turn_rows = nlohmann::json::array();
    for (const TurnSegment& t : turns) {
        mask_spans.push_back({t.answer.begin, t.answer.end});
        turn_rows.push_back({{"question", {t.question.begin, t.question.end}},
                             {"answer", {t.answer.begin, t.answer.end}},
                             {"answer_tokens", {t.answer_token_begin, t.answer_token_end}}});
    }
    const std::size_t video_char = tokens.empty() ? 0 : tokens[video_slot].begin;
    nlohmann::json token_spans = nlohmann::json::array();
    for (const CharSpan& c : tokens) token_spans.push_back({c.begin, c.end});
    std::string mask_bits;
    mask_bits.reserve(loss_mask.size());
    for (bool b : loss_mask) mask_bits.push_back(b ? '1' : '0');
    return nlohmann::json{{"video_id", video_id},
                          {"text", text},
                          {"video_char_span", {video_char, video_char + tpl::kVideoToken.size()}},
                          {"loss_char_spans", std::move(mask_spans)},
                          {"turns", std::move(turn_rows)},
                          {"tokens", std::move(token_spans)},
                          {"video_slot", video_slot},
                          {"loss_mask", std::move(mask_bits)},
                          {"warnings", warnings}};
}

TokenLayout assemble_training_sequence(const Dialogue& dialogue, const Tokenizer& tokenizer) {
    if (dialogue.turns.empty()) {
        throw Error(ErrorCode::format, "dialogue '" + dialogue.video_id + "' has no turns");
    }
    TokenLayout layout;
    layout.video_id = dialogue.video_id;
    std::string& text = layout.text;
    text += tpl::kSystemPrompt;
    text += ' ';
    std::size_t video_char = std::string::npos;
    for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
        const Turn& turn = dialogue.turns[i];
        if (turn.user.find(tpl::kVideoToken) != std::string::npos ||
            turn.assistant.find(tpl::kVideoToken) != std::string::npos) {
            throw Error(ErrorCode::format, "turn " + std::to_string(i) + " contains a literal video token");
        }
        text += "USER: ";
        if (i == 0) {
            video_char = text.size() + tpl::kVideoPreamble.find(tpl::kVideoToken);
            text += tpl::kVideoPreamble;
        }
        TurnSegment seg;
        seg.question.begin = text.size();
        text += turn.user;
        seg.question.end = text.size();
        text += " ASSISTANT: ";
        seg.answer.begin = text.size();
        text += turn.assistant;
        text += tpl::kTurnTerminator;
        seg.answer.end = text.size();
        if (trim(turn.assistant).empty()) {
            layout.warnings.push_back("turn " + std::to_string(i) + ": empty assistant answer");
        }
        layout.turns.push_back(seg);
    }

    layout.tokens = tokenizer.tokenize(text);
    layout.loss_mask.assign(layout.tokens.size(), false);
    bool video_found = false;
    std::size_t turn_idx = 0;
    for (std::size_t t = 0; t < layout.tokens.size(); ++t) {
        const CharSpan tok = layout.tokens[t];
        if (tok.begin == video_char) {
            if (tok.end != video_char + tpl::kVideoToken.size()) {
                throw Error(ErrorCode::format, "tokenizer split the video token");
            }
            layout.video_slot = t;
            video_found = true;
        }
        while (turn_idx < layout.turns.size() && tok.begin >= layout.turns[turn_idx].answer.end) {
            ++turn_idx;
        }
        if (turn_idx == layout.turns.size()) continue;
        TurnSegment& seg = layout.turns[turn_idx];
        const bool inside = tok.begin >= seg.answer.begin && tok.end <= seg.answer.end;
        const bool straddles = !inside && tok.begin < seg.answer.end && tok.end > seg.answer.begin;
        if (straddles) {
            throw Error(ErrorCode::format, "token straddles the boundary of answer " + std::to_string(turn_idx));
        }
        if (inside) {
            if (seg.answer_token_end == 0) seg.answer_token_begin = t;
            seg.answer_token_end = t + 1;
            layout.loss_mask[t] = true;
        }
    }
    if (!video_found) throw Error(ErrorCode::format, "tokenizer did not emit the video token");
    return layout;
}

}  // namespace momentkit::dialoguegen
