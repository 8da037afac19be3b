// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

// Recovers (span, caption) pairs from template dialogues by inverting the
// question templates and running the answer parsers.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momentkit/core.hpp"
#include "momentkit/parse.hpp"
#include "momentkit/templates.hpp"

namespace roundtrip {

struct Recovered {
    std::vector<momentkit::SpanCaption> events;
    bool ok = true;
    std::string problem;
    // template usage: task 0 dense, 1 event captioning, 2 grounding
    std::vector<std::pair<int, std::size_t>> templates_used;
};

/// Text between the fixed pieces of a template, or nullopt.
inline std::optional<std::vector<std::string>> match_template(std::string_view text, std::string_view tmpl) {
    std::vector<std::string_view> pieces;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = tmpl.find('{', pos);
        if (open == std::string_view::npos) break;
        const std::size_t close = tmpl.find('}', open);
        pieces.push_back(tmpl.substr(pos, open - pos));
        pos = close + 1;
    }
    pieces.push_back(tmpl.substr(pos));
    if (text.substr(0, pieces.front().size()) != pieces.front()) return std::nullopt;
    std::size_t cur = pieces.front().size();
    std::vector<std::string> holes;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const bool last = i + 1 == pieces.size();
        std::size_t at;
        if (last) {
            if (text.size() < cur + pieces[i].size()) return std::nullopt;
            at = text.size() - pieces[i].size();
            if (text.substr(at) != pieces[i]) return std::nullopt;
        } else {
            at = text.find(pieces[i], cur);
            if (at == std::string_view::npos) return std::nullopt;
        }
        holes.emplace_back(text.substr(cur, at - cur));
        cur = at + pieces[i].size();
    }
    return holes;
}

inline Recovered recover(const momentkit::Dialogue& d) {
    namespace tpl = momentkit::templates;
    namespace parse = momentkit::parse;
    Recovered out;
    auto fail = [&](std::string why) {
        out.ok = false;
        out.problem = std::move(why);
        return out;
    };
    for (const auto& turn : d.turns) {
        bool matched = false;
        for (std::size_t k = 0; k < tpl::kTemplatesPerTask && !matched; ++k) {
            if (turn.user == tpl::kDenseQuestions[k]) {
                const auto p = parse::parse_dense_response(turn.assistant);
                if (p.rule != std::string(parse::kRuleClauses)) return fail("dense answer rule " + p.rule);
                for (const auto& it : p.items) out.events.push_back({it.span, *it.caption});
                out.templates_used.emplace_back(0, k);
                matched = true;
            } else if (auto holes = match_template(turn.user, tpl::kEventQuestions[k])) {
                const auto span = parse::parse_grounding_response("from " + (*holes)[0] + " to " + (*holes)[1]);
                if (!span.span || (*holes)[0].size() != 2 || (*holes)[1].size() != 2) return fail("bad event question");
                out.events.push_back({*span.span, momentkit::normalize_caption(turn.assistant)});
                out.templates_used.emplace_back(1, k);
                matched = true;
            } else if (auto g = match_template(turn.user, tpl::kGroundingQuestions[k])) {
                const auto span = parse::parse_grounding_response(turn.assistant);
                if (!span.span || span.rule != std::string(parse::kRuleStrict)) return fail("grounding answer rule");
                out.events.push_back({*span.span, (*g)[0]});
                out.templates_used.emplace_back(2, k);
                matched = true;
            }
        }
        if (!matched) return fail("unrecognised question: " + turn.user);
    }
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const auto& a, const auto& b) { return a.span < b.span; });
    return out;
}

}  // namespace roundtrip
