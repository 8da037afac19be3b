// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/parse.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace momentkit::parse {

namespace {

constexpr auto kFlags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;

const std::regex& strict_re() {
    static const std::regex re(R"(\bfrom\s+(\d{2})\s+to\s+(\d{2})(?!\d))", kFlags);
    return re;
}

const std::regex& lenient_re() {
    static const std::regex re(
        R"(\bfrom\s+(?:[a-z]+\s+){0,3}?(\d{1,3})(?:\s+[a-z]+){0,3}?\s+to\s+(?:[a-z]+\s+){0,3}?(\d{1,3})(?!\d|\.\d))",
        kFlags);
    return re;
}

const std::regex& bare_pair_re() {
    static const std::regex re(
        R"((?:^|[^\d.])(\d{1,3})\s*(?:to|-|\xE2\x80\x93|~)\s*(\d{1,3})(?!\d|\.\d))", kFlags);
    return re;
}

const std::regex& clause_re() {
    static const std::regex re(R"(,\s*from\s+(\d{1,3})\s+to\s+(\d{1,3})(?!\d)\s*\.?)", kFlags);
    return re;
}

const std::regex& enumerated_re() {
    static const std::regex re(
        R"(^\s*(?:\d+\s*[.)]\s*|[-*]\s*)?from\s+(\d{1,3})\s+to\s+(\d{1,3})(?!\d)\s*[:,\-]\s*(.+)$)", kFlags);
    return re;
}

const std::regex& json_like_re() {
    static const std::regex re(
        R"re(["']event["']\s*:\s*["']([\s\S]*?)["']\s*,\s*["']timestamps?["']\s*:\s*["']([^"']*)["'])re",
        kFlags);
    return re;
}

const std::regex& json_like_reversed_re() {
    static const std::regex re(
        R"re(["']timestamps?["']\s*:\s*["']([^"']*)["']\s*,\s*["']event["']\s*:\s*["']([\s\S]*?)["']\s*[,}])re",
        kFlags);
    return re;
}

const std::regex& seconds_re() {
    static const std::regex re(
        R"(\bfrom\s+(\d+(?:\.\d+)?)\s*(?:seconds?|secs?|s)?\s+to\s+(\d+(?:\.\d+)?)\s*(?:seconds?|secs?|s)\b)",
        kFlags);
    return re;
}

struct SpanFlags {
    bool swapped = false;
    bool clamped = false;
};

FrameSpan make_span(int s, int e, SpanFlags& flags) {
    if (s > kMaxFrameIndex) { s = kMaxFrameIndex; flags.clamped = true; }
    if (e > kMaxFrameIndex) { e = kMaxFrameIndex; flags.clamped = true; }
    if (s > e) { std::swap(s, e); flags.swapped = true; }
    return FrameSpan::make(s, e);
}

FrameSpan span_from_match(const std::smatch& m, std::size_t first, SpanFlags& flags) {
    return make_span(std::stoi(m[first].str()), std::stoi(m[first + 1].str()), flags);
}

void push_unique(std::vector<ParsedItem>& items, ParsedItem item) {
    if (std::find(items.begin(), items.end(), item) == items.end()) items.push_back(std::move(item));
}

/// Index one past the bracket matching text[open], or npos.
std::size_t match_bracket(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '[' || c == '{') ++depth;
        else if (c == ']' || c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

void collect_json_events(const nlohmann::json& j, DenseParse& out, SpanFlags& flags) {
    if (j.is_array()) {
        for (const auto& item : j) collect_json_events(item, out, flags);
        return;
    }
    if (!j.is_object()) return;
    auto ts = j.find("timestamps");
    if (ts == j.end()) ts = j.find("timestamp");
    const auto ev = j.find("event");
    if (ev != j.end() && ts != j.end() && ev->is_string() && ts->is_string()) {
        GroundingParse g = parse_grounding_response(ts->get<std::string>());
        if (!g.span) return;
        flags.swapped |= g.swapped;
        flags.clamped |= g.clamped;
        std::string caption = normalize_caption(ev->get<std::string>());
        if (caption.empty()) return;
        push_unique(out.items, {*g.span, std::move(caption)});
        return;
    }
    for (const auto& [key, value] : j.items()) {
        if (value.is_array() || value.is_object()) collect_json_events(value, out, flags);
    }
}

bool try_json(std::string_view text, DenseParse& out, SpanFlags& flags) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '[' && text[i] != '{') {
            ++i;
            continue;
        }
        const std::size_t end = match_bracket(text, i);
        if (end == std::string_view::npos) {
            ++i;
            continue;
        }
        const auto parsed = nlohmann::json::parse(text.substr(i, end - i), nullptr, false);
        if (parsed.is_discarded()) {
            ++i;
            continue;
        }
        collect_json_events(parsed, out, flags);
        i = end;
    }
    return !out.items.empty();
}

bool try_json_like(const std::string& text, DenseParse& out, SpanFlags& flags) {
    auto run = [&](const std::regex& re, std::size_t caption_group, std::size_t ts_group) {
        for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
            GroundingParse g = parse_grounding_response((*it)[ts_group].str());
            std::string caption = normalize_caption((*it)[caption_group].str());
            if (!g.span || caption.empty()) continue;
            flags.swapped |= g.swapped;
            flags.clamped |= g.clamped;
            push_unique(out.items, {*g.span, std::move(caption)});
        }
    };
    run(json_like_re(), 1, 2);
    if (out.items.empty()) run(json_like_reversed_re(), 2, 1);
    return !out.items.empty();
}

bool try_clauses(const std::string& text, DenseParse& out, SpanFlags& flags) {
    std::size_t cursor = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), clause_re()); it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        const std::size_t begin = static_cast<std::size_t>(m.position(0));
        std::string caption = normalize_caption(text.substr(cursor, begin - cursor));
        cursor = begin + static_cast<std::size_t>(m.length(0));
        if (caption.empty()) continue;
        push_unique(out.items, {span_from_match(m, 1, flags), std::move(caption)});
    }
    return !out.items.empty();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

bool try_enumerated(const std::string& text, DenseParse& out, SpanFlags& flags) {
    for (const std::string& line : split_lines(text)) {
        std::smatch m;
        if (!std::regex_search(line, m, enumerated_re())) continue;
        std::string caption = normalize_caption(m[3].str());
        if (caption.empty()) continue;
        push_unique(out.items, {span_from_match(m, 1, flags), std::move(caption)});
    }
    return !out.items.empty();
}

}  // namespace

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::grounding: return "grounding";
        case Mode::dense: return "dense";
        case Mode::seconds: return "seconds";
    }
    return "grounding";
}

Mode mode_from_string(std::string_view text) {
    if (text == "grounding") return Mode::grounding;
    if (text == "dense") return Mode::dense;
    if (text == "seconds") return Mode::seconds;
    throw Error(ErrorCode::invalid_argument, "unknown parse mode '" + std::string(text) + "'");
}

GroundingParse parse_grounding_response(std::string_view text_view) {
    const std::string text(text_view);
    GroundingParse out;
    SpanFlags flags;
    const std::pair<const std::regex*, const char*> cascade[] = {
        {&strict_re(), kRuleStrict}, {&lenient_re(), kRuleLenient}, {&bare_pair_re(), kRuleBarePair}};
    for (const auto& [re, rule] : cascade) {
        std::smatch m;
        if (std::regex_search(text, m, *re)) {
            out.span = span_from_match(m, 1, flags);
            out.rule = rule;
            out.swapped = flags.swapped;
            out.clamped = flags.clamped;
            return out;
        }
    }
    return out;
}

DenseParse parse_dense_response(std::string_view text_view) {
    const std::string text(text_view);
    DenseParse out;
    SpanFlags flags;
    if (try_json(text, out, flags)) {
        out.rule = kRuleJson;
        // A truncated array parses only up to the break; keep the quoted-pair
        // scan when it recovers more events.
        DenseParse loose;
        SpanFlags loose_flags;
        if (try_json_like(text, loose, loose_flags) && loose.items.size() > out.items.size()) {
            out.items = std::move(loose.items);
            out.rule = kRuleJsonLike;
            flags = loose_flags;
        }
    } else if (try_json_like(text, out, flags)) {
        out.rule = kRuleJsonLike;
    } else if (try_clauses(text, out, flags)) {
        out.rule = kRuleClauses;
    } else if (try_enumerated(text, out, flags)) {
        out.rule = kRuleEnumerated;
    }
    out.swapped = flags.swapped;
    out.clamped = flags.clamped;
    return out;
}

DenseParse parse_seconds_response(std::string_view text_view, double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw Error(ErrorCode::invalid_argument, "duration must be positive");
    }
    const std::string text(text_view);
    DenseParse out;
    SpanFlags flags;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), seconds_re()); it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        double a = std::stod(m[1].str());
        double b = std::stod(m[2].str());
        if (a > duration) { a = duration; flags.clamped = true; }
        if (b > duration) { b = duration; flags.clamped = true; }
        if (a > b) { std::swap(a, b); flags.swapped = true; }
        const FrameSpan span =
            FrameSpan::make(seconds_to_frame_index(a, duration), seconds_to_frame_index(b, duration));

        // Caption: the rest of the line after a ':' / ',' / '-' separator.
        std::optional<std::string> caption;
        const std::size_t after = static_cast<std::size_t>(m.position(0) + m.length(0));
        const std::size_t eol = std::min(text.find('\n', after), text.size());
        std::string rest = trim(std::string_view(text).substr(after, eol - after));
        if (!rest.empty() && (rest[0] == ':' || rest[0] == ',' || rest[0] == '-')) {
            std::string c = normalize_caption(rest.substr(1));
            if (!c.empty()) caption = std::move(c);
        }
        push_unique(out.items, {span, std::move(caption)});
    }
    if (!out.items.empty()) out.rule = kRuleSeconds;
    out.swapped = flags.swapped;
    out.clamped = flags.clamped;
    return out;
}

void from_json(const nlohmann::json& j, PredictionInput& p) {
    j.at("video_id").get_to(p.video_id);
    p.query_id = j.value("query_id", std::string{});
    j.at("raw_text").get_to(p.raw_text);
}

void to_json(nlohmann::json& j, const PredictionInput& p) {
    j = nlohmann::json{{"video_id", p.video_id}, {"query_id", p.query_id}, {"raw_text", p.raw_text}};
}

nlohmann::json ParsedPrediction::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const ParsedItem& it : items) {
        nlohmann::json row{{"start", it.span.start_index}, {"end", it.span.end_index}};
        row["caption"] = it.caption ? nlohmann::json(*it.caption) : nlohmann::json(nullptr);
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"video_id", video_id},
                          {"query_id", query_id},
                          {"status", status == ParseStatus::parsed ? "parsed" : "unparseable"},
                          {"items", std::move(rows)},
                          {"raw_text", raw_text},
                          {"matched_rule", matched_rule},
                          {"swapped", swapped},
                          {"clamped", clamped}};
}

ParseBatchReport& ParseBatchReport::operator+=(const ParseBatchReport& other) {
    total += other.total;
    parsed += other.parsed;
    excluded += other.excluded;
    for (const auto& [rule, n] : other.rule_hits) rule_hits[rule] += n;
    swapped += other.swapped;
    clamped += other.clamped;
    return *this;
}

nlohmann::json ParseBatchReport::to_json() const {
    return nlohmann::json{{"total", total},         {"parsed", parsed},     {"excluded", excluded},
                          {"coverage", coverage()}, {"rule_hits", rule_hits}, {"swapped", swapped},
                          {"clamped", clamped},     {"empty", empty()}};
}

ParseBatch parse_batch(std::span<const PredictionInput> inputs, Mode mode, const DurationLookup& durations) {
    if (mode == Mode::seconds && !durations) {
        throw Error(ErrorCode::invalid_argument, "seconds mode needs a duration lookup");
    }
    ParseBatch batch;
    batch.predictions.reserve(inputs.size());
    for (const PredictionInput& in : inputs) {
        ParsedPrediction p;
        p.video_id = in.video_id;
        p.query_id = in.query_id;
        p.raw_text = in.raw_text;
        switch (mode) {
            case Mode::grounding: {
                GroundingParse g = parse_grounding_response(in.raw_text);
                if (g.span) p.items.push_back({*g.span, std::nullopt});
                p.matched_rule = g.rule;
                p.swapped = g.swapped;
                p.clamped = g.clamped;
                break;
            }
            case Mode::dense: {
                DenseParse d = parse_dense_response(in.raw_text);
                p.items = std::move(d.items);
                p.matched_rule = d.rule;
                p.swapped = d.swapped;
                p.clamped = d.clamped;
                break;
            }
            case Mode::seconds: {
                const std::optional<double> duration = durations ? durations(in.video_id) : std::nullopt;
                if (duration && *duration > 0.0) {
                    DenseParse d = parse_seconds_response(in.raw_text, *duration);
                    p.items = std::move(d.items);
                    p.matched_rule = d.rule;
                    p.swapped = d.swapped;
                    p.clamped = d.clamped;
                }
                break;
            }
        }
        p.status = p.items.empty() ? ParseStatus::unparseable : ParseStatus::parsed;
        ParseBatchReport& r = batch.report;
        ++r.total;
        if (p.status == ParseStatus::parsed) {
            ++r.parsed;
            ++r.rule_hits[p.matched_rule];
            r.swapped += p.swapped ? 1 : 0;
            r.clamped += p.clamped ? 1 : 0;
        } else {
            ++r.excluded;
        }
        batch.predictions.push_back(std::move(p));
    }
    return batch;
}

}  // namespace momentkit::parse
