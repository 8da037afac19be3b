// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"

namespace momentkit::parse {

// Cascade rule identifiers, in firing order per mode.
inline constexpr const char* kRuleStrict = "strict_from_to";
inline constexpr const char* kRuleLenient = "lenient_from_to";
inline constexpr const char* kRuleBarePair = "bare_pair";
inline constexpr const char* kRuleJson = "json";
inline constexpr const char* kRuleJsonLike = "json_like";
inline constexpr const char* kRuleClauses = "caption_clauses";
inline constexpr const char* kRuleEnumerated = "enumerated_list";
inline constexpr const char* kRuleSeconds = "seconds_spans";
inline constexpr const char* kRuleNone = "none";

enum class Mode { grounding, dense, seconds };

const char* to_string(Mode mode);
Mode mode_from_string(std::string_view text);

enum class ParseStatus { parsed, unparseable };

struct ParsedItem {
    FrameSpan span;
    std::optional<std::string> caption;

    friend bool operator==(const ParsedItem&, const ParsedItem&) = default;
};

struct ParsedPrediction {
    std::string video_id;
    std::string query_id;
    ParseStatus status = ParseStatus::unparseable;
    std::vector<ParsedItem> items;
    std::string raw_text;
    std::string matched_rule = kRuleNone;
    bool swapped = false;  // an inverted span was reordered
    bool clamped = false;  // a value was clamped into range

    nlohmann::json to_json() const;
};

struct GroundingParse {
    std::optional<FrameSpan> span;
    std::string rule = kRuleNone;
    bool swapped = false;
    bool clamped = false;
};

/// Cascade: strict "from DD to DD", then lenient "from .. N .. to .. M" allowing
/// a few interleaved words, then a bare "N to M" / "N - M" pair. First match wins.
GroundingParse parse_grounding_response(std::string_view text);

struct DenseParse {
    std::vector<ParsedItem> items;
    std::string rule = kRuleNone;
    bool swapped = false;
    bool clamped = false;
};

/// Cascade: JSON objects with `event`/`timestamps` keys, then "caption, from DD to DD."
/// clauses, then "K. From x to y: caption" lists. Duplicates are dropped.
DenseParse parse_dense_response(std::string_view text);

/// Second-valued spans ("from X second(s) to Y second(s)") mapped into frame indices.
DenseParse parse_seconds_response(std::string_view text, double duration);

struct PredictionInput {
    std::string video_id;
    std::string query_id;
    std::string raw_text;
};

void from_json(const nlohmann::json& j, PredictionInput& p);
void to_json(nlohmann::json& j, const PredictionInput& p);

struct ParseBatchReport {
    std::size_t total = 0;
    std::size_t parsed = 0;
    std::size_t excluded = 0;
    std::map<std::string, std::size_t> rule_hits;
    std::size_t swapped = 0;
    std::size_t clamped = 0;

    double coverage() const { return total == 0 ? 0.0 : static_cast<double>(parsed) / total; }
    bool empty() const { return parsed == 0; }

    ParseBatchReport& operator+=(const ParseBatchReport& other);
    nlohmann::json to_json() const;
};

struct ParseBatch {
    std::vector<ParsedPrediction> predictions;
    ParseBatchReport report;
};

using DurationLookup = std::function<std::optional<double>(const std::string& video_id)>;

/// Seconds mode needs `durations`; an item whose duration is unknown is excluded.
ParseBatch parse_batch(std::span<const PredictionInput> inputs, Mode mode,
                       const DurationLookup& durations = {});

}  // namespace momentkit::parse
