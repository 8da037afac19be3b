// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"

namespace momentkit::curate {

/// Dataset selection rule set.
///
/// Threshold semantics:
///   - events are kept only when strictly longer than `min_event_length`;
///   - the mean surviving event length over the duration must strictly exceed
///     `min_mean_event_fraction`;
///   - coverage must reach `min_coverage_fraction`, strictly when
///     `strict_coverage` is set;
///   - `max_duration` is inclusive.
/// Comparisons treat values within 1e-9 of a threshold as equal to it.
struct CurationPolicy {
    std::string name = "custom";
    std::optional<double> max_duration;
    std::optional<double> min_event_length;
    std::optional<double> min_mean_event_fraction;
    int min_event_count = 0;
    std::optional<double> min_coverage_fraction;
    bool strict_coverage = false;
    bool require_nonoverlap = false;

    /// Throws invalid_argument when a fraction leaves [0,1] or a count is negative.
    void check() const;
};

/// Short-clip multi-event policy: <=120 s, events >3 s, mean >8%, >=2 disjoint events.
CurationPolicy internvid_policy();
/// >=3 disjoint events covering over 90% of the video.
CurationPolicy anet_stage3_policy();
/// >=2 disjoint events covering at least 40% of the video.
CurationPolicy didemo_stage3_policy();

/// Looks up `internvid`, `anet_stage3` or `didemo_stage3`.
CurationPolicy policy_by_name(std::string_view name);
std::vector<std::string> policy_names();

// Rule identifiers used in report tallies.
inline constexpr const char* kRuleMalformed = "malformed";
inline constexpr const char* kRuleMaxDuration = "max_duration";
inline constexpr const char* kRuleMinEventCount = "min_event_count";
inline constexpr const char* kRuleMeanEventFraction = "mean_event_fraction";
inline constexpr const char* kRuleCoverage = "coverage";

struct CurationReport {
    std::string policy;
    std::size_t input = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::map<std::string, std::size_t> rule_rejections;
    std::size_t short_events_dropped = 0;
    std::size_t overlap_events_dropped = 0;

    /// Associative merge of two partial reports.
    CurationReport& operator+=(const CurationReport& other);

    nlohmann::json to_json() const;
    std::string to_table() const;
};

struct RecordDecision {
    bool accepted = false;
    VideoRecord filtered;
    std::vector<std::string> failed_rules;
    std::size_t short_events_dropped = 0;
    std::size_t overlap_events_dropped = 0;
};

struct CurationResult {
    std::vector<VideoRecord> accepted;
    CurationReport report;
};

/// |union of event intervals| / duration.
double coverage(std::span<const Event> events, double duration);

/// Maximum-cardinality disjoint subset by earliest-end greedy, sorted by start.
/// Abutting events (shared endpoint) count as disjoint.
std::vector<Event> select_nonoverlapping(std::span<const Event> events);

/// Applies the per-record pipeline: drop short events, resolve overlaps, test rules.
RecordDecision evaluate_record(const VideoRecord& record, const CurationPolicy& policy);

CurationResult apply_policy(std::span<const VideoRecord> records, const CurationPolicy& policy);

}  // namespace momentkit::curate
