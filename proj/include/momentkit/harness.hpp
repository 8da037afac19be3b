// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"
#include "momentkit/metrics.hpp"
#include "momentkit/parse.hpp"

namespace momentkit::harness {

enum class Task { grounding, dense };

/// Query sets: grounding averages the first three grounding templates; dense
/// uses the first dense template, the JSON-format query, or the seconds-based
/// baseline query.
enum class QueryPreset { qt_avg, qd1, json, seconds };

const char* to_string(Task task);
Task task_from_string(std::string_view text);
const char* to_string(QueryPreset preset);
QueryPreset preset_from_string(std::string_view text);

struct Query {
    std::string video_id;
    std::string query_id;
    Task task = Task::grounding;
    QueryPreset preset = QueryPreset::qt_avg;
    std::string text;
    std::optional<std::size_t> event_index;  // grounding only
    int template_index = 0;
};

nlohmann::json to_json(const Query& q);

/// Throws invalid_argument when the preset does not belong to the task.
std::vector<Query> build_queries(std::span<const VideoRecord> records, Task task, QueryPreset preset);

struct ResponderKind {
    enum class Kind { oracle, degenerate_span, noisy, silent };
    Kind kind = Kind::oracle;
    int degenerate_start = 0;
    int degenerate_end = 95;
    double jitter_sigma = 0.0;      // frame units
    double caption_shuffle = 0.0;   // probability per event

    static ResponderKind oracle() { return {}; }
    static ResponderKind degenerate(int start = 0, int end = 95);
    static ResponderKind noisy(double sigma, double shuffle_probability);
    static ResponderKind silent() { return {Kind::silent}; }

    /// `oracle`, `degenerate`, `noisy[:sigma[:p]]` or `silent`.
    static ResponderKind parse(std::string_view text);
    void check() const;
};

/// Synthetic model-under-test. Oracle answers render the ground truth in the
/// template answer formats; `degenerate` always answers the same span.
std::vector<parse::PredictionInput> run_responder(const ResponderKind& kind,
                                                  std::span<const VideoRecord> records,
                                                  std::span<const Query> queries, std::uint64_t seed);

/// How per-template grounding runs combine into the headline numbers.
/// `best_of` keeps the run with the highest mIoU (lowest template on ties).
enum class GroundingProtocol { average, best_of };

const char* to_string(GroundingProtocol protocol);
GroundingProtocol protocol_from_string(std::string_view text);

struct GroundingRun {
    int template_index = 0;
    std::optional<metrics::GroundingResult> result;  // absent when fully excluded
    std::size_t total = 0;
    std::size_t excluded = 0;
};

struct EvalReport {
    Task task = Task::grounding;
    QueryPreset preset = QueryPreset::qt_avg;
    GroundingProtocol protocol = GroundingProtocol::average;
    parse::ParseBatchReport parse;
    // Grounding: corpus metrics per query template and their combination.
    std::vector<GroundingRun> grounding_runs;
    std::optional<metrics::GroundingResult> grounding;
    std::optional<metrics::DenseCaptionResult> dense;
    bool empty = false;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

/// Joins predictions to the ground-truth query set, parses and scores them.
/// Throws JoinError when either side holds keys the other lacks.
EvalReport evaluate(std::span<const VideoRecord> records, std::span<const parse::PredictionInput> predictions,
                    Task task, QueryPreset preset,
                    GroundingProtocol protocol = GroundingProtocol::average);

struct RunConfig {
    std::filesystem::path ground_truth;
    std::filesystem::path predictions;
    Task task = Task::grounding;
    QueryPreset preset = QueryPreset::qt_avg;
    GroundingProtocol protocol = GroundingProtocol::average;
};

EvalReport evaluate(const RunConfig& run);

/// Rebuilds the text table from a report JSON document.
std::string table_from_json(const nlohmann::json& report);

}  // namespace momentkit::harness
