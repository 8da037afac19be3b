// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"

namespace momentkit::metrics {

inline constexpr double kGroundingThresholds[] = {0.3, 0.5, 0.7};
inline constexpr double kCaptionThresholds[] = {0.3, 0.5, 0.7, 0.9};

/// Interval IoU over lengths (end - start). Zero-length spans score 1 only
/// against an identical point and 0 against anything else.
double iou(const FrameSpan& a, const FrameSpan& b);

struct GroundingResult {
    std::vector<std::pair<double, double>> recall;  // (threshold, R@threshold)
    double miou = 0.0;
    std::size_t sample_count = 0;  // included pairs
    std::size_t excluded_count = 0;

    double recall_at(double threshold) const;
    nlohmann::json to_json() const;
};

using GroundingPair = std::pair<std::optional<FrameSpan>, FrameSpan>;

/// Pairs without a prediction are excluded and counted. Throws EmptyEvaluation
/// when nothing remains.
GroundingResult grounding_metrics(std::span<const GroundingPair> pairs,
                                  std::span<const double> thresholds = kGroundingThresholds);

/// Lower-cased alphanumeric word tokens shared by the caption scorers.
std::vector<std::string> caption_tokens(std::string_view text);

/// Suffix-stripping stem used by the stem stage of METEOR-lite.
std::string stem(std::string_view word);

/// Corpus CIDEr in [0,10]: clipped TF-IDF n-gram cosine for n = 1..4, averaged
/// over n and references, times 10, then averaged over candidates. Document
/// frequencies are taken over `reference_sets`; idf(g) = ln((N + 1) / max(df(g), 1)).
double cider(std::span<const std::string> candidates,
             std::span<const std::vector<std::string>> reference_sets);

/// Per-candidate CIDEr scores with the same corpus statistics as `cider`.
std::vector<double> cider_scores(std::span<const std::string> candidates,
                                 std::span<const std::vector<std::string>> reference_sets);

struct MeteorAlignment {
    std::size_t matches = 0;
    std::size_t chunks = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (candidate pos, reference pos)
};

/// Exact stage then stem stage; each stage maximizes matches, then minimizes chunks.
MeteorAlignment meteor_align(std::span<const std::string> candidate, std::span<const std::string> reference);

/// F_mean = 10PR/(R+9P), penalty = 0.5 (chunks/matches)^3.
double meteor_lite(std::string_view candidate, std::string_view reference);

struct CaptionPairScores {
    double cider = 0.0;
    double meteor = 0.0;
    bool empty = false;  // no predictions
};

/// One video's predictions and ground-truth reference sets.
struct DenseVideo {
    std::vector<SpanCaption> predictions;
    std::vector<std::vector<SpanCaption>> ground_truth_sets;
};

/// At each threshold every prediction is paired with its best-IoU ground-truth
/// event (pooled over reference sets) when that IoU reaches the threshold;
/// unmatched predictions score 0. Scores are averaged over all predictions and
/// then over thresholds. CIDEr statistics are corpus-wide per threshold.
CaptionPairScores matched_pair_caption_metrics(std::span<const DenseVideo> videos,
                                               std::span<const double> thresholds = kCaptionThresholds);

CaptionPairScores matched_pair_caption_metrics(std::span<const SpanCaption> predictions,
                                               std::span<const SpanCaption> ground_truth,
                                               std::span<const double> thresholds = kCaptionThresholds);

struct Alignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // strictly increasing in both
    double total = 0.0;
};

/// Order-preserving maximum-weight matching over a row-major rows x cols matrix.
Alignment soda_alignment_dp(std::span<const double> scores, std::size_t rows, std::size_t cols);
Alignment soda_alignment_dp(const std::vector<std::vector<double>>& scores);

struct SodaResult {
    double score = 0.0;
    bool empty = false;
};

/// Pair score iou x meteor_lite(prediction caption, reference caption), rows are
/// ground-truth events. F-measure over set sizes, averaged over reference sets.
SodaResult soda_c(std::span<const SpanCaption> predictions,
                  std::span<const std::vector<SpanCaption>> ground_truth_sets);

struct DenseCaptionResult {
    double soda_c = 0.0;
    double cider = 0.0;
    double meteor = 0.0;
    std::vector<double> thresholds;
    std::size_t video_count = 0;
    std::size_t excluded_count = 0;

    nlohmann::json to_json() const;
};

/// Corpus dense-captioning metrics; SODA_c is averaged over videos.
DenseCaptionResult dense_caption_metrics(std::span<const DenseVideo> videos,
                                         std::span<const double> thresholds = kCaptionThresholds);

}  // namespace momentkit::metrics
