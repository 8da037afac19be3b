// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

// Random corpora for property tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"

#ifndef MOMENTKIT_TEST_DATA
#define MOMENTKIT_TEST_DATA "tests/data"
#endif

namespace testcorpus {

inline std::string data_path(const std::string& name) { return std::string(MOMENTKIT_TEST_DATA) + "/" + name; }

inline std::vector<nlohmann::json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    std::vector<nlohmann::json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
    }
    return rows;
}

inline const std::vector<std::string>& words() {
    static const std::vector<std::string> w = {
        "man",    "woman",  "dog",     "child",  "ball",   "kitchen", "street", "guitar", "bike",   "table",
        "door",   "car",    "river",   "opens",  "throws", "rides",   "plays",  "cleans", "paints", "carries",
        "walks",  "jumps",  "cooks",   "red",    "small",  "old",     "quickly", "slowly", "the",   "a",
        "around", "inside", "outside", "garden", "window", "camera",  "crowd",  "stage",  "ladder", "rope"};
    return w;
}

/// A caption of `min_len`..`max_len` words. Sentences of four or more tokens
/// are needed when a test expects CIDEr self-match to reach its maximum.
inline std::string caption(std::mt19937_64& rng, int min_len = 4, int max_len = 9) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, words().size() - 1);
    std::string out;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += words()[pick(rng)];
    }
    return out;
}

struct RecordShape {
    int min_events = 1;
    int max_events = 6;
    double min_duration = 10.0;
    double max_duration = 240.0;
    int caption_min = 4;
    int caption_max = 9;
    bool disjoint = true;  // events separated by at least two frame steps
};

/// One random record. Disjoint records keep every event at least two frame
/// steps long and apart, so distinct events never share a frame span.
inline momentkit::VideoRecord record(std::mt19937_64& rng, const std::string& id, const RecordShape& shape = {}) {
    std::uniform_real_distribution<double> dur(shape.min_duration, shape.max_duration);
    std::uniform_int_distribution<int> count(shape.min_events, shape.max_events);
    momentkit::VideoRecord r;
    r.video_id = id;
    r.duration = dur(rng);
    const int n = count(rng);
    if (shape.disjoint) {
        // choose 2n distinct cut points on the frame grid, then jitter inside their bins
        std::vector<int> grid(99);
        for (int i = 0; i < 99; ++i) grid[static_cast<std::size_t>(i)] = i;
        std::shuffle(grid.begin(), grid.end(), rng);
        std::vector<int> cuts(grid.begin(), grid.begin() + 2 * n);
        std::sort(cuts.begin(), cuts.end());
        std::uniform_real_distribution<double> jitter(-0.3, 0.3);
        auto to_sec = [&](int k) {
            const double t = (k + 0.5 + jitter(rng)) / 99.0 * r.duration;
            return std::clamp(t, 0.0, r.duration);
        };
        for (int i = 0; i < n; ++i) {
            int a = cuts[static_cast<std::size_t>(2 * i)];
            int b = cuts[static_cast<std::size_t>(2 * i + 1)];
            r.events.push_back({to_sec(a), to_sec(b), caption(rng, shape.caption_min, shape.caption_max)});
        }
        std::shuffle(r.events.begin(), r.events.end(), rng);
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            double a = u(rng) * r.duration, b = u(rng) * r.duration;
            if (a > b) std::swap(a, b);
            r.events.push_back({a, b, caption(rng, shape.caption_min, shape.caption_max)});
        }
    }
    return r;
}

inline std::vector<momentkit::VideoRecord> corpus(std::uint64_t seed, std::size_t n, const RecordShape& shape = {}) {
    std::mt19937_64 rng(seed);
    std::vector<momentkit::VideoRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(record(rng, "vid" + std::to_string(i), shape));
    return out;
}

}  // namespace testcorpus
