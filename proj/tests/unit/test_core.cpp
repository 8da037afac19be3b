// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "momentkit/core.hpp"
#include "momentkit/parse.hpp"
#include "oracles.hpp"

using namespace momentkit;

TEST_CASE("frame index endpoints and rounding") {
    CHECK(seconds_to_frame_index(0.0, 50.0) == 0);
    CHECK(seconds_to_frame_index(50.0, 50.0) == 99);
    CHECK(seconds_to_frame_index(0.4999, 99.0) == 0);
    CHECK(frame_index_to_seconds(0, 30.0) == 0.0);
    CHECK(frame_index_to_seconds(99, 30.0) == doctest::Approx(30.0));
    // slightly past the end is tolerated and clamped
    CHECK(seconds_to_frame_index(50.0 + 1e-7, 50.0) == 99);
}

TEST_CASE("frame index errors") {
    CHECK_THROWS_AS(seconds_to_frame_index(1.0, 0.0), Error);
    CHECK_THROWS_AS(seconds_to_frame_index(-1.0, 10.0), Error);
    CHECK_THROWS_AS(seconds_to_frame_index(10.1, 10.0), Error);
    CHECK_THROWS_AS(frame_index_to_seconds(100, 10.0), Error);
    CHECK_THROWS_AS(frame_index_to_seconds(-1, 10.0), Error);
    try {
        seconds_to_frame_index(2.0, -3.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_record);
    }
}

TEST_CASE("forward map agrees with nearest-sample search") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dur(0.5, 3600.0), u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double d = dur(rng);
        const double t = u(rng) * d;
        REQUIRE(seconds_to_frame_index(t, d) == oracle::nearest_sample(t, d));
    }
}

TEST_CASE("forward map is monotone and round trip is within half a step") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dur(0.1, 10000.0), u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double d = dur(rng);
        double a = u(rng) * d, b = u(rng) * d;
        if (a > b) std::swap(a, b);
        REQUIRE(seconds_to_frame_index(a, d) <= seconds_to_frame_index(b, d));
        const double back = frame_index_to_seconds(seconds_to_frame_index(a, d), d);
        REQUIRE(std::abs(back - a) <= d / 99.0 / 2.0 + 1e-9);
    }
}

TEST_CASE("FrameSpan rendering re-parses to itself") {
    for (int s = 0; s <= 99; ++s) {
        for (int e = s; e <= 99; ++e) {
            const FrameSpan span = FrameSpan::make(s, e);
            const std::string text = span.render();
            REQUIRE(text.size() == std::string("from 00 to 00").size());
            const auto parsed = parse::parse_grounding_response(text);
            REQUIRE(parsed.span.has_value());
            REQUIRE(*parsed.span == span);
        }
    }
    CHECK(FrameSpan::make(3, 7).render() == "from 03 to 07");
    CHECK_THROWS_AS(FrameSpan::make(5, 4), Error);
    CHECK_THROWS_AS(FrameSpan::make(0, 100), Error);
    CHECK(FrameSpan::make(4, 4).is_point());
}

TEST_CASE("event to frame span example") {
    // 60 s video, event 12 s .. 30 s
    const FrameSpan s = event_to_frame_span({12.0, 30.0, "x"}, 60.0);
    CHECK(s.start_index == 20);   // 19.8 rounds to 20
    CHECK(s.end_index == 50);     // 49.5 rounds half up
}

TEST_CASE("record validation lists every violation") {
    VideoRecord r{"", -1.0, {{5.0, 2.0, " "}, {-1.0, 3.0, "ok"}}};
    const auto v = validate_record(r);
    std::vector<ViolationKind> kinds;
    for (const auto& x : v) kinds.push_back(x.kind);
    CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::missing_id) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::bad_duration) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::inverted_event) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::empty_caption) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::out_of_bounds) == 1);
    CHECK(validate_record({"v", 10.0, {{0.0, 10.0, "fine"}}}).empty());
}

TEST_CASE("caption normalization") {
    CHECK(normalize_caption("  A man runs.. ") == "A man runs");
    CHECK(normalize_caption("...") == "");
    CHECK(normalize_caption("e.g. text") == "e.g. text");
}

TEST_CASE("record and dialogue JSON round trip") {
    const VideoRecord r{"abc", 12.5, {{0.0, 3.5, "one"}, {4.0, 12.5, "two"}}};
    const nlohmann::json j = r;
    const auto back = j.get<VideoRecord>();
    CHECK(back.video_id == "abc");
    CHECK(back.events.size() == 2);
    CHECK(back.events[1].caption == "two");

    Dialogue d{"abc", DialogueSource::template_multi, 42, {{"q1", "a1"}, {"q2", "a2"}}};
    const nlohmann::json dj = d;
    CHECK(dj["turns"].size() == 4);
    CHECK(dj["turns"][0]["role"] == "user");
    CHECK(dj.get<Dialogue>() == d);

    nlohmann::json bad = dj;
    bad["turns"][1]["role"] = "user";
    CHECK_THROWS_AS(bad.get<Dialogue>(), Error);
}
