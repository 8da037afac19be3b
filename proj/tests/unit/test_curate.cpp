// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "momentkit/curate.hpp"
#include "oracles.hpp"

using namespace momentkit;
using namespace momentkit::curate;

namespace {

Event ev(double s, double e) { return {s, e, "something happens"}; }

}  // namespace

TEST_CASE("coverage examples") {
    CHECK(coverage({}, 10.0) == 0.0);
    const std::vector<Event> full{ev(0, 10)};
    CHECK(coverage(full, 10.0) == doctest::Approx(1.0));
    const std::vector<Event> two{ev(0, 30), ev(20, 50)};
    CHECK(coverage(two, 100.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(coverage(two, 0.0), Error);
}

TEST_CASE("coverage is invariant under reordering and abutting splits") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Event> events;
        for (int i = 0; i < 6; ++i) {
            double a = u(rng), b = u(rng);
            if (a > b) std::swap(a, b);
            events.push_back(ev(a, b));
        }
        const double c = coverage(events, 100.0);
        REQUIRE(c == doctest::Approx(oracle::union_length(events) / 100.0).epsilon(1e-12));
        std::shuffle(events.begin(), events.end(), rng);
        REQUIRE(coverage(events, 100.0) == doctest::Approx(c).epsilon(1e-12));
        const Event first = events.front();
        const double mid = 0.5 * (first.start + first.end);
        events.erase(events.begin());
        events.push_back(ev(first.start, mid));
        events.push_back(ev(mid, first.end));
        REQUIRE(coverage(events, 100.0) == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("select_nonoverlapping examples") {
    const std::vector<Event> a{ev(0, 10), ev(5, 15), ev(12, 20)};
    const auto out = select_nonoverlapping(a);
    REQUIRE(out.size() == 2);
    CHECK(out[0].start == 0);
    CHECK(out[1].start == 12);

    const std::vector<Event> nested{ev(0, 20), ev(5, 10)};
    const auto n = select_nonoverlapping(nested);
    REQUIRE(n.size() == 1);
    CHECK(n[0].start == 5);

    const std::vector<Event> disjoint{ev(30, 40), ev(0, 10), ev(10, 20)};
    const auto d = select_nonoverlapping(disjoint);
    REQUIRE(d.size() == 3);
    CHECK(d[0].start == 0);
    CHECK(d[1].start == 10);
    CHECK(d[2].start == 30);
}

TEST_CASE("select_nonoverlapping reaches the exhaustive maximum") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> count(0, 12);
    std::uniform_real_distribution<double> u(0.0, 60.0);
    std::uniform_int_distribution<int> grid(0, 30);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<Event> events;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            // half the trials on a coarse grid to force shared endpoints
            double a = trial % 2 ? u(rng) : grid(rng), b = trial % 2 ? u(rng) : grid(rng);
            if (a > b) std::swap(a, b);
            events.push_back(ev(a, b));
        }
        const auto out = select_nonoverlapping(events);
        REQUIRE(out.size() == oracle::max_disjoint_subset(events));
        for (std::size_t i = 1; i < out.size(); ++i) REQUIRE(out[i - 1].end <= out[i].start);
    }
}

TEST_CASE("policy examples") {
    const auto iv = internvid_policy();
    CHECK_FALSE(evaluate_record({"v", 130.0, {ev(0, 60), ev(60, 120)}}, iv).accepted);
    const auto at8 = evaluate_record({"v", 100.0, {ev(0, 10), ev(20, 30), ev(40, 44)}}, iv);
    CHECK_FALSE(at8.accepted);
    CHECK(at8.failed_rules == std::vector<std::string>{kRuleMeanEventFraction});
    CHECK(evaluate_record({"v", 100.0, {ev(0, 25), ev(50, 70)}}, didemo_stage3_policy()).accepted);
    CHECK_FALSE(evaluate_record({"v", 100.0, {ev(0, 30), ev(30, 60), ev(60, 90)}}, anet_stage3_policy()).accepted);
    CHECK(evaluate_record({"v", 100.0, {ev(0, 30), ev(30, 60), ev(60, 91)}}, anet_stage3_policy()).accepted);
    CHECK(evaluate_record({"v", 100.0, {ev(0, 20), ev(50, 70)}}, didemo_stage3_policy()).accepted);
}

TEST_CASE("short events are dropped before counting and averaging") {
    const auto d = evaluate_record({"v", 30.0, {ev(0, 3), ev(5, 8), ev(10, 25)}}, internvid_policy());
    CHECK(d.short_events_dropped == 2);
    CHECK_FALSE(d.accepted);
    CHECK(d.filtered.events.size() == 1);
}

TEST_CASE("malformed records are counted and skipped") {
    const std::vector<VideoRecord> in{{"ok", 60.0, {ev(0, 30), ev(30, 60)}},
                                      {"bad", 60.0, {ev(10, 5)}},
                                      {"", 10.0, {}}};
    const auto res = apply_policy(in, didemo_stage3_policy());
    CHECK(res.report.input == 3);
    CHECK(res.report.accepted == 1);
    CHECK(res.report.rejected == 2);
    CHECK(res.report.rule_rejections.at(kRuleMalformed) == 2);
    CHECK(res.report.accepted + res.report.rejected == res.report.input);
}

TEST_CASE("policy checks reject bad thresholds") {
    CurationPolicy p;
    p.min_coverage_fraction = 1.5;
    CHECK_THROWS_AS(p.check(), Error);
    CHECK_THROWS_AS(policy_by_name("nope"), Error);
    CHECK(policy_names().size() == 3);
}

TEST_CASE("accepted records satisfy the predicates and filtering is idempotent") {
    std::mt19937_64 rng(9);
    testcorpus::RecordShape shape;
    shape.disjoint = false;
    shape.max_events = 8;
    std::vector<VideoRecord> records;
    for (int i = 0; i < 400; ++i) records.push_back(testcorpus::record(rng, "r" + std::to_string(i), shape));
    for (const auto& name : policy_names()) {
        const auto policy = policy_by_name(name);
        const auto first = apply_policy(records, policy);
        for (const auto& r : first.accepted) {
            // independent recheck of each enabled predicate on the emitted record
            if (policy.max_duration) REQUIRE(r.duration <= *policy.max_duration + 1e-9);
            REQUIRE(static_cast<int>(r.events.size()) >= policy.min_event_count);
            for (std::size_t i = 1; i < r.events.size(); ++i) REQUIRE(r.events[i - 1].end <= r.events[i].start);
            if (policy.min_event_length) {
                for (const auto& e : r.events) REQUIRE(e.end - e.start > *policy.min_event_length);
            }
            if (policy.min_coverage_fraction) {
                REQUIRE(oracle::union_length(r.events) / r.duration >= *policy.min_coverage_fraction - 1e-9);
            }
        }
        const auto second = apply_policy(first.accepted, policy);
        REQUIRE(second.accepted.size() == first.accepted.size());
        for (std::size_t i = 0; i < second.accepted.size(); ++i) {
            REQUIRE(second.accepted[i].video_id == first.accepted[i].video_id);
            REQUIRE(second.accepted[i].events.size() == first.accepted[i].events.size());
        }
    }
}

TEST_CASE("report merges associatively and serializes") {
    std::vector<VideoRecord> a{{"x", 100.0, {ev(0, 50), ev(50, 95)}}}, b{{"y", 200.0, {ev(0, 10)}}};
    auto ra = apply_policy(a, internvid_policy()).report;
    const auto rb = apply_policy(b, internvid_policy()).report;
    ra += rb;
    CHECK(ra.input == 2);
    CHECK(ra.accepted == 1);
    const auto j = ra.to_json();
    CHECK(j["input"] == 2);
    CHECK(j.contains("threshold_semantics"));
    CHECK(ra.to_table().find("accepted") != std::string::npos);
}

TEST_CASE("shipped curation corpus labels") {
    const auto rows = testcorpus::read_jsonl(testcorpus::data_path("curation_corpus.jsonl"));
    REQUIRE(rows.size() == 500);
    for (const auto& name : policy_names()) {
        std::size_t errors = 0;
        for (const auto& row : rows) {
            const bool got = evaluate_record(row.get<VideoRecord>(), policy_by_name(name)).accepted;
            if (got != row["labels"][name].get<bool>()) ++errors;
        }
        CHECK_MESSAGE(errors == 0, name);
    }
}
