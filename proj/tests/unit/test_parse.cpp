// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "corpus.hpp"
#include "momentkit/parse.hpp"

using namespace momentkit;
using namespace momentkit::parse;

TEST_CASE("grounding cascade") {
    auto g = parse_grounding_response("From 05 to 37.");
    REQUIRE(g.span);
    CHECK(*g.span == FrameSpan{5, 37});
    CHECK(g.rule == kRuleStrict);

    g = parse_grounding_response("It happens from frame 5 to frame 37.");
    CHECK(*g.span == FrameSpan{5, 37});
    CHECK(g.rule == kRuleLenient);

    g = parse_grounding_response("Frames 12-30");
    CHECK(*g.span == FrameSpan{12, 30});
    CHECK(g.rule == kRuleBarePair);

    g = parse_grounding_response("from 70 to 20");
    CHECK(*g.span == FrameSpan{20, 70});
    CHECK(g.swapped);

    g = parse_grounding_response("from 90 to 150");
    CHECK(*g.span == FrameSpan{90, 99});
    CHECK(g.clamped);

    g = parse_grounding_response("I am not sure.");
    CHECK_FALSE(g.span);
    CHECK(g.rule == kRuleNone);

    // decimals are not frame indices
    CHECK_FALSE(parse_grounding_response("about 2.5 to 3.5 seconds").span);
}

TEST_CASE("every rendered span parses with the strict rule") {
    for (int s = 0; s <= 99; ++s) {
        for (int e = s; e <= 99; ++e) {
            const FrameSpan span{s, e};
            for (const std::string& text : {span.render(), "From " + span.render().substr(5) + "."}) {
                const auto g = parse_grounding_response(text);
                REQUIRE(g.span == span);
                REQUIRE(g.rule == std::string(kRuleStrict));
            }
        }
    }
}

TEST_CASE("dense cascade rules") {
    auto d = parse_dense_response("A dog runs, from 00 to 40. It sleeps, from 41 to 99.");
    CHECK(d.rule == kRuleClauses);
    REQUIRE(d.items.size() == 2);
    CHECK(d.items[1] == ParsedItem{FrameSpan{41, 99}, std::string("It sleeps")});

    d = parse_dense_response(R"([{"event": "x y", "timestamps": "from 01 to 02"}])");
    CHECK(d.rule == kRuleJson);
    REQUIRE(d.items.size() == 1);

    d = parse_dense_response("{'event': 'x y', 'timestamps': 'from 01 to 02'}");
    CHECK(d.rule == kRuleJsonLike);

    d = parse_dense_response("1. from 01 to 02: x y\n2. from 03 to 09: z");
    CHECK(d.rule == kRuleEnumerated);
    CHECK(d.items.size() == 2);

    d = parse_dense_response("no timestamps at all");
    CHECK(d.items.empty());
    CHECK(d.rule == kRuleNone);
}

TEST_CASE("seconds responses") {
    const auto d = parse_seconds_response(
        "1. From 0 second to 10.6 seconds: a man runs.\n2. From 20 s to 200 s - he rests", 99.0);
    REQUIRE(d.items.size() == 2);
    CHECK(d.rule == kRuleSeconds);
    CHECK(d.items[0].span == FrameSpan{0, 11});
    CHECK(d.items[0].caption == std::optional<std::string>("a man runs"));
    CHECK(d.items[1].span == FrameSpan{20, 99});
    CHECK(d.clamped);
    CHECK_THROWS_AS(parse_seconds_response("x", 0.0), Error);
}

TEST_CASE("matched rule depends on the text alone") {
    const char* texts[] = {"From 01 to 05.", "x, from 01 to 05.", "[{\"event\":\"a\",\"timestamps\":\"from 1 to 2\"}]",
                           "nothing", "5-9"};
    for (const char* t : texts) {
        CHECK(parse_grounding_response(t).rule == parse_grounding_response(t).rule);
        CHECK(parse_dense_response(t).rule == parse_dense_response(t).rule);
    }
}

TEST_CASE("batch report and exclusion") {
    const std::vector<PredictionInput> in{{"a", "q", "From 01 to 05."}, {"b", "q", "dunno"}, {"c", "q", "7 to 3"}};
    const auto batch = parse_batch(in, Mode::grounding, nullptr);
    CHECK(batch.report.total == 3);
    CHECK(batch.report.parsed == 2);
    CHECK(batch.report.excluded == 1);
    CHECK(batch.report.swapped == 1);
    CHECK(batch.report.coverage() == doctest::Approx(2.0 / 3.0));
    CHECK(batch.report.rule_hits.at(kRuleStrict) == 1);
    CHECK(batch.predictions[1].status == ParseStatus::unparseable);
    const auto j = batch.predictions[0].to_json();
    CHECK(j["matched_rule"] == kRuleStrict);
    CHECK(j["items"][0]["end"] == 5);

    CHECK_THROWS_AS(parse_batch(in, Mode::seconds, nullptr), Error);
    const auto sec = parse_batch(in, Mode::seconds, [](const std::string&) { return std::optional<double>(10.0); });
    CHECK(sec.report.parsed == 0);
}

TEST_CASE("shipped messy outputs") {
    const auto rows = testcorpus::read_jsonl(testcorpus::data_path("messy_outputs.jsonl"));
    REQUIRE(rows.size() == 100);
    for (const auto& row : rows) {
        const std::string text = row["raw_text"];
        std::vector<ParsedItem> items;
        if (row["mode"] == "grounding") {
            const auto g = parse_grounding_response(text);
            if (g.span) items.push_back({*g.span, std::nullopt});
        } else {
            items = parse_dense_response(text).items;
        }
        INFO(text);
        REQUIRE(!items.empty() == row["expect_parsed"].get<bool>());
        if (!row.contains("expect")) continue;
        REQUIRE(items.size() == row["expect"].size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            CHECK(items[i].span.start_index == row["expect"][i]["start"].get<int>());
            CHECK(items[i].span.end_index == row["expect"][i]["end"].get<int>());
            if (row["expect"][i].contains("caption")) CHECK(*items[i].caption == row["expect"][i]["caption"].get<std::string>());
        }
    }
}
