// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/curate.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace momentkit::curate {

namespace {

constexpr double kTol = 1e-9;

bool exceeds(double value, double threshold) { return value > threshold + kTol; }
bool at_least(double value, double threshold) { return value >= threshold - kTol; }

void check_fraction(const std::optional<double>& v, const char* name) {
    if (v && !(*v >= 0.0 && *v <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, std::string(name) + " must lie in [0,1]");
    }
}

}  // namespace

void CurationPolicy::check() const {
    check_fraction(min_mean_event_fraction, "min_mean_event_fraction");
    check_fraction(min_coverage_fraction, "min_coverage_fraction");
    if (min_event_count < 0) throw Error(ErrorCode::invalid_argument, "min_event_count must be >= 0");
    if (max_duration && !(*max_duration > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "max_duration must be positive");
    }
    if (min_event_length && *min_event_length < 0.0) {
        throw Error(ErrorCode::invalid_argument, "min_event_length must be >= 0");
    }
}

CurationPolicy internvid_policy() {
    CurationPolicy p;
    p.name = "internvid";
    p.max_duration = 120.0;
    p.min_event_length = 3.0;
    p.min_mean_event_fraction = 0.08;
    p.min_event_count = 2;
    p.require_nonoverlap = true;
    return p;
}

CurationPolicy anet_stage3_policy() {
    CurationPolicy p;
    p.name = "anet_stage3";
    p.min_event_count = 3;
    p.min_coverage_fraction = 0.90;
    p.strict_coverage = true;
    p.require_nonoverlap = true;
    return p;
}

CurationPolicy didemo_stage3_policy() {
    CurationPolicy p;
    p.name = "didemo_stage3";
    p.min_event_count = 2;
    p.min_coverage_fraction = 0.40;
    p.strict_coverage = false;
    p.require_nonoverlap = true;
    return p;
}

CurationPolicy policy_by_name(std::string_view name) {
    if (name == "internvid") return internvid_policy();
    if (name == "anet_stage3") return anet_stage3_policy();
    if (name == "didemo_stage3") return didemo_stage3_policy();
    throw Error(ErrorCode::invalid_argument, "unknown policy '" + std::string(name) + "'");
}

std::vector<std::string> policy_names() { return {"internvid", "anet_stage3", "didemo_stage3"}; }

CurationReport& CurationReport::operator+=(const CurationReport& other) {
    input += other.input;
    accepted += other.accepted;
    rejected += other.rejected;
    for (const auto& [rule, n] : other.rule_rejections) rule_rejections[rule] += n;
    short_events_dropped += other.short_events_dropped;
    overlap_events_dropped += other.overlap_events_dropped;
    return *this;
}

nlohmann::json CurationReport::to_json() const {
    return nlohmann::json{
        {"policy", policy},
        {"input", input},
        {"accepted", accepted},
        {"rejected", rejected},
        {"rule_rejections", rule_rejections},
        {"short_events_dropped", short_events_dropped},
        {"overlap_events_dropped", overlap_events_dropped},
        {"threshold_semantics",
         "event length > min (strict); mean event fraction > min (strict); duration <= max; "
         "coverage > min when strict_coverage else >= min"},
    };
}

std::string CurationReport::to_table() const {
    std::ostringstream os;
    char line[128];
    os << "policy: " << policy << "\n";
    std::snprintf(line, sizeof(line), "%-24s %10zu\n", "input", input);
    os << line;
    std::snprintf(line, sizeof(line), "%-24s %10zu\n", "accepted", accepted);
    os << line;
    std::snprintf(line, sizeof(line), "%-24s %10zu\n", "rejected", rejected);
    os << line;
    for (const auto& [rule, n] : rule_rejections) {
        std::snprintf(line, sizeof(line), "  %-22s %10zu\n", rule.c_str(), n);
        os << line;
    }
    std::snprintf(line, sizeof(line), "%-24s %10zu\n", "short events dropped", short_events_dropped);
    os << line;
    std::snprintf(line, sizeof(line), "%-24s %10zu\n", "overlap events dropped", overlap_events_dropped);
    os << line;
    return os.str();
}

double coverage(std::span<const Event> events, double duration) {
    if (!(duration > 0.0)) throw Error(ErrorCode::invalid_record, "duration must be positive");
    std::vector<std::pair<double, double>> iv;
    iv.reserve(events.size());
    for (const Event& e : events) iv.emplace_back(e.start, e.end);
    std::sort(iv.begin(), iv.end());
    double covered = 0.0;
    double cur_start = 0.0;
    double cur_end = 0.0;
    bool open = false;
    for (const auto& [s, e] : iv) {
        if (!open) {
            cur_start = s;
            cur_end = e;
            open = true;
        } else if (s <= cur_end) {
            cur_end = std::max(cur_end, e);
        } else {
            covered += cur_end - cur_start;
            cur_start = s;
            cur_end = e;
        }
    }
    if (open) covered += cur_end - cur_start;
    return std::clamp(covered / duration, 0.0, 1.0);
}

std::vector<Event> select_nonoverlapping(std::span<const Event> events) {
    std::vector<std::size_t> order(events.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Earliest end first; among equal ends prefer the later start (shorter event),
    // but zero-length events go last so they cannot block a span ending there.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (events[a].end != events[b].end) return events[a].end < events[b].end;
        const bool pa = events[a].start == events[a].end, pb = events[b].start == events[b].end;
        if (pa != pb) return pb;
        return events[a].start > events[b].start;
    });
    std::vector<Event> out;
    bool any = false;
    double last_end = 0.0;
    for (std::size_t i : order) {
        if (!any || events[i].start >= last_end) {
            out.push_back(events[i]);
            last_end = events[i].end;
            any = true;
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Event& a, const Event& b) { return a.start < b.start; });
    return out;
}

RecordDecision evaluate_record(const VideoRecord& record, const CurationPolicy& policy) {
    RecordDecision d;
    if (!validate_record(record).empty()) {
        d.failed_rules.emplace_back(kRuleMalformed);
        return d;
    }
    d.filtered = record;
    std::vector<Event>& events = d.filtered.events;

    if (policy.min_event_length) {
        const double min_len = *policy.min_event_length;
        const auto before = events.size();
        std::erase_if(events, [&](const Event& e) { return !exceeds(e.end - e.start, min_len); });
        d.short_events_dropped = before - events.size();
    }
    if (policy.require_nonoverlap) {
        const auto before = events.size();
        events = select_nonoverlapping(events);
        d.overlap_events_dropped = before - events.size();
    } else {
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.start < b.start; });
    }

    if (policy.max_duration && exceeds(record.duration, *policy.max_duration)) {
        d.failed_rules.emplace_back(kRuleMaxDuration);
    }
    if (static_cast<long long>(events.size()) < policy.min_event_count) {
        d.failed_rules.emplace_back(kRuleMinEventCount);
    }
    if (policy.min_mean_event_fraction) {
        double mean_fraction = 0.0;
        if (!events.empty()) {
            double total = 0.0;
            for (const Event& e : events) total += e.end - e.start;
            mean_fraction = total / static_cast<double>(events.size()) / record.duration;
        }
        if (events.empty() || !exceeds(mean_fraction, *policy.min_mean_event_fraction)) {
            d.failed_rules.emplace_back(kRuleMeanEventFraction);
        }
    }
    if (policy.min_coverage_fraction) {
        const double c = coverage(events, record.duration);
        const bool ok = policy.strict_coverage ? exceeds(c, *policy.min_coverage_fraction)
                                               : at_least(c, *policy.min_coverage_fraction);
        if (!ok) d.failed_rules.emplace_back(kRuleCoverage);
    }
    d.accepted = d.failed_rules.empty();
    return d;
}

CurationResult apply_policy(std::span<const VideoRecord> records, const CurationPolicy& policy) {
    policy.check();
    CurationResult result;
    result.report.policy = policy.name;
    for (const VideoRecord& r : records) {
        RecordDecision d = evaluate_record(r, policy);
        CurationReport& rep = result.report;
        ++rep.input;
        rep.short_events_dropped += d.short_events_dropped;
        rep.overlap_events_dropped += d.overlap_events_dropped;
        for (const auto& rule : d.failed_rules) ++rep.rule_rejections[rule];
        if (d.accepted) {
            ++rep.accepted;
            result.accepted.push_back(std::move(d.filtered));
        } else {
            ++rep.rejected;
        }
    }
    return result;
}

}  // namespace momentkit::curate
