// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "momentkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "momentkit/dialoguegen.hpp"
#include "momentkit/jsonl.hpp"
#include "momentkit/random.hpp"
#include "momentkit/templates.hpp"

namespace momentkit::harness {

namespace tpl = momentkit::templates;

const char* to_string(Task task) { return task == Task::grounding ? "grounding" : "dense"; }

Task task_from_string(std::string_view text) {
    if (text == "grounding") return Task::grounding;
    if (text == "dense") return Task::dense;
    throw Error(ErrorCode::invalid_argument, "unknown task '" + std::string(text) + "'");
}

const char* to_string(QueryPreset preset) {
    switch (preset) {
        case QueryPreset::qt_avg: return "qt-avg";
        case QueryPreset::qd1: return "qd1";
        case QueryPreset::json: return "json";
        case QueryPreset::seconds: return "seconds";
    }
    return "qt-avg";
}

QueryPreset preset_from_string(std::string_view text) {
    if (text == "qt-avg") return QueryPreset::qt_avg;
    if (text == "qd1") return QueryPreset::qd1;
    if (text == "json") return QueryPreset::json;
    if (text == "seconds") return QueryPreset::seconds;
    throw Error(ErrorCode::invalid_argument, "unknown query preset '" + std::string(text) + "'");
}

const char* to_string(GroundingProtocol protocol) {
    return protocol == GroundingProtocol::best_of ? "best-of" : "average";
}

GroundingProtocol protocol_from_string(std::string_view text) {
    if (text == "average") return GroundingProtocol::average;
    if (text == "best-of") return GroundingProtocol::best_of;
    throw Error(ErrorCode::invalid_argument, "unknown grounding protocol '" + std::string(text) + "'");
}

nlohmann::json to_json(const Query& q) {
    nlohmann::json j{{"video_id", q.video_id},
                     {"query_id", q.query_id},
                     {"task", to_string(q.task)},
                     {"preset", to_string(q.preset)},
                     {"query", q.text}};
    if (q.event_index) j["event_index"] = *q.event_index;
    return j;
}

namespace {

constexpr int kGroundingTemplatesAveraged = 3;

void check_preset(Task task, QueryPreset preset) {
    const bool ok = task == Task::grounding ? preset == QueryPreset::qt_avg : preset != QueryPreset::qt_avg;
    if (!ok) {
        throw Error(ErrorCode::invalid_argument, std::string("query preset '") + to_string(preset) +
                                                     "' does not apply to task '" + to_string(task) + "'");
    }
}

std::string format_seconds(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string dense_seconds_query(double duration) {
    std::string q(tpl::kDenseSecondsQuery);
    const auto pos = q.find("{D}");
    return q.replace(pos, 3, format_seconds(duration));
}

std::string key_of(std::string_view video_id, std::string_view query_id) {
    std::string k(video_id);
    k += '\x1f';
    k += query_id;
    return k;
}

std::string render_json_answer(const std::vector<SpanCaption>& events) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SpanCaption& e : events) {
        arr.push_back({{"event", e.caption}, {"timestamps", e.span.render()}});
    }
    return arr.dump();
}

std::string render_seconds_answer(const std::vector<SpanCaption>& events, double duration) {
    std::string out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double s = frame_index_to_seconds(events[i].span.start_index, duration);
        const double e = frame_index_to_seconds(events[i].span.end_index, duration);
        out += std::to_string(i + 1) + ". From " + format_seconds(s) + " second to " + format_seconds(e) +
               " second: " + events[i].caption + ".\n";
    }
    return out;
}

FrameSpan jitter(const FrameSpan& span, double sigma, Rng& rng) {
    auto move = [&](int v) {
        const int shifted = v + static_cast<int>(std::lround(sigma * standard_normal(rng)));
        return std::clamp(shifted, 0, kMaxFrameIndex);
    };
    int s = move(span.start_index);
    int e = move(span.end_index);
    if (s > e) std::swap(s, e);
    return FrameSpan{s, e};
}

}  // namespace

std::vector<Query> build_queries(std::span<const VideoRecord> records, Task task, QueryPreset preset) {
    check_preset(task, preset);
    std::vector<Query> out;
    for (const VideoRecord& r : records) {
        if (task == Task::grounding) {
            for (std::size_t i = 0; i < r.events.size(); ++i) {
                for (int k = 0; k < kGroundingTemplatesAveraged; ++k) {
                    Query q;
                    q.video_id = r.video_id;
                    q.query_id = "e" + std::to_string(i) + ":qt" + std::to_string(k + 1);
                    q.task = task;
                    q.preset = preset;
                    q.text = tpl::grounding_question(static_cast<std::size_t>(k), r.events[i].caption);
                    q.event_index = i;
                    q.template_index = k;
                    out.push_back(std::move(q));
                }
            }
        } else {
            Query q;
            q.video_id = r.video_id;
            q.query_id = std::string("dense:") + to_string(preset);
            q.task = task;
            q.preset = preset;
            switch (preset) {
                case QueryPreset::qd1: q.text = std::string(tpl::kDenseQuestions[0]); break;
                case QueryPreset::json: q.text = std::string(tpl::kDenseJsonQuery); break;
                case QueryPreset::seconds: q.text = dense_seconds_query(r.duration); break;
                case QueryPreset::qt_avg: break;
            }
            out.push_back(std::move(q));
        }
    }
    return out;
}

ResponderKind ResponderKind::degenerate(int start, int end) {
    ResponderKind k;
    k.kind = Kind::degenerate_span;
    k.degenerate_start = start;
    k.degenerate_end = end;
    return k;
}

ResponderKind ResponderKind::noisy(double sigma, double shuffle_probability) {
    ResponderKind k;
    k.kind = Kind::noisy;
    k.jitter_sigma = sigma;
    k.caption_shuffle = shuffle_probability;
    return k;
}

ResponderKind ResponderKind::parse(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    const std::string& name = parts[0];
    ResponderKind k;
    try {
        if (name == "oracle" && parts.size() == 1) {
            k = oracle();
        } else if ((name == "degenerate" || name == "degenerate_span") && parts.size() <= 3) {
            k = degenerate(parts.size() > 1 ? std::stoi(parts[1]) : 0, parts.size() > 2 ? std::stoi(parts[2]) : 95);
        } else if (name == "noisy" && parts.size() <= 3) {
            k = noisy(parts.size() > 1 ? std::stod(parts[1]) : 3.0, parts.size() > 2 ? std::stod(parts[2]) : 0.0);
        } else if (name == "silent" && parts.size() == 1) {
            k = silent();
        } else {
            throw Error(ErrorCode::invalid_argument, "unknown responder '" + std::string(text) + "'");
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::invalid_argument, "bad responder parameters '" + std::string(text) + "'");
    }
    k.check();
    return k;
}

void ResponderKind::check() const {
    if (kind == Kind::degenerate_span) {
        if (degenerate_start < 0 || degenerate_end > kMaxFrameIndex || degenerate_start > degenerate_end) {
            throw Error(ErrorCode::invalid_argument, "degenerate endpoints must satisfy 0 <= start <= end <= 99");
        }
    }
    if (jitter_sigma < 0.0) throw Error(ErrorCode::invalid_argument, "jitter sigma must be >= 0");
    if (!(caption_shuffle >= 0.0 && caption_shuffle <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "caption shuffle probability must lie in [0,1]");
    }
}

std::vector<parse::PredictionInput> run_responder(const ResponderKind& kind, std::span<const VideoRecord> records,
                                                  std::span<const Query> queries, std::uint64_t seed) {
    kind.check();
    if (queries.empty()) throw Error(ErrorCode::empty_input, "responder needs at least one query");
    std::map<std::string, const VideoRecord*> by_id;
    for (const VideoRecord& r : records) by_id[r.video_id] = &r;

    std::vector<parse::PredictionInput> out;
    out.reserve(queries.size());
    for (const Query& q : queries) {
        const auto it = by_id.find(q.video_id);
        if (it == by_id.end()) throw Error(ErrorCode::join, "query for unknown video '" + q.video_id + "'");
        const VideoRecord& rec = *it->second;
        Rng rng(derive_seed(seed, key_of(q.video_id, q.query_id)));
        std::string text;
        switch (kind.kind) {
            case ResponderKind::Kind::silent:
                text = "I'm sorry, I can't tell that from the video.";
                break;
            case ResponderKind::Kind::degenerate_span:
                text = tpl::grounding_answer(FrameSpan{kind.degenerate_start, kind.degenerate_end});
                break;
            case ResponderKind::Kind::oracle:
            case ResponderKind::Kind::noisy: {
                const bool noisy = kind.kind == ResponderKind::Kind::noisy;
                if (q.task == Task::grounding) {
                    FrameSpan span = event_to_frame_span(rec.events.at(q.event_index.value()), rec.duration);
                    if (noisy) span = jitter(span, kind.jitter_sigma, rng);
                    text = tpl::grounding_answer(span);
                    break;
                }
                std::vector<SpanCaption> events = dialoguegen::to_span_captions(rec);
                if (noisy) {
                    for (SpanCaption& e : events) e.span = jitter(e.span, kind.jitter_sigma, rng);
                    for (std::size_t i = 0; i < events.size() && events.size() > 1; ++i) {
                        if (bernoulli(rng, kind.caption_shuffle)) {
                            std::swap(events[i].caption, events[uniform_index(rng, events.size())].caption);
                        }
                    }
                }
                switch (q.preset) {
                    case QueryPreset::json: text = render_json_answer(events); break;
                    case QueryPreset::seconds: text = render_seconds_answer(events, rec.duration); break;
                    default: text = tpl::dense_answer(events); break;
                }
                break;
            }
        }
        out.push_back({q.video_id, q.query_id, std::move(text)});
    }
    return out;
}

namespace {

void join_or_throw(std::span<const Query> queries, std::span<const parse::PredictionInput> predictions,
                   std::map<std::string, std::size_t>& query_index) {
    for (std::size_t i = 0; i < queries.size(); ++i) query_index[key_of(queries[i].video_id, queries[i].query_id)] = i;
    std::vector<std::string> orphans;
    std::map<std::string, bool> seen;
    for (const auto& p : predictions) {
        const std::string k = key_of(p.video_id, p.query_id);
        if (!query_index.contains(k)) orphans.push_back("prediction " + p.video_id + "/" + p.query_id);
        if (seen[k]) orphans.push_back("duplicate prediction " + p.video_id + "/" + p.query_id);
        seen[k] = true;
    }
    for (const Query& q : queries) {
        if (!seen.contains(key_of(q.video_id, q.query_id))) orphans.push_back("query " + q.video_id + "/" + q.query_id);
    }
    if (!orphans.empty()) {
        const std::string msg = "predictions and ground truth disagree on " + std::to_string(orphans.size()) + " keys";
        throw JoinError(msg, std::move(orphans));
    }
}

}  // namespace

EvalReport evaluate(std::span<const VideoRecord> records, std::span<const parse::PredictionInput> predictions,
                    Task task, QueryPreset preset, GroundingProtocol protocol) {
    const std::vector<Query> queries = build_queries(records, task, preset);
    std::map<std::string, std::size_t> query_index;
    join_or_throw(queries, predictions, query_index);

    std::map<std::string, const VideoRecord*> by_id;
    for (const VideoRecord& r : records) by_id[r.video_id] = &r;

    EvalReport report;
    report.task = task;
    report.preset = preset;
    report.protocol = protocol;

    const parse::Mode mode = task == Task::grounding      ? parse::Mode::grounding
                             : preset == QueryPreset::seconds ? parse::Mode::seconds
                                                              : parse::Mode::dense;
    const parse::ParseBatch batch = parse::parse_batch(predictions, mode, [&](const std::string& id) {
        const auto it = by_id.find(id);
        return it == by_id.end() ? std::optional<double>{} : std::optional<double>{it->second->duration};
    });
    report.parse = batch.report;

    if (task == Task::grounding) {
        std::vector<std::vector<metrics::GroundingPair>> per_template(kGroundingTemplatesAveraged);
        for (const parse::ParsedPrediction& p : batch.predictions) {
            const Query& q = queries[query_index.at(key_of(p.video_id, p.query_id))];
            const VideoRecord& rec = *by_id.at(q.video_id);
            const FrameSpan gt = event_to_frame_span(rec.events.at(*q.event_index), rec.duration);
            std::optional<FrameSpan> pred;
            if (p.status == parse::ParseStatus::parsed) pred = p.items.front().span;
            per_template[static_cast<std::size_t>(q.template_index)].emplace_back(pred, gt);
        }
        metrics::GroundingResult avg;
        std::size_t runs_with_data = 0;
        for (int k = 0; k < kGroundingTemplatesAveraged; ++k) {
            GroundingRun run;
            run.template_index = k;
            const auto& pairs = per_template[static_cast<std::size_t>(k)];
            run.total = pairs.size();
            try {
                run.result = metrics::grounding_metrics(pairs);
                run.excluded = run.result->excluded_count;
                if (avg.recall.empty()) {
                    avg.recall = run.result->recall;
                } else {
                    for (std::size_t t = 0; t < avg.recall.size(); ++t) avg.recall[t].second += run.result->recall[t].second;
                }
                avg.miou += run.result->miou;
                avg.sample_count += run.result->sample_count;
                avg.excluded_count += run.result->excluded_count;
                ++runs_with_data;
            } catch (const EmptyEvaluation& e) {
                run.excluded = e.excluded();
                avg.excluded_count += e.excluded();
            }
            report.grounding_runs.push_back(std::move(run));
        }
        if (runs_with_data > 0 && protocol == GroundingProtocol::best_of) {
            const GroundingRun* best = nullptr;
            for (const GroundingRun& r : report.grounding_runs) {
                if (r.result && (!best || r.result->miou > best->result->miou)) best = &r;
            }
            report.grounding = best->result;
        } else if (runs_with_data > 0) {
            const double n = static_cast<double>(runs_with_data);
            for (auto& [t, r] : avg.recall) r /= n;
            avg.miou /= n;
            report.grounding = avg;
        } else {
            report.empty = true;
        }
    } else {
        std::vector<metrics::DenseVideo> videos;
        for (const parse::ParsedPrediction& p : batch.predictions) {
            metrics::DenseVideo v;
            for (const parse::ParsedItem& it : p.items) v.predictions.push_back({it.span, it.caption.value_or("")});
            v.ground_truth_sets.push_back(dialoguegen::to_span_captions(*by_id.at(p.video_id)));
            videos.push_back(std::move(v));
        }
        report.dense = metrics::dense_caption_metrics(videos);
        report.empty = report.dense->video_count == 0;
    }
    return report;
}

EvalReport evaluate(const RunConfig& run) {
    const auto records = jsonl::read_as<VideoRecord>(run.ground_truth);
    const auto predictions = jsonl::read_as<parse::PredictionInput>(run.predictions);
    return evaluate(records, predictions, run.task, run.preset, run.protocol);
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j{{"task", to_string(task)},
                     {"queries", to_string(preset)},
                     {"parse", parse.to_json()},
                     {"empty", empty},
                     {"protocol",
                      {{"exclusion", "unparseable predictions are removed from metric denominators"},
                       {"grounding_average",
                        protocol == GroundingProtocol::best_of
                            ? "best of the first three grounding templates by corpus mIoU"
                            : "corpus metrics averaged over the first three grounding templates"},
                       {"caption_matching",
                        "each prediction pairs with its best-IoU ground truth per threshold; unmatched scores 0"},
                       {"caption_scorer", "METEOR-lite (exact + stem unigram alignment)"}}}};
    if (task == Task::grounding) {
        nlohmann::json runs = nlohmann::json::array();
        for (const GroundingRun& r : grounding_runs) {
            nlohmann::json row{{"template", "Q_T" + std::to_string(r.template_index + 1)},
                               {"total", r.total},
                               {"excluded", r.excluded}};
            row["metrics"] = r.result ? r.result->to_json() : nlohmann::json(nullptr);
            runs.push_back(std::move(row));
        }
        j["grounding_runs"] = std::move(runs);
        j["grounding"] = grounding ? grounding->to_json() : nlohmann::json(nullptr);
    } else {
        j["dense"] = dense ? dense->to_json() : nlohmann::json(nullptr);
    }
    return j;
}

std::string table_from_json(const nlohmann::json& report) {
    auto cell = [](const nlohmann::json* v) {
        char buf[32];
        if (v == nullptr || !v->is_number()) return std::string("       -");
        std::snprintf(buf, sizeof(buf), "%8.4f", v->get<double>());
        return std::string(buf);
    };
    auto find = [](const nlohmann::json& obj, std::initializer_list<const char*> path) -> const nlohmann::json* {
        const nlohmann::json* cur = &obj;
        for (const char* p : path) {
            if (!cur->is_object() || !cur->contains(p)) return nullptr;
            cur = &(*cur)[p];
        }
        return cur;
    };
    std::ostringstream os;
    const auto* cov = find(report, {"parse", "coverage"});
    const auto* parsed = find(report, {"parse", "parsed"});
    const auto* total = find(report, {"parse", "total"});
    os << "task: " << report.value("task", "?") << "  queries: " << report.value("queries", "?");
    if (cov && parsed && total) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "  parse coverage: %.4f (%zu/%zu)", cov->get<double>(),
                      parsed->get<std::size_t>(), total->get<std::size_t>());
        os << buf;
    }
    if (report.value("empty", false)) os << "  [empty evaluation]";
    os << "\n";
    os << "   R@0.3    R@0.5    R@0.7     mIoU   SODA_c    CIDEr   METEOR\n";
    os << cell(find(report, {"grounding", "recall", "R@0.3"})) << ' '
       << cell(find(report, {"grounding", "recall", "R@0.5"})) << ' '
       << cell(find(report, {"grounding", "recall", "R@0.7"})) << ' '
       << cell(find(report, {"grounding", "mIoU"})) << ' '
       << cell(find(report, {"dense", "SODA_c"})) << ' '
       << cell(find(report, {"dense", "CIDEr"})) << ' '
       << cell(find(report, {"dense", "METEOR"})) << '\n';
    return os.str();
}

std::string EvalReport::to_table() const { return table_from_json(to_json()); }

}  // namespace momentkit::harness
