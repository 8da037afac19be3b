// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: one subcommand per pipeline stage, JSONL in and out.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"
#include "momentkit/curate.hpp"
#include "momentkit/dialoguegen.hpp"
#include "momentkit/harness.hpp"
#include "momentkit/jsonl.hpp"
#include "momentkit/llmclient.hpp"
#include "momentkit/parse.hpp"

namespace mk = momentkit;
using nlohmann::json;

namespace {

// JSON config: top-level keys are global flags, nested objects are
// per-subcommand flags, e.g. {"curate": {"policy": "internvid"}}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> out;
        collect(j, "", {}, out);
        return out;
    }

private:
    static void collect(const json& j, const std::string& name, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), parents, out);
            return;
        }
        CLI::ConfigItem item;
        item.name = name;
        item.parents = parents;
        if (j.is_boolean()) {
            item.inputs = {j.get<bool>() ? "true" : "false"};
        } else if (j.is_string()) {
            item.inputs = {j.get<std::string>()};
        } else if (j.is_number()) {
            item.inputs = {j.dump()};
        } else if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        } else {
            throw CLI::ConversionError("unsupported config value for '" + name + "'");
        }
        out.push_back(std::move(item));
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw mk::Error(mk::ErrorCode::io, "cannot write " + path);
    out << j.dump(2) << '\n';
}

// Reads records one line at a time so a bad line is counted, not fatal.
struct RecordRead {
    std::vector<mk::VideoRecord> records;
    std::vector<std::string> malformed;
};

RecordRead read_records_lenient(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mk::Error(mk::ErrorCode::io, "cannot open " + path);
    RecordRead out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (mk::trim(line).empty()) continue;
        try {
            out.records.push_back(json::parse(line).get<mk::VideoRecord>());
        } catch (const std::exception& e) {
            out.malformed.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

struct CurateOpts {
    std::string input, output, report, policy = "internvid";
};

int run_curate(const CurateOpts& o) {
    const mk::curate::CurationPolicy policy = mk::curate::policy_by_name(o.policy);
    const RecordRead read = read_records_lenient(o.input);
    mk::curate::CurationResult result = mk::curate::apply_policy(read.records, policy);
    if (!read.malformed.empty()) {
        mk::curate::CurationReport bad;
        bad.policy = policy.name;
        bad.input = bad.rejected = read.malformed.size();
        bad.rule_rejections[mk::curate::kRuleMalformed] = read.malformed.size();
        result.report += bad;
        for (const auto& m : read.malformed) std::cerr << "malformed: " << m << '\n';
    }
    mk::jsonl::write_as(o.output, result.accepted);
    if (!o.report.empty()) write_json(o.report, result.report.to_json());
    std::cout << result.report.to_table();
    return 0;
}

struct GenerateOpts {
    std::string input, output;
    double mix = 0.2;
    std::uint64_t seed = 0;
};

int run_generate(const GenerateOpts& o) {
    const auto records = mk::jsonl::read_as<mk::VideoRecord>(o.input);
    const mk::dialoguegen::Stage2Corpus corpus = mk::dialoguegen::generate_stage2_corpus(records, o.mix, o.seed);
    mk::jsonl::write_as(o.output, corpus.dialogues);
    for (const auto& f : corpus.failures) std::cerr << "skipped " << f.video_id << ": " << f.message << '\n';
    std::cout << "dialogues: " << corpus.dialogues.size() << "  skipped: " << corpus.failures.size() << '\n';
    return corpus.dialogues.empty() && !records.empty() ? 1 : 0;
}

struct SynthOpts {
    std::string input, output, failures, fixtures;
    mk::llmclient::SynthConfig config;
    int timeout_ms = 60000;
};

int run_synth(SynthOpts o) {
    o.config.timeout = std::chrono::milliseconds(o.timeout_ms);
    o.config.check();
    const auto records = mk::jsonl::read_as<mk::VideoRecord>(o.input);
    std::unique_ptr<mk::llmclient::ChatTransport> transport;
    if (!o.fixtures.empty()) {
        transport = std::make_unique<mk::llmclient::FixtureTransport>(o.fixtures);
    } else {
        const char* key = std::getenv(o.config.api_key_env.c_str());
        transport = std::make_unique<mk::llmclient::HttpChatTransport>(o.config.endpoint, o.config.timeout,
                                                                       key ? key : "");
    }
    const auto outcomes = mk::llmclient::synthesize_corpus(records, o.config, *transport);
    std::vector<mk::Dialogue> dialogues;
    std::vector<json> failures;
    for (const auto& r : outcomes) {
        if (r.dialogue) {
            dialogues.push_back(*r.dialogue);
            continue;
        }
        const char* code = r.error ? mk::to_string(*r.error) : "unknown";
        std::cerr << "failed " << r.video_id << "#" << r.variant << " [" << code << "]: " << r.message << '\n';
        failures.push_back({{"video_id", r.video_id},
                            {"variant", r.variant},
                            {"error", code},
                            {"message", r.message},
                            {"last_raw", r.last_raw}});
    }
    mk::jsonl::write_as(o.output, dialogues);
    if (!o.failures.empty()) mk::jsonl::write_file(o.failures, failures);
    std::cout << "dialogues: " << dialogues.size() << "  failed: " << failures.size() << '\n';
    return dialogues.empty() && !outcomes.empty() ? 1 : 0;
}

struct IoOpts {
    std::string input, output;
};

int run_assemble(const IoOpts& o) {
    const auto dialogues = mk::jsonl::read_as<mk::Dialogue>(o.input);
    const mk::dialoguegen::WhitespaceTokenizer tokenizer;
    std::vector<json> rows;
    std::size_t failed = 0;
    for (const auto& d : dialogues) {
        try {
            const auto layout = mk::dialoguegen::assemble_training_sequence(d, tokenizer);
            for (const auto& w : layout.warnings) std::cerr << "warning " << d.video_id << ": " << w << '\n';
            rows.push_back(layout.to_json());
        } catch (const mk::Error& e) {
            ++failed;
            std::cerr << "skipped " << d.video_id << ": " << e.what() << '\n';
        }
    }
    mk::jsonl::write_file(o.output, rows);
    std::cout << "sequences: " << rows.size() << "  skipped: " << failed << '\n';
    return rows.empty() && !dialogues.empty() ? 1 : 0;
}

struct RespondOpts {
    std::string input, output, queries_out, kind = "oracle", task = "grounding", preset;
    std::uint64_t seed = 0;
};

std::string default_preset(mk::harness::Task task) { return task == mk::harness::Task::grounding ? "qt-avg" : "qd1"; }

int run_respond(const RespondOpts& o) {
    const auto task = mk::harness::task_from_string(o.task);
    const auto preset = mk::harness::preset_from_string(o.preset.empty() ? default_preset(task) : o.preset);
    const auto kind = mk::harness::ResponderKind::parse(o.kind);
    const auto records = mk::jsonl::read_as<mk::VideoRecord>(o.input);
    const auto queries = mk::harness::build_queries(records, task, preset);
    const auto preds = mk::harness::run_responder(kind, records, queries, o.seed);
    mk::jsonl::write_as(o.output, preds);
    if (!o.queries_out.empty()) {
        std::vector<json> rows;
        for (const auto& q : queries) rows.push_back(mk::harness::to_json(q));
        mk::jsonl::write_file(o.queries_out, rows);
    }
    std::cout << "predictions: " << preds.size() << '\n';
    return 0;
}

struct ParseOpts {
    std::string input, output, ground_truth, report, mode = "grounding";
};

int run_parse(const ParseOpts& o) {
    const auto mode = mk::parse::mode_from_string(o.mode);
    const auto inputs = mk::jsonl::read_as<mk::parse::PredictionInput>(o.input);
    std::map<std::string, double> durations;
    if (!o.ground_truth.empty()) {
        for (const auto& r : mk::jsonl::read_as<mk::VideoRecord>(o.ground_truth)) durations[r.video_id] = r.duration;
    } else if (mode == mk::parse::Mode::seconds) {
        throw mk::Error(mk::ErrorCode::invalid_argument, "seconds mode needs --ground-truth for durations");
    }
    const auto batch = mk::parse::parse_batch(inputs, mode, [&](const std::string& id) {
        const auto it = durations.find(id);
        return it == durations.end() ? std::optional<double>{} : std::optional<double>{it->second};
    });
    std::vector<json> rows;
    for (const auto& p : batch.predictions) rows.push_back(p.to_json());
    mk::jsonl::write_file(o.output, rows);
    if (!o.report.empty()) write_json(o.report, batch.report.to_json());
    std::cout << batch.report.to_json().dump(2) << '\n';
    return 0;
}

struct EvalOpts {
    std::string ground_truth, input, output, task = "grounding", preset, protocol = "average";
};

int run_eval(const EvalOpts& o) {
    mk::harness::RunConfig run;
    run.ground_truth = o.ground_truth;
    run.predictions = o.input;
    run.task = mk::harness::task_from_string(o.task);
    run.preset = mk::harness::preset_from_string(o.preset.empty() ? default_preset(run.task) : o.preset);
    run.protocol = mk::harness::protocol_from_string(o.protocol);
    const auto report = mk::harness::evaluate(run);
    if (!o.output.empty()) write_json(o.output, report.to_json());
    std::cout << report.to_table();
    return report.empty ? 3 : 0;
}

int run_report(const std::vector<std::string>& inputs) {
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw mk::Error(mk::ErrorCode::io, "cannot open " + path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw mk::Error(mk::ErrorCode::format, path + ": " + e.what());
        }
        std::cout << mk::harness::table_from_json(j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"momentkit: moment-localization data pipeline and evaluation harness"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file mirroring the command-line flags");
    app.require_subcommand(1);

    CurateOpts curate;
    auto* c = app.add_subcommand("curate", "filter raw annotations with a curation policy");
    c->add_option("--policy", curate.policy, "internvid | anet_stage3 | didemo_stage3")->capture_default_str();
    c->add_option("-i,--input", curate.input, "raw records JSONL")->required();
    c->add_option("-o,--output", curate.output, "accepted records JSONL")->required();
    c->add_option("--report", curate.report, "write the curation report as JSON");

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "template-based dialogues");
    g->add_option("--mix", gen.mix, "fraction of single-turn dense dialogues")->capture_default_str();
    g->add_option("--seed", gen.seed, "corpus seed")->capture_default_str();
    g->add_option("-i,--input", gen.input)->required();
    g->add_option("-o,--output", gen.output)->required();

    SynthOpts syn;
    auto* s = app.add_subcommand("synth", "LLM-synthesized dialogues");
    s->add_option("--endpoint", syn.config.endpoint, "chat-completion URL")->capture_default_str();
    s->add_option("--model", syn.config.model)->capture_default_str();
    s->add_option("--per-video", syn.config.dialogues_per_video)->capture_default_str();
    s->add_option("--retries", syn.config.max_retries)->capture_default_str();
    s->add_option("--parallelism", syn.config.parallelism)->capture_default_str();
    s->add_option("--temperature", syn.config.temperature)->capture_default_str();
    s->add_option("--timeout-ms", syn.timeout_ms)->capture_default_str();
    s->add_option("--api-key-env", syn.config.api_key_env, "environment variable holding the bearer token")
        ->capture_default_str();
    s->add_option("--fixtures", syn.fixtures, "replay canned responses from this directory");
    s->add_option("--failures", syn.failures, "write failed syntheses as JSONL");
    s->add_option("-i,--input", syn.input)->required();
    s->add_option("-o,--output", syn.output)->required();

    IoOpts asm_opts;
    auto* a = app.add_subcommand("assemble", "render dialogues into training sequences with loss masks");
    a->add_option("-i,--input", asm_opts.input)->required();
    a->add_option("-o,--output", asm_opts.output)->required();

    RespondOpts resp;
    auto* r = app.add_subcommand("respond", "synthetic model answers for the evaluation queries");
    r->add_option("--kind", resp.kind, "oracle | degenerate[:s[:e]] | noisy[:sigma[:p]] | silent")
        ->capture_default_str();
    r->add_option("--task", resp.task, "grounding | dense")->capture_default_str();
    r->add_option("--queries", resp.preset, "qt-avg | qd1 | json | seconds");
    r->add_option("--seed", resp.seed)->capture_default_str();
    r->add_option("--queries-out", resp.queries_out, "also write the query set");
    r->add_option("-i,--input", resp.input, "ground-truth records JSONL")->required();
    r->add_option("-o,--output", resp.output, "predictions JSONL")->required();

    ParseOpts par;
    auto* p = app.add_subcommand("parse", "parse raw predictions");
    p->add_option("--mode", par.mode, "grounding | dense | seconds")->capture_default_str();
    p->add_option("--ground-truth", par.ground_truth, "records JSONL (durations for seconds mode)");
    p->add_option("--report", par.report, "write parse statistics as JSON");
    p->add_option("-i,--input", par.input)->required();
    p->add_option("-o,--output", par.output)->required();

    EvalOpts ev;
    auto* e = app.add_subcommand("eval", "score predictions against ground truth");
    e->add_option("--task", ev.task, "grounding | dense")->capture_default_str();
    e->add_option("--queries", ev.preset, "qt-avg | qd1 | json | seconds");
    e->add_option("--protocol", ev.protocol, "grounding runs: average | best-of")->capture_default_str();
    e->add_option("--ground-truth", ev.ground_truth, "records JSONL")->required();
    e->add_option("-i,--input", ev.input, "predictions JSONL")->required();
    e->add_option("-o,--output", ev.output, "report JSON");

    std::vector<std::string> report_inputs;
    auto* rep = app.add_subcommand("report", "print report JSON files as tables");
    rep->add_option("inputs", report_inputs)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c) return run_curate(curate);
        if (*g) return run_generate(gen);
        if (*s) return run_synth(syn);
        if (*a) return run_assemble(asm_opts);
        if (*r) return run_respond(resp);
        if (*p) return run_parse(par);
        if (*e) return run_eval(ev);
        if (*rep) return run_report(report_inputs);
    } catch (const mk::JoinError& err) {
        std::cerr << "error[join]: " << err.what() << '\n';
        for (const auto& o : err.orphans()) std::cerr << "  " << o << '\n';
        return 1;
    } catch (const mk::Error& err) {
        std::cerr << "error[" << mk::to_string(err.code()) << "]: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
