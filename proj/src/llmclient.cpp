// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "momentkit/llmclient.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "momentkit/dialoguegen.hpp"
#include "momentkit/random.hpp"

namespace momentkit::llmclient {

void SynthConfig::check() const {
    if (max_retries < 0) throw Error(ErrorCode::invalid_argument, "max_retries must be >= 0");
    if (parallelism < 1) throw Error(ErrorCode::invalid_argument, "parallelism must be >= 1");
    if (dialogues_per_video < 1) throw Error(ErrorCode::invalid_argument, "dialogues_per_video must be >= 1");
}

nlohmann::json build_request_body(const ChatRequest& request) {
    return nlohmann::json{
        {"model", request.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
        {"seed", request.seed},
    };
}

std::optional<std::string> extract_completion(const nlohmann::json& body) {
    if (!body.is_object()) return std::nullopt;
    const auto choices = body.find("choices");
    if (choices == body.end() || !choices->is_array() || choices->empty()) return std::nullopt;
    const auto& first = (*choices)[0];
    if (const auto msg = first.find("message"); msg != first.end() && msg->is_object()) {
        if (const auto c = msg->find("content"); c != msg->end() && c->is_string()) return c->get<std::string>();
    }
    if (const auto t = first.find("text"); t != first.end() && t->is_string()) return t->get<std::string>();
    return std::nullopt;
}

HttpChatTransport::HttpChatTransport(std::string endpoint, std::chrono::milliseconds timeout, std::string api_key)
    : timeout_(timeout), api_key_(std::move(api_key)) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint, m, url_re)) {
        throw Error(ErrorCode::invalid_argument, "endpoint must be an http(s) URL: " + endpoint);
    }
    scheme_host_port_ = m[1].str();
    path_ = m[2].matched && m[2].length() > 1 ? m[2].str() : "/v1/chat/completions";
}

ChatResponse HttpChatTransport::complete(const ChatRequest& request) {
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    ChatResponse out;
    auto res = client.Post(path_, headers, build_request_body(request).dump(), "application/json");
    if (!res) {
        out.error = "transport error: " + httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    if (res->status != 200) {
        out.error = "HTTP " + std::to_string(res->status);
        return out;
    }
    const auto body = nlohmann::json::parse(res->body, nullptr, false);
    const auto text = extract_completion(body);
    if (!text) {
        out.error = "response carries no completion text";
        return out;
    }
    out.ok = true;
    out.text = *text;
    return out;
}

FixtureTransport::FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw Error(ErrorCode::io, "fixture directory not found: " + dir_.string());
    }
}

ChatResponse FixtureTransport::complete(const ChatRequest& request) {
    const std::string v = std::to_string(request.variant);
    const std::string a = std::to_string(request.attempt);
    const std::string stems[] = {request.video_id + "." + v + "." + a, request.video_id + "." + v, request.video_id};
    ChatResponse out;
    for (const char* ext : {".txt", ".json"}) {
        for (const std::string& s : stems) {
            const std::filesystem::path p = dir_ / (s + ext);
            if (!std::filesystem::is_regular_file(p)) continue;
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            out.status = 200;
            if (std::string_view(ext) == ".txt") {
                out.ok = true;
                out.text = ss.str();
                return out;
            }
            const auto body = nlohmann::json::parse(ss.str(), nullptr, false);
            if (const auto text = extract_completion(body)) {
                out.ok = true;
                out.text = *text;
            } else {
                out.error = "fixture " + p.filename().string() + " carries no completion text";
            }
            return out;
        }
    }
    out.error = "no fixture for " + request.video_id + " variant " + v;
    return out;
}

namespace {

const std::regex& role_re() {
    static const std::regex re(R"(^\s*(user|assistant)\s*:\s?(.*)$)", std::regex::icase);
    return re;
}

// Anything shaped like a placeholder: <s3>, <T4>, <e?>, <x12>.
const std::regex& placeholder_re() {
    static const std::regex re(R"(<\s*([A-Za-z])\s*(\d+|\?)\s*>)");
    return re;
}

std::string rewrite_placeholders(const std::string& text, std::size_t event_count,
                                 std::vector<std::string>& violations, bool& normalized) {
    std::string out;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), placeholder_re()); it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        out.append(text, last, static_cast<std::size_t>(m.position(0)) - last);
        last = static_cast<std::size_t>(m.position(0) + m.length(0));
        char kind = static_cast<char>(std::tolower(static_cast<unsigned char>(m[1].str()[0])));
        const std::string num = m[2].str();
        if (kind != 's' && kind != 'e' && kind != 't') {
            violations.push_back("unknown placeholder " + m.str(0));
            out += m.str(0);
            continue;
        }
        if (num == "?") {
            violations.push_back("unnumbered placeholder " + m.str(0));
            out += m.str(0);
            continue;
        }
        const unsigned long k = std::stoul(num);
        if (k < 1 || k > event_count) {
            violations.push_back("placeholder " + m.str(0) + " out of range 1.." + std::to_string(event_count));
        }
        if (kind == 't') {
            kind = 'e';
            normalized = true;
        }
        out += '<';
        out += kind;
        out += std::to_string(k);
        out += '>';
    }
    out.append(text, last, std::string::npos);
    return out;
}

}  // namespace

LlmValidation validate_llm_dialogue(std::string_view raw, std::size_t event_count) {
    LlmValidation result;
    std::vector<std::string>& violations = result.violations;

    struct RawTurn {
        bool user;
        std::string text;
    };
    std::vector<RawTurn> turns;
    std::istringstream in{std::string(raw)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch m;
        if (std::regex_match(line, m, role_re())) {
            const bool user = std::tolower(static_cast<unsigned char>(m[1].str()[0])) == 'u';
            turns.push_back({user, m[2].str()});
        } else if (!turns.empty()) {
            turns.back().text += "\n" + line;
        } else {
            const std::string t = trim(line);
            if (!t.empty() && t != "Dialogue:") {
                violations.push_back("line " + std::to_string(line_no) + ": text before the first turn");
            }
        }
    }

    if (turns.empty()) violations.push_back("no User:/Assistant: turns found");
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const bool expect_user = i % 2 == 0;
        if (turns[i].user != expect_user) {
            violations.push_back("turn " + std::to_string(i + 1) + ": expected " +
                                 (expect_user ? "User" : "Assistant") + ", found " +
                                 (turns[i].user ? "User" : "Assistant"));
        }
        turns[i].text = trim(turns[i].text);
        if (turns[i].text.empty()) violations.push_back("turn " + std::to_string(i + 1) + ": empty text");
        turns[i].text = rewrite_placeholders(turns[i].text, event_count, violations,
                                             result.normalized_end_placeholders);
    }
    if (!turns.empty() && turns.size() % 2 != 0) violations.push_back("dialogue ends with an unanswered User turn");

    if (!violations.empty()) return result;
    Dialogue d;
    d.source = DialogueSource::llm_synth;
    for (std::size_t i = 0; i + 1 < turns.size(); i += 2) d.turns.push_back({turns[i].text, turns[i + 1].text});
    result.dialogue = std::move(d);
    return result;
}

Dialogue substitute_placeholders(const Dialogue& dialogue, std::span<const FrameSpan> spans) {
    static const std::regex re(R"(<([se])(\d+)>)");
    auto subst = [&](const std::string& text) {
        std::string out;
        std::size_t last = 0;
        for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
            const std::smatch& m = *it;
            out.append(text, last, static_cast<std::size_t>(m.position(0)) - last);
            last = static_cast<std::size_t>(m.position(0) + m.length(0));
            const unsigned long k = std::stoul(m[2].str());
            if (k < 1 || k > spans.size()) {
                throw Error(ErrorCode::out_of_range, "placeholder " + m.str(0) + " has no event");
            }
            const FrameSpan& s = spans[k - 1];
            out += format_frame_index(m[1].str() == "s" ? s.start_index : s.end_index);
        }
        out.append(text, last, std::string::npos);
        return out;
    };
    Dialogue out = dialogue;
    for (Turn& t : out.turns) {
        t.user = subst(t.user);
        t.assistant = subst(t.assistant);
    }
    return out;
}

std::uint64_t request_seed(std::string_view video_id, int variant, int attempt) {
    return splitmix64(fnv1a64(video_id) ^ splitmix64(static_cast<std::uint64_t>(variant) * 1000003ULL +
                                                     static_cast<std::uint64_t>(attempt)));
}

Dialogue synthesize_dialogue(const VideoRecord& record, const SynthConfig& config, ChatTransport& transport,
                             int variant) {
    config.check();
    std::vector<Event> ordered = record.events;
    std::stable_sort(ordered.begin(), ordered.end(), [](const Event& a, const Event& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.end < b.end;
    });
    std::vector<FrameSpan> spans;
    for (const Event& e : ordered) spans.push_back(event_to_frame_span(e, record.duration));

    ChatRequest req;
    req.model = config.model;
    req.prompt = dialoguegen::build_stage3_prompt(ordered);
    req.temperature = config.temperature;
    req.video_id = record.video_id;
    req.variant = variant;

    std::string last_error;
    std::string last_raw;
    std::vector<std::string> last_violations;
    bool got_response = false;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        req.attempt = attempt;
        req.seed = request_seed(record.video_id, variant, attempt);
        const ChatResponse res = transport.complete(req);
        if (!res.ok) {
            last_error = res.error;
            continue;
        }
        if (trim(res.text).empty()) {
            last_error = "empty completion";
            continue;
        }
        got_response = true;
        last_raw = res.text;
        LlmValidation v = validate_llm_dialogue(res.text, ordered.size());
        if (!v.accepted()) {
            last_violations = std::move(v.violations);
            continue;
        }
        Dialogue d = substitute_placeholders(*v.dialogue, spans);
        d.video_id = record.video_id;
        d.source = DialogueSource::llm_synth;
        d.seed = req.seed;
        return d;
    }
    const std::string attempts = std::to_string(config.max_retries + 1) + " attempts";
    if (got_response) {
        throw SynthesisRejected("dialogue for '" + record.video_id + "' failed validation after " + attempts,
                                last_raw, last_violations);
    }
    throw Error(ErrorCode::service, "synthesis for '" + record.video_id + "' failed after " + attempts + ": " + last_error);
}

std::vector<SynthOutcome> synthesize_corpus(std::span<const VideoRecord> records, const SynthConfig& config,
                                            ChatTransport& transport) {
    config.check();
    const std::size_t per = static_cast<std::size_t>(config.dialogues_per_video);
    const std::size_t jobs = records.size() * per;
    std::vector<SynthOutcome> out(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const VideoRecord& r = records[job / per];
            SynthOutcome& o = out[job];
            o.video_id = r.video_id;
            o.variant = static_cast<int>(job % per);
            try {
                o.dialogue = synthesize_dialogue(r, config, transport, o.variant);
            } catch (const SynthesisRejected& e) {
                o.error = e.code();
                o.message = e.what();
                o.last_raw = e.last_raw();
            } catch (const Error& e) {
                o.error = e.code();
                o.message = e.what();
            }
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), jobs);
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return out;
}

}  // namespace momentkit::llmclient
