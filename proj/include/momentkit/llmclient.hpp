// Copyright (c) 2026 The momentkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/core.hpp"

namespace momentkit::llmclient {

struct SynthConfig {
    std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
    std::string model = "vicuna-7b-v1.5";
    std::chrono::milliseconds timeout{60000};
    int max_retries = 2;
    int parallelism = 4;
    double temperature = 0.7;
    int dialogues_per_video = 2;
    /// Environment variable holding the bearer token, if any.
    std::string api_key_env = "MOMENTKIT_API_KEY";

    void check() const;
};

struct ChatRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.0;
    std::uint64_t seed = 0;
    // Routing metadata; not sent over the wire.
    std::string video_id;
    int variant = 0;
    int attempt = 0;
};

struct ChatResponse {
    bool ok = false;
    int status = 0;
    std::string text;
    std::string error;
};

/// Implementations must be safe to call from several threads at once.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Chat-completion request body: one user message carrying the prompt.
nlohmann::json build_request_body(const ChatRequest& request);

/// Pulls the assistant text out of a chat-completion response body.
std::optional<std::string> extract_completion(const nlohmann::json& body);

class HttpChatTransport : public ChatTransport {
public:
    HttpChatTransport(std::string endpoint, std::chrono::milliseconds timeout, std::string api_key);

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::string scheme_host_port_;
    std::string path_;
    std::chrono::milliseconds timeout_;
    std::string api_key_;
};

/// Replays canned responses from a directory. Lookup order for a request:
/// `<video_id>.<variant>.<attempt>.txt`, `<video_id>.<variant>.txt`, `<video_id>.txt`,
/// then the same names with `.json` holding a full chat-completion body.
class FixtureTransport : public ChatTransport {
public:
    explicit FixtureTransport(std::filesystem::path dir);

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::filesystem::path dir_;
};

struct LlmValidation {
    std::optional<Dialogue> dialogue;  // placeholders intact, `<tK>` rewritten as `<eK>`
    std::vector<std::string> violations;
    bool normalized_end_placeholders = false;

    bool accepted() const { return dialogue.has_value(); }
};

/// Accepts only alternating `User:` / `Assistant:` turns whose placeholders are
/// `<sK>`/`<eK>` (or `<tK>`) with 1 <= K <= event_count.
LlmValidation validate_llm_dialogue(std::string_view raw, std::size_t event_count);

/// Replaces `<sK>`/`<eK>` with the two-digit indices of the K-th span.
Dialogue substitute_placeholders(const Dialogue& dialogue, std::span<const FrameSpan> spans);

/// Seed sent for a (video, variant, attempt) triple.
std::uint64_t request_seed(std::string_view video_id, int variant, int attempt);

/// Sends the synthesis prompt and returns a validated, substituted dialogue.
/// Throws Error(service) when every attempt failed in transport and
/// SynthesisRejected when a response was received but never validated.
Dialogue synthesize_dialogue(const VideoRecord& record, const SynthConfig& config,
                             ChatTransport& transport, int variant = 0);

struct SynthOutcome {
    std::string video_id;
    int variant = 0;
    std::optional<Dialogue> dialogue;
    std::optional<ErrorCode> error;
    std::string message;
    std::string last_raw;
};

/// `dialogues_per_video` syntheses per record with at most `parallelism`
/// requests in flight. Outcomes come back in input order.
std::vector<SynthOutcome> synthesize_corpus(std::span<const VideoRecord> records,
                                            const SynthConfig& config, ChatTransport& transport);

}  // namespace momentkit::llmclient
