#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sgplan/heuristics.hpp"

namespace sgplan {

class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

/// Replay transport fed a prompt it has no recording for.
class ReplayMismatch : public TransportError {
 public:
  using TransportError::TransportError;
};

/// 64-bit FNV-1a over the canonical prompt bytes. Transcripts store it so a
/// drifted prompt template fails loudly instead of replaying stale answers.
uint64_t prompt_hash(const std::string& text);

struct TranscriptEntry {
  uint64_t hash = 0;
  std::string prompt;
  std::string response;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
};

std::string transcript_to_text(const Transcript& t);
Transcript transcript_from_text(const std::string& text);
void save_transcript(const Transcript& t, const std::string& path);
Transcript load_transcript(const std::string& path);

/// Chat-completion transport: one prompt in, one response out.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const std::string& prompt, const std::string& session_id) = 0;
};

/// Deterministic playback of a recorded transcript, in order; a single
/// session owns the transcript (no concurrent replay).
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(Transcript t) : transcript_(std::move(t)) {}
  std::string send(const std::string& prompt, const std::string& session_id) override;
  size_t remaining() const { return transcript_.entries.size() - pos_; }

 private:
  Transcript transcript_;
  size_t pos_ = 0;
};

/// Pass-through that captures every exchange for later replay.
class RecordTransport : public Transport {
 public:
  explicit RecordTransport(Transport& inner) : inner_(&inner) {}
  std::string send(const std::string& prompt, const std::string& session_id) override;
  const Transcript& transcript() const { return transcript_; }

 private:
  Transport* inner_;
  Transcript transcript_;
};

struct LiveConfig {
  std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
  std::string api_key;
  std::string model;
  double temperature = 0;     // determinism-seeking
  int max_tokens = 1024;
  double min_interval = 0.2;  // request-rate ceiling, seconds between calls
};

/// Reads SGPLAN_LLM_ENDPOINT / SGPLAN_LLM_API_KEY / SGPLAN_LLM_MODEL.
LiveConfig live_config_from_env();

/// OpenAI-compatible chat-completion client over HTTP(S).
class LiveTransport : public Transport {
 public:
  explicit LiveTransport(LiveConfig cfg) : cfg_(std::move(cfg)) {}
  std::string send(const std::string& prompt, const std::string& session_id) override;

 private:
  LiveConfig cfg_;
  double last_request_ = -1e18;  // monotonic seconds
};

/// Outcome of NeedsHumanRephrase is a field, not an exception: translation
/// exhausting its attempts is an expected result the caller routes to a human.
struct TranslationSession {
  std::string mission;
  std::string hierarchy;
  std::string mu_unique;
  std::vector<int> mu_regex;      // entity ids extracted from mu_unique
  LtlPtr formula;                 // null until success
  std::string formula_text;       // canonical prefix form
  int attempts = 0;
  Transcript transcript;          // every prompt/response of this session
  bool needs_human_rephrase = false;
  std::string diagnostic;         // last checker complaint
};

/// Deterministic prompt templates (byte-stable for replay hashing).
std::string build_extraction_prompt(const std::string& hierarchy, const std::string& mission);
/// The formula prompt carries mu_unique, the id list, and the fixed few-shot
/// examples — never the hierarchy (prompt size independent of the scene).
std::string build_formula_prompt(const std::string& mu_unique, const std::vector<int>& mu_regex);
std::string build_correction_prompt(const std::string& candidate, const std::string& diagnostic);

/// Entity ids in order of first appearance: integers in `name_<id>` tokens or
/// parenthesized, deduplicated.
std::vector<int> extract_entity_ids(const std::string& mu_unique);

/// The two-call translation pipeline with the parse/co-safety correction loop.
TranslationSession translate(const std::string& mission, const SceneGraph& scene,
                             Transport& transport, int max_attempts = 3);

/// Parses XML-tagged function calls out of a guidance response. Malformed
/// calls are dropped with a warning; a call naming an unknown attribute
/// rejects the whole plan (empty result, warning).
std::vector<LlmGuidance::Call> parse_guidance_calls(const std::string& response,
                                                    const SceneGraph& scene,
                                                    std::vector<std::string>* warnings);

std::string build_guidance_prompt(const SceneGraph& scene,
                                  const std::vector<std::string>& motions,
                                  int context_attr, const std::string& mission_rest);

/// One prompt per (context attribute, q with q not accepting); accepting
/// states contribute empty plans without any transport call.
LlmGuidance fetch_guidance(const SceneGraph& scene, const Dfa& dfa,
                           const std::vector<std::pair<int, int>>& states,
                           Transport& transport,
                           const std::vector<std::string>& extra_motions = {},
                           std::vector<std::string>* warnings = nullptr);

}  // namespace sgplan
