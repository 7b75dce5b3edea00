#include "sgplan/llm_bridge.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <httplib.h>

namespace sgplan {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TransportError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Attribute id from a token like "kitchen_3", "(3)" leftovers, or a bare
// integer; -1 when no id is present.
int token_attr_id(const std::string& raw) {
  const std::string t = trim(raw);
  static const std::regex id_re("(?:^|_)\\(?([0-9]+)\\)?$");
  std::smatch m;
  if (std::regex_search(t, m, id_re)) return std::stoi(m[1].str());
  return -1;
}

}  // namespace

uint64_t prompt_hash(const std::string& text) {
  uint64_t h = 14695981039346656037ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string transcript_to_text(const Transcript& t) {
  json entries = json::array();
  for (const TranscriptEntry& e : t.entries) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(e.hash));
    entries.push_back({{"hash", std::string(hex)}, {"prompt", e.prompt}, {"response", e.response}});
  }
  json root = {{"format", "sgplan-transcript"}, {"version", 1}, {"entries", entries}};
  return root.dump(2) + "\n";
}

Transcript transcript_from_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw TransportError(std::string("transcript parse: ") + e.what());
  }
  if (root.value("format", "") != "sgplan-transcript" || root.value("version", 0) != 1)
    throw TransportError("transcript: unknown format/version");
  Transcript t;
  for (const json& e : root.at("entries")) {
    TranscriptEntry entry;
    entry.hash = std::stoull(e.at("hash").get<std::string>(), nullptr, 16);
    entry.prompt = e.at("prompt").get<std::string>();
    entry.response = e.at("response").get<std::string>();
    if (prompt_hash(entry.prompt) != entry.hash)
      throw TransportError("transcript: stored hash does not match stored prompt");
    t.entries.push_back(std::move(entry));
  }
  return t;
}

void save_transcript(const Transcript& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TransportError("cannot write " + path);
  out << transcript_to_text(t);
}

Transcript load_transcript(const std::string& path) {
  return transcript_from_text(read_file(path));
}

std::string ReplayTransport::send(const std::string& prompt, const std::string&) {
  if (pos_ >= transcript_.entries.size())
    throw ReplayMismatch("replay: transcript exhausted after " + std::to_string(pos_) +
                         " exchanges");
  const TranscriptEntry& e = transcript_.entries[pos_];
  if (prompt_hash(prompt) != e.hash)
    throw ReplayMismatch("replay: prompt " + std::to_string(pos_) +
                         " does not match the recording (template drift?)");
  ++pos_;
  return e.response;
}

std::string RecordTransport::send(const std::string& prompt, const std::string& session_id) {
  std::string response = inner_->send(prompt, session_id);
  transcript_.entries.push_back({prompt_hash(prompt), prompt, response});
  return response;
}

LiveConfig live_config_from_env() {
  LiveConfig cfg;
  if (const char* v = std::getenv("SGPLAN_LLM_ENDPOINT")) cfg.endpoint = v;
  if (const char* v = std::getenv("SGPLAN_LLM_API_KEY")) cfg.api_key = v;
  if (const char* v = std::getenv("SGPLAN_LLM_MODEL")) cfg.model = v;
  return cfg;
}

std::string LiveTransport::send(const std::string& prompt, const std::string&) {
  if (cfg_.endpoint.empty()) throw TransportError("live transport: no endpoint configured");

  // Request-rate ceiling.
  const double now = std::chrono::duration<double>(
                         std::chrono::steady_clock::now().time_since_epoch())
                         .count();
  if (now - last_request_ < cfg_.min_interval)
    std::this_thread::sleep_for(
        std::chrono::duration<double>(cfg_.min_interval - (now - last_request_)));
  last_request_ = std::chrono::duration<double>(
                      std::chrono::steady_clock::now().time_since_epoch())
                      .count();

  const size_t scheme = cfg_.endpoint.find("://");
  if (scheme == std::string::npos) throw TransportError("live transport: bad endpoint URL");
  const size_t path_at = cfg_.endpoint.find('/', scheme + 3);
  const std::string base = path_at == std::string::npos ? cfg_.endpoint
                                                        : cfg_.endpoint.substr(0, path_at);
  const std::string path = path_at == std::string::npos ? "/v1/chat/completions"
                                                        : cfg_.endpoint.substr(path_at);

  json body = {{"model", cfg_.model},
               {"temperature", cfg_.temperature},
               {"max_tokens", cfg_.max_tokens},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  httplib::Client cli(base);
  cli.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);
  auto res = cli.Post(path, headers, body.dump(), "application/json");
  if (!res) throw TransportError("live transport: request failed (" + base + ")");
  if (res->status != 200)
    throw TransportError("live transport: HTTP " + std::to_string(res->status));
  try {
    json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("live transport: malformed reply: ") + e.what());
  }
}

std::string build_extraction_prompt(const std::string& hierarchy, const std::string& mission) {
  std::ostringstream out;
  out << "You ground mission entities in a scene with unique ids.\n\n"
      << "Attribute hierarchy:\n"
      << hierarchy << "\n"
      << "Mission: " << mission << "\n\n"
      << "Rewrite the mission, replacing every mentioned entity with its\n"
      << "name_<id> token from the hierarchy (for example \"the oven\" in\n"
      << "mission text becomes oven_11 if the hierarchy lists oven (11)).\n"
      << "Reply with the rewritten mission only.\n";
  return out.str();
}

std::string build_formula_prompt(const std::string& mu_unique, const std::vector<int>& mu_regex) {
  std::ostringstream out;
  out << "Translate a mission with unique entity ids into a co-safe LTL\n"
      << "formula in whitespace-separated prefix notation.\n"
      << "Operators: ! & | => X U F. Propositions are p<id>.\n"
      << "G (always) is not co-safe and must not appear; express global\n"
      << "avoidance as a top-level negated proposition.\n\n"
      << "Examples:\n"
      << "mission: reach the oven_11\n"
      << "entity ids: 11\n"
      << "formula: F p11\n\n"
      << "mission: avoid the hallway_7 until you visit the kitchen_3\n"
      << "entity ids: 7 3\n"
      << "formula: U ! p7 p3\n\n"
      << "mission: visit the bedroom_2 and then the desk_5, never touching the tv_9\n"
      << "entity ids: 2 5 9\n"
      << "formula: & F & p2 F p5 ! p9\n\n"
      << "mission: " << mu_unique << "\n"
      << "entity ids:";
  for (int id : mu_regex) out << " " << id;
  out << "\nformula:\n";
  return out.str();
}

std::string build_correction_prompt(const std::string& candidate, const std::string& diagnostic) {
  std::ostringstream out;
  out << "Your formula\n  " << candidate << "\nwas rejected: " << diagnostic << "\n"
      << "Reply with a corrected prefix-notation co-safe formula only.\n";
  return out.str();
}

std::vector<int> extract_entity_ids(const std::string& mu_unique) {
  static const std::regex id_re("[A-Za-z][A-Za-z0-9]*_([0-9]+)|\\(\\s*([0-9]+)\\s*\\)");
  std::vector<int> ids;
  for (std::sregex_iterator it(mu_unique.begin(), mu_unique.end(), id_re), end; it != end; ++it) {
    const std::string n = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
    const int id = std::stoi(n);
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  return ids;
}

TranslationSession translate(const std::string& mission, const SceneGraph& scene,
                             Transport& transport, int max_attempts) {
  if (max_attempts < 1) throw std::invalid_argument("translate: max_attempts must be >= 1");
  TranslationSession session;
  session.mission = mission;
  session.hierarchy = attribute_hierarchy(scene);

  auto exchange = [&](const std::string& prompt) {
    std::string response = transport.send(prompt, "translate");
    session.transcript.entries.push_back({prompt_hash(prompt), prompt, response});
    return trim(response);
  };

  session.mu_unique = exchange(build_extraction_prompt(session.hierarchy, mission));
  session.mu_regex = extract_entity_ids(session.mu_unique);

  const Alphabet alphabet = scene.alphabet();
  std::string candidate;
  while (session.attempts < max_attempts) {
    ++session.attempts;
    const std::string prompt =
        session.attempts == 1 ? build_formula_prompt(session.mu_unique, session.mu_regex)
                              : build_correction_prompt(candidate, session.diagnostic);
    candidate = exchange(prompt);
    try {
      LtlPtr f = parse_prefix(candidate, alphabet);
      const CosafetyVerdict verdict = check_cosafe(f);
      if (!verdict.is_cosafe) {
        session.diagnostic =
            (verdict.reason == CosafetyReason::AlwaysOperator
                 ? "not co-safe: the G (always) operator is not allowed"
                 : "not co-safe: negation must apply to propositions only") +
            std::string("; offending subformula: ") + *verdict.offending_subformula;
        continue;
      }
      session.formula = f;
      session.formula_text = print_prefix(f);
      return session;
    } catch (const LtlParseError& e) {
      session.diagnostic = std::string("parse error: ") + e.what();
    }
  }
  session.needs_human_rephrase = true;
  return session;
}

std::vector<LlmGuidance::Call> parse_guidance_calls(const std::string& response,
                                                    const SceneGraph& scene,
                                                    std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
    std::cerr << "guidance: " << msg << "\n";
  };

  static const std::regex call_re(
      "<call>\\s*<motion>([^<]*)</motion>\\s*<from>([^<]*)</from>\\s*"
      "<to>([^<]*)</to>\\s*</call>");
  std::vector<LlmGuidance::Call> calls;
  size_t matched = 0;
  for (std::sregex_iterator it(response.begin(), response.end(), call_re), end; it != end; ++it) {
    ++matched;
    LlmGuidance::Call c;
    c.motion = trim((*it)[1].str());
    c.from_attr = token_attr_id((*it)[2].str());
    c.to_attr = token_attr_id((*it)[3].str());
    if (c.motion.empty() || c.from_attr < 0 || c.to_attr < 0) {
      warn("dropped malformed call: " + it->str());
      continue;
    }
    if (!scene.find_attribute(c.from_attr) || !scene.find_attribute(c.to_attr)) {
      warn("plan rejected: call references unknown attribute in " + it->str());
      return {};
    }
    calls.push_back(std::move(c));
  }

  // Count opened <call> tags that the strict pattern did not consume.
  size_t opened = 0;
  for (size_t at = response.find("<call>"); at != std::string::npos;
       at = response.find("<call>", at + 6))
    ++opened;
  for (size_t i = matched; i < opened; ++i) warn("dropped malformed call: unparseable <call> tag");

  return calls;
}

std::string build_guidance_prompt(const SceneGraph& scene,
                                  const std::vector<std::string>& motions,
                                  int context_attr, const std::string& mission_rest) {
  std::ostringstream out;
  out << "You suggest an attribute-level route through a scene graph.\n\n"
      << "Attribute hierarchy:\n"
      << attribute_hierarchy(scene) << "\n"
      << "Available motions:";
  for (const std::string& m : motions) out << " " << m;
  out << "\n\nRespond with XML function calls, one per line. Example:\n"
      << "<call><motion>move</motion><from>living_room_4</from><to>kitchen_3</to></call>\n"
      << "<call><motion>reach</motion><from>kitchen_3</from><to>oven_11</to></call>\n\n"
      << "You are currently in " << scene.attribute(context_attr).token() << ".\n"
      << "Remaining mission: " << mission_rest << "\n"
      << "Reply with the function calls only.\n";
  return out.str();
}

LlmGuidance fetch_guidance(const SceneGraph& scene, const Dfa& dfa,
                           const std::vector<std::pair<int, int>>& states,
                           Transport& transport,
                           const std::vector<std::string>& extra_motions,
                           std::vector<std::string>* warnings) {
  std::vector<std::string> motions = {"move", "reach"};
  motions.insert(motions.end(), extra_motions.begin(), extra_motions.end());

  LlmGuidance out;
  for (const auto& [attr, q] : states) {
    if (dfa.is_accepting(q)) {
      out.plans[{attr, q}] = {};  // mission done: empty plan, no prompt
      continue;
    }
    const std::string prompt =
        build_guidance_prompt(scene, motions, attr, remaining_mission(dfa, q, scene));
    const std::string response =
        transport.send(prompt, std::to_string(attr) + ":" + std::to_string(q));
    std::vector<LlmGuidance::Call> calls = parse_guidance_calls(response, scene, warnings);
    if (!calls.empty()) out.plans[{attr, q}] = std::move(calls);
  }
  return out;
}

}  // namespace sgplan
