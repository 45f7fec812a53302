#include "holograph/llm_client.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace holograph {

namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool contains_word(const std::string& text, const std::string& word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !std::isalpha(static_cast<unsigned char>(
                                         text[pos - 1]));
    const std::size_t end = pos + word.size();
    const bool right_ok =
        end >= text.size() ||
        !std::isalpha(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return true;
    pos = end;
  }
  return false;
}

void append_audit(const std::string& path, const json& entry) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  out << entry.dump() << "\n";
}

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

bool parse_oracle_reply(const std::string& text, double& belief,
                        double& confidence) {
  const std::string t = lower(text);
  const bool yes = contains_word(t, "yes");
  const bool no = contains_word(t, "no");
  if (yes == no) return false;  // neither, or contradictory

  double c = 1.0;
  if (t.find("confidence") != std::string::npos) {
    if (t.find("high") != std::string::npos)
      c = 1.0;
    else if (t.find("medium") != std::string::npos)
      c = 0.7;
    else if (t.find("low") != std::string::npos)
      c = 0.4;
  }
  // Base belief 0.95 / 0.05 scaled toward 0.5 by the stated confidence.
  belief = 0.5 + (yes ? 0.45 : -0.45) * c;
  confidence = c;
  return true;
}

std::string render_query_prompt(const QueryCandidate& query,
                                const std::string& name_i,
                                const std::string& name_j) {
  switch (query.kind) {
    case QueryKind::EdgeExistence:
      return "Consider the variables '" + name_i + "' and '" + name_j +
             "'. Does '" + name_i + "' directly cause '" + name_j +
             "'? Answer with 'yes' or 'no' and state your confidence "
             "(high/medium/low).";
    case QueryKind::Direction:
      return "Between '" + name_i + "' and '" + name_j +
             "', is the causal direction from '" + name_i + "' to '" +
             name_j + "'? Answer with 'yes' or 'no' and state your "
             "confidence (high/medium/low).";
    case QueryKind::Mechanism:
      return "Is there a plausible physical or biological mechanism by "
             "which '" + name_i + "' directly influences '" + name_j +
             "'? Answer with 'yes' or 'no' and state your confidence "
             "(high/medium/low).";
    case QueryKind::Confounder:
      return "Could an unobserved common cause influence both '" + name_i +
             "' and '" + name_j + "'? Answer with 'yes' or 'no' and state "
             "your confidence (high/medium/low).";
  }
  return "";
}

std::string LlmOracle::complete(const std::string& prompt, Budget& budget) {
  json body = {
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"max_tokens", config_.max_tokens},
      {"messages",
       json::array({{{"role", "user"}, {"content", prompt}}})},
  };

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  int backoff = config_.backoff_initial_ms;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (res && res->status == 200) {
      json reply = json::parse(res->body, nullptr, false);
      if (!reply.is_discarded()) {
        long tokens = 0;
        if (reply.contains("usage") &&
            reply["usage"].contains("total_tokens"))
          tokens = reply["usage"]["total_tokens"].get<long>();
        budget.add_tokens(tokens);
        std::string content;
        if (reply.contains("choices") && !reply["choices"].empty())
          content = reply["choices"][0]["message"]["content"]
                        .get<std::string>();
        append_audit(config_.audit_log_path,
                     {{"ts_ms", now_ms()},
                      {"prompt", prompt},
                      {"reply", content},
                      {"tokens", tokens}});
        return content;
      }
    }
    if (attempt < config_.max_retries) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
  }
  throw OracleUnavailable("chat endpoint unreachable after retries");
}

OracleAnswer LlmOracle::ask(const QueryCandidate& query,
                            const std::vector<std::string>& variable_names,
                            Budget& budget) {
  budget.reserve_query();  // throws BudgetExhausted before anything is sent

  auto name_of = [&](int idx) {
    if (idx >= 0 && idx < static_cast<int>(variable_names.size()))
      return variable_names[static_cast<std::size_t>(idx)];
    return std::string("X") + std::to_string(idx);
  };
  const std::string prompt =
      render_query_prompt(query, name_of(query.i), name_of(query.j));

  OracleAnswer answer;
  answer.raw_text = complete(prompt, budget);
  if (parse_oracle_reply(answer.raw_text, answer.belief, answer.confidence)) {
    answer.tokens_used = 0;  // tracked on the budget
    return answer;
  }

  // One reprompt asking for a bare verdict, then the neutral fallback.
  answer.raw_text = complete(
      prompt + " Reply with exactly one word: yes or no.", budget);
  if (parse_oracle_reply(answer.raw_text, answer.belief, answer.confidence))
    return answer;

  answer.belief = 0.5;
  answer.confidence = 0.0;
  return answer;
}

}  // namespace holograph
