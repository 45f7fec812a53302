#pragma once

#include <string>
#include <vector>

#include "holograph/query.hpp"

namespace holograph {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
/// The API key is read from the named environment variable.
struct EndpointConfig {
  std::string base_url = "http://localhost:10000";
  std::string model = "deepseek-v3.2";
  std::string api_key_env = "HOLOGRAPH_API_KEY";
  double temperature = 0.1;
  int max_tokens = 4096;
  int max_retries = 3;
  int backoff_initial_ms = 250;
  std::string audit_log_path;  // JSON-lines request/response audit, optional
};

/// Parses a chat reply into (belief, confidence). Returns false when no
/// verdict token is found.
bool parse_oracle_reply(const std::string& text, double& belief,
                        double& confidence);

/// Renders the fixed prompt template for a query about two named variables.
std::string render_query_prompt(const QueryCandidate& query,
                                const std::string& name_i,
                                const std::string& name_j);

class LlmOracle {
 public:
  explicit LlmOracle(EndpointConfig config) : config_(std::move(config)) {}

  /// Reserves budget, sends the chat request (retrying transport failures
  /// with exponential backoff), and parses the verdict. An unparseable
  /// reply triggers one reprompt, then falls back to a neutral belief.
  OracleAnswer ask(const QueryCandidate& query,
                   const std::vector<std::string>& variable_names,
                   Budget& budget);

 private:
  std::string complete(const std::string& prompt, Budget& budget);

  EndpointConfig config_;
};

}  // namespace holograph
