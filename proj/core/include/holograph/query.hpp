#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holograph/causal_state.hpp"
#include "holograph/errors.hpp"
#include "holograph/objective.hpp"
#include "holograph/sheaf.hpp"

namespace holograph {

enum class QueryKind { EdgeExistence, Direction, Mechanism, Confounder };

const char* query_kind_name(QueryKind k);

struct QueryCandidate {
  QueryKind kind = QueryKind::EdgeExistence;
  int i = 0;
  int j = 0;
  double epistemic = 0.0;
  double instrumental = 0.0;
  double efe_score = 0.0;  // lower is better
};

struct OracleAnswer {
  double belief = 0.5;
  double confidence = 0.0;
  long tokens_used = 0;
  std::string raw_text;  // empty for the simulator
};

/// Shared query/token budget; counters only move up and never past the
/// maxima. reserve_query() must succeed before any request is sent.
class Budget {
 public:
  Budget(int max_queries = 100, long max_tokens = 500000)
      : max_queries_(max_queries), max_tokens_(max_tokens) {}

  int max_queries() const { return max_queries_; }
  long max_tokens() const { return max_tokens_; }
  int used_queries() const { return used_queries_; }
  long used_tokens() const { return used_tokens_; }
  int remaining_queries() const { return max_queries_ - used_queries_; }

  bool exhausted() const {
    return used_queries_ >= max_queries_ || used_tokens_ >= max_tokens_;
  }

  void reserve_query() {
    if (exhausted()) throw BudgetExhausted("query budget exhausted");
    ++used_queries_;
  }

  void add_tokens(long tokens) {
    if (tokens < 0) return;
    used_tokens_ += tokens;
    if (used_tokens_ > max_tokens_) used_tokens_ = max_tokens_;
  }

 private:
  int max_queries_;
  long max_tokens_;
  int used_queries_ = 0;
  long used_tokens_ = 0;
};

/// 1 - 2|clamp(|w|, 0, 1) - 0.5|: 1 at the decision boundary, 0 at a
/// confident edge or non-edge.
double epistemic_value(double w);

/// Squared per-entry disagreement at (i, j) between projected section pairs
/// whose intersection contains both endpoints.
double instrumental_value(int i, int j,
                          const std::vector<CausalState>& sections,
                          const ContextCover& cover);

/// EFE scoring over all off-diagonal pairs: score = -(epistemic +
/// instrumental), candidates with epistemic <= uncertainty_threshold are
/// dropped, the k best are returned (never more than the remaining budget).
/// Throws BudgetExhausted when no queries remain, signalling the fit loop to
/// stop querying.
std::vector<QueryCandidate> select_queries(
    const std::vector<CausalState>& sections, const ContextCover& cover,
    const Budget& budget, int k, double uncertainty_threshold = 0.3);

/// Deterministic query-kind schedule approximating the 45/25/20/10
/// edge/direction/mechanism/confounder distribution (largest remainder on
/// the global query index).
QueryKind query_kind_for_index(int query_index);

/// Ground-truth stand-in for the LLM: belief 0.95/0.05 depending on whether
/// the queried relation holds, flipped with probability noise_rate
/// (per-query deterministic). latent_pairs feeds Confounder queries.
OracleAnswer simulated_oracle(
    const QueryCandidate& query, const BinaryGraph& truth,
    const std::vector<std::pair<int, int>>& latent_pairs, double noise_rate,
    std::uint64_t seed);

/// Bridges oracle answers into semantic-energy beliefs. Direction answers
/// produce the complementary pair of beliefs; Confounder answers are logged
/// only; the latest answer per ordered pair wins.
std::vector<EdgeBelief> answers_to_beliefs(
    const std::vector<std::pair<QueryCandidate, OracleAnswer>>& answers);

}  // namespace holograph
