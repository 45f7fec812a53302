#include "holograph/query.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "holograph/projection.hpp"

namespace holograph {

namespace {

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

/// Mean W entry over sections containing both endpoints; nan if none.
double mean_weight(int i, int j, const std::vector<CausalState>& sections) {
  double sum = 0.0;
  int count = 0;
  for (const CausalState& s : sections) {
    const int pi = s.context().index_of(i);
    const int pj = s.context().index_of(j);
    if (pi < 0 || pj < 0) continue;
    sum += s.W()(pi, pj);
    ++count;
  }
  if (count == 0) return std::nan("");
  return sum / count;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

const char* query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::EdgeExistence:
      return "edge_existence";
    case QueryKind::Direction:
      return "direction";
    case QueryKind::Mechanism:
      return "mechanism";
    case QueryKind::Confounder:
      return "confounder";
  }
  return "unknown";
}

double epistemic_value(double w) {
  const double b = clamp01(std::abs(w));
  return 1.0 - 2.0 * std::abs(b - 0.5);
}

double instrumental_value(int i, int j,
                          const std::vector<CausalState>& sections,
                          const ContextCover& cover) {
  double value = 0.0;
  for (const auto& [a, b, overlap] : cover.pairwise_intersections) {
    const int pi = overlap.index_of(i);
    const int pj = overlap.index_of(j);
    if (pi < 0 || pj < 0) continue;
    const auto& sa = sections[static_cast<std::size_t>(a)];
    const auto& sb = sections[static_cast<std::size_t>(b)];
    const ProjectionValue va = project_blocks(
        sa.W(), sa.covariance(), make_projection_plan(sa.context(), overlap));
    const ProjectionValue vb = project_blocks(
        sb.W(), sb.covariance(), make_projection_plan(sb.context(), overlap));
    const double d = va.Wt(pi, pj) - vb.Wt(pi, pj);
    value += d * d;
  }
  return value;
}

QueryKind query_kind_for_index(int query_index) {
  // Largest-remainder schedule over the 45/25/20/10 target shares.
  static constexpr double kShares[4] = {0.45, 0.25, 0.20, 0.10};
  int assigned[4] = {0, 0, 0, 0};
  for (int q = 0; q <= query_index; ++q) {
    int best = 0;
    double best_deficit = -1.0;
    for (int kind = 0; kind < 4; ++kind) {
      const double deficit = kShares[kind] * (q + 1) - assigned[kind];
      if (deficit > best_deficit + 1e-12) {
        best_deficit = deficit;
        best = kind;
      }
    }
    if (q == query_index) return static_cast<QueryKind>(best);
    ++assigned[best];
  }
  return QueryKind::EdgeExistence;
}

std::vector<QueryCandidate> select_queries(
    const std::vector<CausalState>& sections, const ContextCover& cover,
    const Budget& budget, int k, double uncertainty_threshold) {
  if (k < 1) throw InvalidDimension("select_queries needs k >= 1");
  if (budget.remaining_queries() <= 0)
    throw BudgetExhausted("no queries remaining");

  std::vector<QueryCandidate> candidates;
  const Context& ground = cover.ground;
  for (int a = 0; a < ground.size(); ++a) {
    for (int b = 0; b < ground.size(); ++b) {
      if (a == b) continue;
      const int i = ground[a];
      const int j = ground[b];
      const double w = mean_weight(i, j, sections);
      if (std::isnan(w)) continue;  // pair appears in no section
      QueryCandidate c;
      c.i = i;
      c.j = j;
      c.epistemic = epistemic_value(w);
      if (c.epistemic <= uncertainty_threshold) continue;  // strict cut
      c.instrumental = instrumental_value(i, j, sections, cover);
      c.efe_score = -(c.epistemic + c.instrumental);
      candidates.push_back(c);
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const QueryCandidate& a, const QueryCandidate& b) {
              if (a.efe_score != b.efe_score) return a.efe_score < b.efe_score;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });

  const int limit = std::min({k, budget.remaining_queries(),
                              static_cast<int>(candidates.size())});
  candidates.resize(static_cast<std::size_t>(std::max(limit, 0)));
  for (std::size_t q = 0; q < candidates.size(); ++q)
    candidates[q].kind =
        query_kind_for_index(budget.used_queries() + static_cast<int>(q));
  return candidates;
}

OracleAnswer simulated_oracle(
    const QueryCandidate& query, const BinaryGraph& truth,
    const std::vector<std::pair<int, int>>& latent_pairs, double noise_rate,
    std::uint64_t seed) {
  const int pi = truth.context.index_of(query.i);
  const int pj = truth.context.index_of(query.j);
  if (pi < 0 || pj < 0)
    throw InvalidContext("simulated oracle: query outside the ground truth");

  bool holds = false;
  switch (query.kind) {
    case QueryKind::EdgeExistence:
    case QueryKind::Mechanism:
      holds = truth.adjacency(pi, pj);
      break;
    case QueryKind::Direction:
      holds = truth.adjacency(pi, pj) && !truth.adjacency(pj, pi);
      break;
    case QueryKind::Confounder:
      for (const auto& [a, b] : latent_pairs) {
        if ((a == query.i && b == query.j) || (a == query.j && b == query.i)) {
          holds = true;
          break;
        }
      }
      break;
  }

  double belief = holds ? 0.95 : 0.05;
  if (noise_rate > 0.0) {
    std::uint64_t h = mix(seed, static_cast<std::uint64_t>(query.kind) + 1);
    h = mix(h, static_cast<std::uint64_t>(query.i) + 101);
    h = mix(h, static_cast<std::uint64_t>(query.j) + 99991);
    std::mt19937_64 rng(h);
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < noise_rate)
      belief = 1.0 - belief;
  }

  OracleAnswer answer;
  answer.belief = belief;
  answer.confidence = 1.0 - noise_rate;
  answer.tokens_used = 0;
  return answer;
}

std::vector<EdgeBelief> answers_to_beliefs(
    const std::vector<std::pair<QueryCandidate, OracleAnswer>>& answers) {
  std::map<std::pair<int, int>, EdgeBelief> latest;
  for (const auto& [query, answer] : answers) {
    switch (query.kind) {
      case QueryKind::EdgeExistence:
      case QueryKind::Mechanism:
        latest[{query.i, query.j}] =
            EdgeBelief{query.i, query.j, answer.belief, answer.confidence};
        break;
      case QueryKind::Direction:
        latest[{query.i, query.j}] =
            EdgeBelief{query.i, query.j, answer.belief, answer.confidence};
        latest[{query.j, query.i}] = EdgeBelief{query.j, query.i,
                                                1.0 - answer.belief,
                                                answer.confidence};
        break;
      case QueryKind::Confounder:
        break;  // no update rule for M is defined; logged upstream only
    }
  }
  std::vector<EdgeBelief> out;
  out.reserve(latest.size());
  for (const auto& [key, b] : latest) out.push_back(b);
  return out;
}

}  // namespace holograph
