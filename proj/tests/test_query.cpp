#include <doctest.h>

#include "holograph/errors.hpp"
#include "holograph/query.hpp"

using namespace holograph;

namespace {

CausalState edge_state(int n, std::vector<std::tuple<int, int, double>> edges) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j, w] : edges) W(i, j) = w;
  return CausalState(Context::full(n), W, Eigen::MatrixXd::Identity(n, n));
}

BinaryGraph single_edge_truth(int n, int i, int j) {
  BinaryGraph g;
  g.context = Context::full(n);
  g.adjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
      n, n, false);
  g.adjacency(i, j) = true;
  return g;
}

}  // namespace

TEST_CASE("epistemic value peaks at the decision boundary") {
  CHECK(epistemic_value(0.5) == doctest::Approx(1.0));
  CHECK(epistemic_value(-0.5) == doctest::Approx(1.0));
  CHECK(epistemic_value(0.0) == doctest::Approx(0.0));
  CHECK(epistemic_value(1.0) == doctest::Approx(0.0));
  CHECK(epistemic_value(7.0) == doctest::Approx(0.0));  // clamped
  CHECK(epistemic_value(0.85) == doctest::Approx(0.3));
}

TEST_CASE("budget counters saturate and reservations fail when spent") {
  Budget b(2, 100);
  CHECK_FALSE(b.exhausted());
  b.reserve_query();
  b.reserve_query();
  CHECK(b.exhausted());
  CHECK(b.remaining_queries() == 0);
  CHECK_THROWS_AS(b.reserve_query(), BudgetExhausted);

  Budget t(10, 50);
  t.add_tokens(49);
  CHECK_FALSE(t.exhausted());
  t.add_tokens(1000);
  CHECK(t.used_tokens() == 50);  // clamped at the maximum
  CHECK(t.exhausted());
  CHECK_THROWS_AS(t.reserve_query(), BudgetExhausted);
  t.add_tokens(-5);  // ignored
  CHECK(t.used_tokens() == 50);
}

TEST_CASE("query selection prefers maximal uncertainty") {
  const std::vector<CausalState> sections = {
      edge_state(3, {{0, 1, 0.5}, {1, 2, 0.9}})};
  const ContextCover cover =
      ContextCover::make(Context::full(3), {Context::full(3)});
  Budget budget(10, 1000);
  const auto picked = select_queries(sections, cover, budget, 1);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0].i == 0);
  CHECK(picked[0].j == 1);
  CHECK(picked[0].epistemic == doctest::Approx(1.0));
}

TEST_CASE("candidates at or below the uncertainty threshold are dropped") {
  // Confident weights (epistemic 0.2) fall below the default 0.3 cut.
  const std::vector<CausalState> sections = {
      edge_state(3, {{0, 1, 0.9}, {1, 2, 0.1}})};
  const ContextCover cover =
      ContextCover::make(Context::full(3), {Context::full(3)});
  Budget budget(10, 1000);
  CHECK(select_queries(sections, cover, budget, 6).empty());

  // The cut is strict: epistemic(0.75) = 0.5 exactly (all values binary
  // exact) is not returned under a threshold of 0.5.
  const std::vector<CausalState> boundary = {edge_state(3, {{0, 1, 0.75}})};
  CHECK(select_queries(boundary, cover, budget, 6, 0.5).empty());
}

TEST_CASE("selection never exceeds the remaining budget and fails when none "
          "is left") {
  const std::vector<CausalState> sections = {
      edge_state(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {0, 3, 0.5}})};
  const ContextCover cover =
      ContextCover::make(Context::full(4), {Context::full(4)});
  Budget two(2, 1000);
  CHECK(select_queries(sections, cover, two, 10).size() == 2);

  Budget spent(1, 1000);
  spent.reserve_query();
  CHECK_THROWS_AS(select_queries(sections, cover, spent, 1), BudgetExhausted);
}

TEST_CASE("disagreement between overlapping sections raises the score") {
  const ContextCover cover = ContextCover::make(
      Context::full(3), {Context({0, 1}), Context({0, 1, 2})});
  const CausalState a(cover.parts[0],
                      (Eigen::MatrixXd(2, 2) << 0, 0.5, 0, 0).finished(),
                      Eigen::MatrixXd::Identity(2, 2));
  const CausalState agree(
      cover.parts[1],
      (Eigen::MatrixXd(3, 3) << 0, 0.5, 0, 0, 0, 0, 0, 0, 0).finished(),
      Eigen::MatrixXd::Identity(3, 3));
  const CausalState clash(
      cover.parts[1],
      (Eigen::MatrixXd(3, 3) << 0, -0.5, 0, 0, 0, 0, 0, 0, 0).finished(),
      Eigen::MatrixXd::Identity(3, 3));
  CHECK(instrumental_value(0, 1, {a, agree}, cover) == doctest::Approx(0.0));
  CHECK(instrumental_value(0, 1, {a, clash}, cover) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("query kinds follow the 45/25/20/10 schedule") {
  int counts[4] = {0, 0, 0, 0};
  for (int q = 0; q < 100; ++q)
    ++counts[static_cast<int>(query_kind_for_index(q))];
  CHECK(counts[static_cast<int>(QueryKind::EdgeExistence)] == 45);
  CHECK(counts[static_cast<int>(QueryKind::Direction)] == 25);
  CHECK(counts[static_cast<int>(QueryKind::Mechanism)] == 20);
  CHECK(counts[static_cast<int>(QueryKind::Confounder)] == 10);
  // The schedule is a pure function of the index.
  for (int q = 0; q < 10; ++q)
    CHECK(query_kind_for_index(q) == query_kind_for_index(q));
}

TEST_CASE("simulated oracle answers from the ground truth") {
  const BinaryGraph truth = single_edge_truth(3, 0, 1);
  QueryCandidate q;
  q.kind = QueryKind::EdgeExistence;
  q.i = 0;
  q.j = 1;
  const OracleAnswer yes = simulated_oracle(q, truth, {}, 0.0, 42);
  CHECK(yes.belief == doctest::Approx(0.95));
  CHECK(yes.confidence == doctest::Approx(1.0));
  q.i = 1;
  q.j = 0;
  const OracleAnswer no = simulated_oracle(q, truth, {}, 0.0, 42);
  CHECK(no.belief == doctest::Approx(0.05));

  // Full noise always flips and zeroes the confidence.
  const OracleAnswer flipped = simulated_oracle(q, truth, {}, 1.0, 42);
  CHECK(flipped.belief == doctest::Approx(0.95));
  CHECK(flipped.confidence == doctest::Approx(0.0));

  // Determinism: same query/seed, same answer.
  const OracleAnswer again = simulated_oracle(q, truth, {}, 0.35, 7);
  CHECK(simulated_oracle(q, truth, {}, 0.35, 7).belief == again.belief);

  QueryCandidate conf;
  conf.kind = QueryKind::Confounder;
  conf.i = 0;
  conf.j = 2;
  CHECK(simulated_oracle(conf, truth, {{0, 2}}, 0.0, 1).belief ==
        doctest::Approx(0.95));
  CHECK(simulated_oracle(conf, truth, {}, 0.0, 1).belief ==
        doctest::Approx(0.05));
}

TEST_CASE("answers become beliefs with direction symmetry") {
  QueryCandidate edge;
  edge.kind = QueryKind::EdgeExistence;
  edge.i = 0;
  edge.j = 1;
  QueryCandidate dir;
  dir.kind = QueryKind::Direction;
  dir.i = 2;
  dir.j = 3;
  QueryCandidate conf;
  conf.kind = QueryKind::Confounder;
  conf.i = 0;
  conf.j = 3;
  OracleAnswer strong;
  strong.belief = 0.9;
  strong.confidence = 0.8;
  const auto beliefs =
      answers_to_beliefs({{edge, strong}, {dir, strong}, {conf, strong}});
  REQUIRE(beliefs.size() == 3);  // edge + direction pair; confounder logged
  CHECK(beliefs[0].i == 0);
  CHECK(beliefs[0].j == 1);
  CHECK(beliefs[0].belief == doctest::Approx(0.9));
  bool saw_forward = false, saw_backward = false;
  for (const EdgeBelief& b : beliefs) {
    if (b.i == 2 && b.j == 3) {
      saw_forward = true;
      CHECK(b.belief == doctest::Approx(0.9));
    }
    if (b.i == 3 && b.j == 2) {
      saw_backward = true;
      CHECK(b.belief == doctest::Approx(0.1));
    }
  }
  CHECK(saw_forward);
  CHECK(saw_backward);
}
