// Independent reference implementations used only by tests. These are
// deliberately written with different algorithms than the library code they
// check (series summation instead of scaling-and-squaring, moralization
// instead of Bayes ball, Kahn instead of DFS, ...).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "holograph/causal_state.hpp"

namespace oracles {

/// Plain Taylor series for exp(X); adequate for the small norms used here.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& X, int terms = 60) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= terms; ++k) {
    term = (term * X / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

/// Partial Neumann series W_OH * sum_{k<=terms} W_HH^k.
inline Eigen::MatrixXd neumann_absorption(const Eigen::MatrixXd& W_OH,
                                          const Eigen::MatrixXd& W_HH,
                                          int terms = 60) {
  const Eigen::Index h = W_HH.rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(h, h);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(h, h);
  for (int k = 1; k <= terms; ++k) {
    power = (power * W_HH).eval();
    acc += power;
  }
  return W_OH * acc;
}

/// Cycle check by Kahn's topological sort.
inline bool kahn_has_cycle(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& adj) {
  const int n = static_cast<int>(adj.rows());
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj(i, j)) ++indeg[j];
  std::vector<int> stack;
  for (int j = 0; j < n; ++j)
    if (indeg[j] == 0) stack.push_back(j);
  int removed = 0;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    ++removed;
    for (int j = 0; j < n; ++j)
      if (adj(i, j) && --indeg[j] == 0) stack.push_back(j);
  }
  return removed != n;
}

/// d-separation by moralization: take the ancestral graph of {x, y} u Z,
/// moralize (marry parents, drop orientation), remove Z, and test undirected
/// connectivity of x and y.
inline bool moral_d_separated(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& adj, int x,
    int y, const std::vector<int>& Z) {
  const int n = static_cast<int>(adj.rows());
  std::vector<bool> keep(n, false);
  std::vector<int> frontier = {x, y};
  for (int z : Z) frontier.push_back(z);
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (int p = 0; p < n; ++p)
      if (adj(p, v) && !keep[p]) frontier.push_back(p);
  }
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> moral =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n,
                                                                    false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (keep[i] && keep[j] && adj(i, j)) {
        moral(i, j) = moral(j, i) = true;
        for (int k = 0; k < n; ++k)  // marry co-parents of j
          if (keep[k] && k != i && adj(k, j)) moral(i, k) = moral(k, i) = true;
      }
  std::vector<bool> blocked(n, false);
  for (int z : Z) blocked[z] = true;
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {x};
  seen[x] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == y) return false;
    for (int w = 0; w < n; ++w)
      if (moral(v, w) && keep[w] && !seen[w] && !blocked[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return true;
}

/// SID by direct definition using the moralization d-separation oracle:
/// count ordered pairs (i, j) where Pa_est(i) is not a valid adjustment set
/// for the effect of i on j in the true graph.
inline int brute_sid(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& est,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& truth) {
  const int n = static_cast<int>(truth.rows());
  int invalid = 0;
  for (int i = 0; i < n; ++i) {
    // Descendants of i in the true graph (excluding i).
    std::vector<bool> desc(n, false);
    std::vector<int> stack = {i};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w)
        if (truth(v, w) && !desc[w]) {
          desc[w] = true;
          stack.push_back(w);
        }
    }
    std::vector<int> Z;
    for (int p = 0; p < n; ++p)
      if (est(p, i)) Z.push_back(p);
    // Backdoor graph: true graph minus i's outgoing edges.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> backdoor = truth;
    for (int w = 0; w < n; ++w) backdoor(i, w) = false;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      bool ok;
      if (std::find(Z.begin(), Z.end(), j) != Z.end()) {
        // A parent declared for i that is actually a descendant of i cannot
        // be adjusted for.
        ok = !desc[j];
      } else {
        bool z_clean = true;
        for (int z : Z)
          if (desc[z]) z_clean = false;
        ok = z_clean && moral_d_separated(backdoor, i, j, Z);
      }
      if (!ok) ++invalid;
    }
  }
  return invalid;
}

/// Enumerates every directed graph on n labelled nodes without self-loops
/// (all 2^(n(n-1)) of them) and calls fn on each adjacency.
inline void for_each_digraph(
    int n, const std::function<void(const Eigen::Matrix<
               bool, Eigen::Dynamic, Eigen::Dynamic>&)>& fn) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) slots.emplace_back(i, j);
  const std::uint64_t total = 1ull << slots.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n,
                                                                      false);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask & (1ull << s)) adj(slots[s].first, slots[s].second) = true;
    fn(adj);
  }
}

/// Central finite difference (f(x+h) - f(x-h)) / 2h.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Sum over all directed paths i -> ... -> j whose interior nodes all lie in
/// `interior` of the product of edge weights. Exact marginalization oracle
/// for DAG weight matrices.
inline double path_weight_sum(const Eigen::MatrixXd& W,
                              const std::set<int>& interior, int i, int j) {
  const int n = static_cast<int>(W.rows());
  double total = 0.0;
  std::function<void(int, double, std::vector<bool>&)> walk =
      [&](int v, double prod, std::vector<bool>& used) {
        for (int w = 0; w < n; ++w) {
          if (W(v, w) == 0.0 || used[w]) continue;
          if (w == j) {
            total += prod * W(v, w);
            continue;
          }
          if (!interior.count(w)) continue;
          used[w] = true;
          walk(w, prod * W(v, w), used);
          used[w] = false;
        }
      };
  std::vector<bool> used(n, false);
  used[i] = true;
  walk(i, 1.0, used);
  return total;
}

}  // namespace oracles
