#include "holograph/metrics.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "holograph/errors.hpp"

namespace holograph {

namespace {

void require_same_size(const BinaryGraph& a, const BinaryGraph& b) {
  if (a.size() != b.size())
    throw InvalidComparison("graphs have different sizes");
}

bool dfs_cycle(const BinaryGraph& g, int v, std::vector<int>& color) {
  color[static_cast<std::size_t>(v)] = 1;  // on stack
  for (int w = 0; w < g.size(); ++w) {
    if (!g.adjacency(v, w)) continue;
    const int c = color[static_cast<std::size_t>(w)];
    if (c == 1) return true;
    if (c == 0 && dfs_cycle(g, w, color)) return true;
  }
  color[static_cast<std::size_t>(v)] = 2;
  return false;
}

/// Proper descendants of v (v excluded unless reachable through a cycle,
/// which acyclicity rules out).
std::vector<bool> descendants(const BinaryGraph& g, int v) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  std::queue<int> frontier;
  for (int w = 0; w < g.size(); ++w)
    if (g.adjacency(v, w) && !seen[static_cast<std::size_t>(w)]) {
      seen[static_cast<std::size_t>(w)] = true;
      frontier.push(w);
    }
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int w = 0; w < g.size(); ++w)
      if (g.adjacency(u, w) && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        frontier.push(w);
      }
  }
  return seen;
}

}  // namespace

bool has_cycle(const BinaryGraph& graph) {
  std::vector<int> color(static_cast<std::size_t>(graph.size()), 0);
  for (int v = 0; v < graph.size(); ++v)
    if (color[static_cast<std::size_t>(v)] == 0 &&
        dfs_cycle(graph, v, color))
      return true;
  return false;
}

int shd(const BinaryGraph& estimated, const BinaryGraph& truth) {
  require_same_size(estimated, truth);
  int count = 0;
  for (int i = 0; i < truth.size(); ++i) {
    for (int j = i + 1; j < truth.size(); ++j) {
      const bool e_ij = estimated.adjacency(i, j);
      const bool e_ji = estimated.adjacency(j, i);
      const bool t_ij = truth.adjacency(i, j);
      const bool t_ji = truth.adjacency(j, i);
      const bool e_any = e_ij || e_ji;
      const bool t_any = t_ij || t_ji;
      if (e_any != t_any) {
        ++count;  // addition or deletion
      } else if (e_any && (e_ij != t_ij || e_ji != t_ji)) {
        ++count;  // same skeleton, different orientation: one reversal
      }
    }
  }
  return count;
}

double f1(const BinaryGraph& estimated, const BinaryGraph& truth) {
  require_same_size(estimated, truth);
  int tp = 0, fp = 0, fn = 0;
  for (int i = 0; i < truth.size(); ++i) {
    for (int j = 0; j < truth.size(); ++j) {
      if (i == j) continue;
      const bool e = estimated.adjacency(i, j);
      const bool t = truth.adjacency(i, j);
      if (e && t) ++tp;
      else if (e) ++fp;
      else if (t) ++fn;
    }
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / (tp + fp);
  const double recall = static_cast<double>(tp) / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

bool d_separated(const BinaryGraph& graph, int x, int y,
                 const std::vector<int>& Z) {
  const int n = graph.size();
  std::vector<bool> in_z(static_cast<std::size_t>(n), false);
  for (int z : Z) in_z[static_cast<std::size_t>(z)] = true;

  // Ancestors of Z, needed for the collider-opening rule.
  std::vector<bool> anc_z(in_z);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (graph.adjacency(i, j) && anc_z[static_cast<std::size_t>(j)] &&
            !anc_z[static_cast<std::size_t>(i)]) {
          anc_z[static_cast<std::size_t>(i)] = true;
          changed = true;
        }
  }

  // Reachability over (node, arrived-through-incoming-edge) states.
  std::vector<bool> visited(static_cast<std::size_t>(2 * n), false);
  std::queue<std::pair<int, bool>> frontier;  // (node, entered_via_arrow_in)
  frontier.push({x, false});
  auto push = [&](int v, bool via_in) {
    const std::size_t key =
        static_cast<std::size_t>(v) * 2 + (via_in ? 1 : 0);
    if (!visited[key]) {
      visited[key] = true;
      frontier.push({v, via_in});
    }
  };
  visited[static_cast<std::size_t>(x) * 2] = true;

  while (!frontier.empty()) {
    auto [v, via_in] = frontier.front();
    frontier.pop();
    if (v == y && v != x) return false;  // active path reached y

    const bool v_in_z = in_z[static_cast<std::size_t>(v)];
    if (!via_in) {
      // Entered against an arrow (or started at x): pass through when not
      // conditioned on, in either direction.
      if (!v_in_z) {
        for (int w = 0; w < n; ++w) {
          if (graph.adjacency(w, v)) push(w, false);
          if (graph.adjacency(v, w)) push(w, true);
        }
      }
    } else {
      // Entered along an arrow: chain continues unless conditioned;
      // collider opens only when v has a conditioned descendant.
      if (!v_in_z)
        for (int w = 0; w < n; ++w)
          if (graph.adjacency(v, w)) push(w, true);
      if (anc_z[static_cast<std::size_t>(v)])
        for (int w = 0; w < n; ++w)
          if (graph.adjacency(w, v)) push(w, false);
    }
  }
  return true;
}

int sid(const BinaryGraph& estimated, const BinaryGraph& truth) {
  require_same_size(estimated, truth);
  if (has_cycle(estimated) || has_cycle(truth))
    throw InvalidComparison("sid requires acyclic inputs");

  const int n = truth.size();
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const std::vector<bool> de_i = descendants(truth, i);

    std::vector<int> pa_est;
    for (int k = 0; k < n; ++k)
      if (estimated.adjacency(k, i)) pa_est.push_back(k);

    // Back-door validity is a property of (i, Z) plus the target: remove
    // i's outgoing edges once per source.
    BinaryGraph backdoor = truth;
    for (int w = 0; w < n; ++w) backdoor.adjacency(i, w) = false;

    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool j_is_parent =
          std::find(pa_est.begin(), pa_est.end(), j) != pa_est.end();
      bool valid;
      if (j_is_parent) {
        // Adjusting for the target itself is only harmless when the true
        // effect of i on j is zero.
        valid = !de_i[static_cast<std::size_t>(j)];
      } else {
        bool z_hits_descendant = false;
        for (int z : pa_est)
          if (de_i[static_cast<std::size_t>(z)]) {
            z_hits_descendant = true;
            break;
          }
        valid = !z_hits_descendant && d_separated(backdoor, i, j, pa_est);
      }
      if (!valid) ++count;
    }
  }
  return count;
}

}  // namespace holograph
