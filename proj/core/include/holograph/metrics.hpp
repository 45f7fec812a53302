#pragma once

#include <vector>

#include "holograph/causal_state.hpp"

namespace holograph {

/// DFS cycle check on the directed adjacency.
bool has_cycle(const BinaryGraph& graph);

/// Structural Hamming distance over unordered pairs: one count per
/// added/deleted adjacency, one count per reversed edge.
int shd(const BinaryGraph& estimated, const BinaryGraph& truth);

/// Directed-edge F1; 0 by convention when there are no true positives.
double f1(const BinaryGraph& estimated, const BinaryGraph& truth);

/// Bayes-ball d-separation of x and y given Z. Requires an acyclic graph and
/// x, y outside Z.
bool d_separated(const BinaryGraph& graph, int x, int y,
                 const std::vector<int>& Z);

/// Structural intervention distance: ordered pairs (i, j) whose estimated
/// parent set of i fails the parent-adjustment validity criterion for the
/// effect of i on j in the true graph. Throws InvalidComparison on cyclic or
/// size-mismatched inputs.
int sid(const BinaryGraph& estimated, const BinaryGraph& truth);

}  // namespace holograph
