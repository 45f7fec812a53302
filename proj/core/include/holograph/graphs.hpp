#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holograph/causal_state.hpp"

namespace holograph {

/// A known causal structure over observed variables, plus the unordered
/// observed pairs that share a hidden parent (empty unless generated with
/// latent variables).
struct GroundTruth {
  BinaryGraph graph;
  std::vector<std::pair<int, int>> latent_pairs;
};

/// Erdos-Renyi DAG: a uniformly random permutation serves as topological
/// order and each forward pair is an edge independently with probability p.
GroundTruth gen_er(int n, double p, std::uint64_t seed);

/// Preferential attachment: node t attaches m = round(avg_degree / 2) edges
/// to earlier nodes with probability proportional to degree + 1, oriented
/// old -> new.
GroundTruth gen_sf(int n, double avg_degree, std::uint64_t seed);

/// ER DAG over n_obs + n_latent nodes where every latent node has at least
/// two observed children (resampled until satisfied). The observed ground
/// truth is the discretized projection of the full state onto the observed
/// indices; latent_pairs lists observed pairs sharing a latent parent.
std::pair<GroundTruth, CausalState> gen_latent(int n_obs, int n_latent,
                                               std::uint64_t seed);

/// 11-variable adjacency CSV with a header row of variable names. Throws
/// FormatError on a wrong variable count or a cyclic adjacency.
std::pair<GroundTruth, std::vector<std::string>> load_sachs(
    const std::string& path);
void save_sachs(const std::string& path, const GroundTruth& truth,
                const std::vector<std::string>& names);

}  // namespace holograph
