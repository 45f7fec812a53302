#include "holograph/graphs.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "holograph/errors.hpp"
#include "holograph/metrics.hpp"
#include "holograph/projection.hpp"

namespace holograph {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix empty_adjacency(int n) {
  return BoolMatrix::Constant(n, n, false);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace and a trailing CR from DOS line endings.
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  return fields;
}

}  // namespace

GroundTruth gen_er(int n, double p, std::uint64_t seed) {
  if (n < 1) throw InvalidDimension("gen_er needs n >= 1");
  if (p <= 0.0 || p >= 1.0)
    throw InvalidDimension("gen_er needs p in (0, 1)");

  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GroundTruth truth;
  truth.graph.context = Context::full(n);
  truth.graph.adjacency = empty_adjacency(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (unif(rng) < p)
        truth.graph.adjacency(order[static_cast<std::size_t>(a)],
                              order[static_cast<std::size_t>(b)]) = true;
  return truth;
}

GroundTruth gen_sf(int n, double avg_degree, std::uint64_t seed) {
  if (n < 1) throw InvalidDimension("gen_sf needs n >= 1");
  if (avg_degree < 1.0)
    throw InvalidDimension("gen_sf needs avg_degree >= 1");

  const int m = std::max(1, static_cast<int>(std::lround(avg_degree / 2.0)));
  std::mt19937_64 rng(seed);

  GroundTruth truth;
  truth.graph.context = Context::full(n);
  truth.graph.adjacency = empty_adjacency(n);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);

  for (int t = 1; t < n; ++t) {
    const int attach = std::min(m, t);
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < attach) {
      // Sample without replacement, weight = degree + 1.
      double total = 0.0;
      for (int v = 0; v < t; ++v)
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end())
          total += degree[static_cast<std::size_t>(v)] + 1.0;
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      int pick = -1;
      for (int v = 0; v < t; ++v) {
        if (std::find(chosen.begin(), chosen.end(), v) != chosen.end())
          continue;
        r -= degree[static_cast<std::size_t>(v)] + 1.0;
        if (r <= 0.0) {
          pick = v;
          break;
        }
      }
      if (pick < 0) pick = t - 1;  // numeric edge of the partition
      chosen.push_back(pick);
    }
    for (int v : chosen) {
      truth.graph.adjacency(v, t) = true;  // old -> new keeps acyclicity
      ++degree[static_cast<std::size_t>(v)];
      ++degree[static_cast<std::size_t>(t)];
    }
  }
  return truth;
}

std::pair<GroundTruth, CausalState> gen_latent(int n_obs, int n_latent,
                                               std::uint64_t seed) {
  if (n_obs < 2) throw InvalidDimension("gen_latent needs n_obs >= 2");
  if (n_latent < 1) throw InvalidDimension("gen_latent needs n_latent >= 1");

  const int total = n_obs + n_latent;
  const double p = std::min(0.5, 3.0 / total);

  for (std::uint64_t attempt = 0;; ++attempt) {
    // Deterministic resampling stream per (seed, attempt).
    const std::uint64_t s = seed + attempt * 0x9e3779b97f4a7c15ULL;
    GroundTruth full_truth = gen_er(total, p, s);
    auto& adj = full_truth.graph.adjacency;
    std::mt19937_64 rng(s ^ 0x517cc1b727220a95ULL);

    // Every latent node must cause at least two observed variables.
    bool ok = true;
    for (int h = n_obs; h < total && ok; ++h) {
      int children = 0;
      for (int o = 0; o < n_obs; ++o)
        if (adj(h, o)) ++children;
      if (children < 2) ok = false;
    }
    if (!ok) continue;

    std::uniform_real_distribution<double> mag(0.4, 0.8);
    std::uniform_int_distribution<int> sign(0, 1);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(total, total);
    for (int i = 0; i < total; ++i)
      for (int j = 0; j < total; ++j)
        if (adj(i, j)) W(i, j) = (sign(rng) ? 1.0 : -1.0) * mag(rng);

    CausalState full_state(Context::full(total), std::move(W),
                           Eigen::MatrixXd::Identity(total, total));
    std::vector<int> observed_ids(static_cast<std::size_t>(n_obs));
    std::iota(observed_ids.begin(), observed_ids.end(), 0);
    const CausalState projected =
        project(full_state, Context(observed_ids));

    GroundTruth truth;
    truth.graph = projected.discretize(0.3);
    if (has_cycle(truth.graph)) continue;  // absorption can merge paths

    for (int h = n_obs; h < total; ++h) {
      std::vector<int> children;
      for (int o = 0; o < n_obs; ++o)
        if (adj(h, o)) children.push_back(o);
      for (std::size_t a = 0; a < children.size(); ++a)
        for (std::size_t b = a + 1; b < children.size(); ++b)
          truth.latent_pairs.emplace_back(children[a], children[b]);
    }
    std::sort(truth.latent_pairs.begin(), truth.latent_pairs.end());
    truth.latent_pairs.erase(
        std::unique(truth.latent_pairs.begin(), truth.latent_pairs.end()),
        truth.latent_pairs.end());
    return {std::move(truth), std::move(full_state)};
  }
}

std::pair<GroundTruth, std::vector<std::string>> load_sachs(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty adjacency file");
  const std::vector<std::string> names = split_csv_line(line);
  if (names.size() != 11)
    throw FormatError("expected 11 variables, got " +
                      std::to_string(names.size()));

  GroundTruth truth;
  truth.graph.context = Context::full(11);
  truth.graph.adjacency = empty_adjacency(11);
  for (int i = 0; i < 11; ++i) {
    if (!std::getline(in, line))
      throw FormatError("expected 11 adjacency rows");
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 11)
      throw FormatError("row " + std::to_string(i) + " has " +
                        std::to_string(fields.size()) + " columns");
    for (int j = 0; j < 11; ++j) {
      if (fields[static_cast<std::size_t>(j)] == "1")
        truth.graph.adjacency(i, j) = true;
      else if (fields[static_cast<std::size_t>(j)] != "0")
        throw FormatError("adjacency entries must be 0 or 1");
    }
  }
  if (has_cycle(truth.graph))
    throw FormatError("adjacency contains a cycle");
  return {std::move(truth), names};
}

void save_sachs(const std::string& path, const GroundTruth& truth,
                const std::vector<std::string>& names) {
  if (truth.graph.size() != 11 || names.size() != 11)
    throw FormatError("save_sachs requires 11 variables");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t k = 0; k < names.size(); ++k)
    out << (k ? "," : "") << names[k];
  out << "\n";
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j)
      out << (j ? "," : "") << (truth.graph.adjacency(i, j) ? 1 : 0);
    out << "\n";
  }
}

}  // namespace holograph
