#include "holograph/sheaf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "holograph/errors.hpp"
#include "holograph/linalg.hpp"

namespace holograph {

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// --- Gluing via Gauss-Newton on the stacked projection residual -----------
//
// Variables are the global (W, M) with M kept symmetric. Each Gauss-Newton
// step solves the linearized least-squares problem with CGLS, using the
// projection jvp/vjp products and the factorization cached at the current
// iterate.

struct GlueVars {
  Eigen::MatrixXd W, M;
};

struct GlueProblem {
  Context ground;
  std::vector<ProjectionPlan> plans;
  std::vector<Eigen::MatrixXd> locW, locM;
  double eps = kMatrixEps;
};

double dot(const GlueVars& a, const GlueVars& b) {
  return a.W.cwiseProduct(b.W).sum() + a.M.cwiseProduct(b.M).sum();
}

struct Residual {
  std::vector<Eigen::MatrixXd> rW, rM;

  double squared_norm() const {
    double s = 0.0;
    for (const auto& m : rW) s += m.squaredNorm();
    for (const auto& m : rM) s += m.squaredNorm();
    return s;
  }
};

double res_dot(const Residual& a, const Residual& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rW.size(); ++i) {
    s += a.rW[i].cwiseProduct(b.rW[i]).sum();
    s += a.rM[i].cwiseProduct(b.rM[i]).sum();
  }
  return s;
}

Residual evaluate(const GlueProblem& prob, const GlueVars& x,
                  std::vector<ProjectionValue>* vals) {
  Residual r;
  if (vals) vals->clear();
  for (std::size_t i = 0; i < prob.plans.size(); ++i) {
    ProjectionValue v = project_blocks(x.W, x.M, prob.plans[i], prob.eps);
    r.rW.push_back(v.Wt - prob.locW[i]);
    r.rM.push_back(v.Mt - prob.locM[i]);
    if (vals) vals->push_back(std::move(v));
  }
  return r;
}

Residual apply_jacobian(const GlueProblem& prob,
                        const std::vector<ProjectionValue>& vals,
                        const GlueVars& d) {
  Residual out;
  out.rW.resize(vals.size());
  out.rM.resize(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    project_jvp(vals[i], prob.plans[i], d.W, d.M, out.rW[i], out.rM[i]);
  return out;
}

GlueVars apply_jacobian_t(const GlueProblem& prob,
                          const std::vector<ProjectionValue>& vals,
                          const Residual& r) {
  const int n = prob.ground.size();
  GlueVars g{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t i = 0; i < vals.size(); ++i)
    project_vjp(vals[i], prob.plans[i], r.rW[i], r.rM[i], g.W, g.M);
  g.M = 0.5 * (g.M + g.M.transpose());  // gradient in the symmetric subspace
  return g;
}

/// CGLS for min ||J d + r||; returns the step d.
GlueVars cgls(const GlueProblem& prob, const std::vector<ProjectionValue>& vals,
              const Residual& r0, int max_iters, double rel_tol) {
  const int n = prob.ground.size();
  GlueVars d{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  Residual r = r0;  // residual of J d + r0 with d = 0
  for (auto& m : r.rW) m = -m;
  for (auto& m : r.rM) m = -m;
  GlueVars s = apply_jacobian_t(prob, vals, r);
  GlueVars p = s;
  double gamma = dot(s, s);
  const double gamma0 = gamma;
  if (gamma0 == 0.0) return d;
  for (int it = 0; it < max_iters; ++it) {
    Residual q = apply_jacobian(prob, vals, p);
    const double qq = res_dot(q, q);
    if (qq <= 0.0) break;
    const double alpha = gamma / qq;
    d.W += alpha * p.W;
    d.M += alpha * p.M;
    for (std::size_t i = 0; i < r.rW.size(); ++i) {
      r.rW[i] -= alpha * q.rW[i];
      r.rM[i] -= alpha * q.rM[i];
    }
    s = apply_jacobian_t(prob, vals, r);
    const double gamma_new = dot(s, s);
    if (gamma_new <= rel_tol * rel_tol * gamma0) break;
    const double beta = gamma_new / gamma;
    p.W = s.W + beta * p.W;
    p.M = s.M + beta * p.M;
    gamma = gamma_new;
  }
  return d;
}

/// Averaged-overlap initialization: each global entry is the mean of the
/// matching local entries over parts containing both endpoints.
GlueVars init_from_locals(const GlueProblem& prob,
                          const std::vector<Context>& parts) {
  const int n = prob.ground.size();
  GlueVars x{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  Eigen::MatrixXd countW = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd countM = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Context& part = parts[k];
    for (int a = 0; a < part.size(); ++a) {
      for (int b = 0; b < part.size(); ++b) {
        const int ga = prob.ground.index_of(part[a]);
        const int gb = prob.ground.index_of(part[b]);
        x.W(ga, gb) += prob.locW[k](a, b);
        countW(ga, gb) += 1.0;
        x.M(ga, gb) += prob.locM[k](a, b);
        countM(ga, gb) += 1.0;
      }
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (countW(a, b) > 0) x.W(a, b) /= countW(a, b);
      if (countM(a, b) > 0) x.M(a, b) /= countM(a, b);
    }
  x.M = 0.5 * (x.M + x.M.transpose());
  return x;
}

std::pair<GlueVars, double> solve_glue(const GlueProblem& prob,
                                       const std::vector<Context>& parts) {
  GlueVars x = init_from_locals(prob, parts);
  std::vector<ProjectionValue> vals;
  Residual r = evaluate(prob, x, &vals);
  double obj = r.squared_norm();
  for (int outer = 0; outer < 30; ++outer) {
    if (std::sqrt(obj) < 1e-10) break;
    GlueVars step = cgls(prob, vals, r, 250, 1e-8);
    double t = 1.0;
    bool improved = false;
    for (int back = 0; back < 25; ++back) {
      GlueVars trial{x.W + t * step.W, x.M + t * step.M};
      std::vector<ProjectionValue> trial_vals;
      Residual trial_r = evaluate(prob, trial, &trial_vals);
      const double trial_obj = trial_r.squared_norm();
      if (trial_obj < obj) {
        const double gain = obj - trial_obj;
        x = std::move(trial);
        vals = std::move(trial_vals);
        r = std::move(trial_r);
        obj = trial_obj;
        improved = true;
        if (gain < 1e-10 * std::max(obj, 1e-30)) improved = false;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
  }
  return {std::move(x), obj};
}

}  // namespace

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Identity:
      return "identity";
    case Axiom::Transitivity:
      return "transitivity";
    case Axiom::Locality:
      return "locality";
    case Axiom::Gluing:
      return "gluing";
  }
  return "unknown";
}

ContextCover ContextCover::make(Context ground, std::vector<Context> parts) {
  if (parts.empty()) throw InvalidContext("cover needs at least one part");
  std::set<int> seen;
  for (const Context& part : parts) {
    if (!part.is_subset_of(ground))
      throw InvalidContext("cover part is not a subset of the ground context");
    seen.insert(part.ids().begin(), part.ids().end());
  }
  if (static_cast<int>(seen.size()) != ground.size())
    throw InvalidContext("cover parts do not cover the ground context");

  ContextCover cover;
  cover.ground = std::move(ground);
  cover.parts = std::move(parts);
  for (std::size_t i = 0; i < cover.parts.size(); ++i)
    for (std::size_t j = i + 1; j < cover.parts.size(); ++j)
      if (cover.parts[i].intersects(cover.parts[j]))
        cover.pairwise_intersections.emplace_back(
            static_cast<int>(i), static_cast<int>(j),
            cover.parts[i].intersect(cover.parts[j]));
  return cover;
}

AxiomReport check_identity(const CausalState& state) {
  const CausalState back = project(state, state.context());
  const double err = std::max(max_abs_diff(back.W(), state.W()),
                              max_abs_diff(back.covariance(), state.covariance()));
  return AxiomReport::make(Axiom::Identity, err);
}

AxiomReport check_transitivity(const CausalState& state, const Context& V,
                               const Context& Z) {
  if (!(Z.is_subset_of(V) && V.is_subset_of(state.context()) && Z != V &&
        V != state.context()))
    throw InvalidNesting("check_transitivity needs strict Z < V < context");
  const CausalState direct = project(state, Z);
  const CausalState composed = project(project(state, V), Z);
  const double err =
      std::max((direct.W() - composed.W()).norm(),
               (direct.covariance() - composed.covariance()).norm());
  return AxiomReport::make(Axiom::Transitivity, err);
}

std::pair<CausalState, AxiomReport> glue_sections(
    const std::vector<CausalState>& locals, const ContextCover& cover,
    double eps) {
  if (locals.size() != cover.parts.size())
    throw InvalidContext("one local section per cover part required");
  for (std::size_t i = 0; i < locals.size(); ++i)
    if (locals[i].context() != cover.parts[i])
      throw InvalidContext("local section context does not match its part");

  // Pairwise descent compatibility is checked, not assumed.
  for (const auto& [i, j, overlap] : cover.pairwise_intersections) {
    const CausalState pi = project(locals[static_cast<std::size_t>(i)], overlap, eps);
    const CausalState pj = project(locals[static_cast<std::size_t>(j)], overlap, eps);
    const double disagreement =
        std::max(max_abs_diff(pi.W(), pj.W()),
                 max_abs_diff(pi.covariance(), pj.covariance()));
    if (disagreement > 0.1)
      throw IncompatibleSections("pairwise restriction disagreement " +
                                 std::to_string(disagreement));
  }

  if (cover.parts.size() == 1) {
    // Single part equals ground (cover validation), so the local is global.
    return {locals[0], AxiomReport::make(Axiom::Gluing, 0.0)};
  }

  GlueProblem prob;
  prob.ground = cover.ground;
  prob.eps = eps;
  for (std::size_t i = 0; i < cover.parts.size(); ++i) {
    prob.plans.push_back(make_projection_plan(cover.ground, cover.parts[i]));
    prob.locW.push_back(locals[i].W());
    prob.locM.push_back(locals[i].covariance());
  }

  auto [x, obj] = solve_glue(prob, cover.parts);

  const Eigen::MatrixXd L = psd_floor_cholesky(x.M, eps);
  CausalState glued(cover.ground, x.W, L);
  // Report the residual of the state actually returned (the Cholesky floor
  // may have perturbed M).
  GlueVars final_vars{glued.W(), glued.covariance()};
  const double final_obj = evaluate(prob, final_vars, nullptr).squared_norm();
  return {std::move(glued),
          AxiomReport::make(Axiom::Gluing, std::sqrt(final_obj))};
}

AxiomReport check_locality(const CausalState& state, const ContextCover& cover) {
  if (cover.ground != state.context())
    throw InvalidContext("cover ground must equal the state context");
  std::vector<CausalState> locals;
  for (const Context& part : cover.parts)
    locals.push_back(project(state, part));
  auto [glued, report] = glue_sections(locals, cover);
  const double err = std::sqrt(
      (state.W() - glued.W()).squaredNorm() +
      (state.covariance() - glued.covariance()).squaredNorm());
  (void)report;
  return AxiomReport::make(Axiom::Locality, err);
}

// --- Exactness suite -------------------------------------------------------

CausalState random_suite_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) W(i, j) = gauss(rng);
  const double norm = W.norm();
  if (norm > 0) W *= 0.9 / norm;

  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  const double scale = 0.3 / std::sqrt(static_cast<double>(n));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) L(i, j) = scale * gauss(rng);
  return CausalState(Context::full(n), std::move(W), std::move(L));
}

ContextCover random_suite_cover(int n, std::uint64_t seed) {
  const Context ground = Context::full(n);
  const int m = static_cast<int>(std::ceil(0.6 * n));
  if (m >= n) return ContextCover::make(ground, {ground});

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);

  auto sample_part = [&]() {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> sel(ids.begin(), ids.begin() + m);
    std::sort(sel.begin(), sel.end());
    return Context(std::move(sel));
  };

  std::vector<Context> parts;
  std::set<int> covered;
  for (int k = 0; k < 3; ++k) {
    parts.push_back(sample_part());
    covered.insert(parts.back().ids().begin(), parts.back().ids().end());
  }
  int guard = 0;
  while (static_cast<int>(covered.size()) < n && guard++ < 16) {
    parts.push_back(sample_part());
    covered.insert(parts.back().ids().begin(), parts.back().ids().end());
  }
  if (static_cast<int>(covered.size()) < n) {
    // Force the stragglers into one extra part.
    std::vector<int> missing;
    for (int v = 0; v < n; ++v)
      if (!covered.count(v)) missing.push_back(v);
    for (int v = 0; v < n && static_cast<int>(missing.size()) < m; ++v)
      if (covered.count(v) &&
          std::find(missing.begin(), missing.end(), v) == missing.end())
        missing.push_back(v);
    std::sort(missing.begin(), missing.end());
    parts.push_back(Context(std::move(missing)));
  }
  return ContextCover::make(ground, std::move(parts));
}

std::pair<Context, Context> random_nested_contexts(int n, std::uint64_t seed) {
  if (n < 3) throw InvalidNesting("strict nesting needs n >= 3");
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  const int v_size = std::max(2, (2 * n) / 3);
  const int z_size = std::max(1, std::min(v_size - 1, n / 3));

  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<int> v_ids(ids.begin(), ids.begin() + v_size);
  std::shuffle(v_ids.begin(), v_ids.end(), rng);
  std::vector<int> z_ids(v_ids.begin(), v_ids.begin() + z_size);
  std::sort(v_ids.begin(), v_ids.end());
  std::sort(z_ids.begin(), z_ids.end());
  return {Context(std::move(v_ids)), Context(std::move(z_ids))};
}

std::vector<SuiteCell> run_exactness_suite(
    const std::vector<int>& sizes, const std::vector<std::uint64_t>& seeds) {
  if (sizes.empty() || seeds.empty())
    throw InvalidDimension("exactness suite needs sizes and seeds");
  std::vector<SuiteCell> cells;
  for (int n : sizes) {
    for (std::uint64_t seed : seeds) {
      SuiteCell cell;
      cell.n = n;
      cell.seed = seed;
      const CausalState state = random_suite_state(n, seed);
      cell.reports.push_back(check_identity(state));

      if (n >= 3) {
        auto [V, Z] = random_nested_contexts(n, seed);
        cell.reports.push_back(check_transitivity(state, V, Z));
      } else {
        cell.reports.push_back(AxiomReport::make(Axiom::Transitivity, 0.0));
      }

      const ContextCover cover = random_suite_cover(n, seed);
      std::vector<CausalState> locals;
      for (const Context& part : cover.parts)
        locals.push_back(project(state, part));
      auto [glued, glue_report] = glue_sections(locals, cover);
      const double loc_err = std::sqrt(
          (state.W() - glued.W()).squaredNorm() +
          (state.covariance() - glued.covariance()).squaredNorm());
      cell.reports.push_back(AxiomReport::make(Axiom::Locality, loc_err));
      cell.reports.push_back(glue_report);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<SuiteAggregate> aggregate_suite(
    const std::vector<SuiteCell>& cells) {
  std::vector<SuiteAggregate> out;
  std::vector<int> sizes;
  for (const auto& c : cells)
    if (std::find(sizes.begin(), sizes.end(), c.n) == sizes.end())
      sizes.push_back(c.n);
  for (int n : sizes) {
    for (Axiom axiom : {Axiom::Identity, Axiom::Transitivity, Axiom::Locality,
                        Axiom::Gluing}) {
      std::vector<double> errors;
      int passed = 0;
      for (const auto& c : cells) {
        if (c.n != n) continue;
        for (const auto& r : c.reports) {
          if (r.axiom != axiom) continue;
          errors.push_back(r.error);
          if (r.passed) ++passed;
        }
      }
      if (errors.empty()) continue;
      SuiteAggregate agg;
      agg.n = n;
      agg.axiom = axiom;
      const double mean =
          std::accumulate(errors.begin(), errors.end(), 0.0) /
          static_cast<double>(errors.size());
      double var = 0.0;
      for (double e : errors) var += (e - mean) * (e - mean);
      var /= static_cast<double>(errors.size());
      agg.mean_error = mean;
      agg.std_error = std::sqrt(var);
      agg.pass_rate = static_cast<double>(passed) /
                      static_cast<double>(errors.size());
      out.push_back(agg);
    }
  }
  return out;
}

}  // namespace holograph
