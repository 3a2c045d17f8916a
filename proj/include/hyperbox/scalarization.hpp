#ifndef HYPERBOX_SCALARIZATION_HPP
#define HYPERBOX_SCALARIZATION_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "problems.hpp"

namespace hyperbox {

/// Pascoletti-Serafini instance PS(p, q): minimize alpha subject to
/// p + alpha q = F(x) + lambda with lambda >= 0.
struct PSQuery {
  std::uint64_t query_id = 0;
  ObjectivePoint p;  // upper corner of the selected box
  ObjectivePoint q;  // box diagonal, strictly positive
};

struct PSSolution {
  std::uint64_t query_id = 0;
  double alpha = 0.0;
  ObjectivePoint z;       // F(x*)
  ObjectivePoint lambda;  // slack, >= 0
  ObjectivePoint s;       // z + lambda
  std::optional<DecisionVector> decision;
};

inline constexpr double kLambdaTolerance = 1e-12;

inline PSQuery make_query(const BoxDims& box, std::uint64_t query_id) {
  detail::require(box.valid(), "make_query: invalid box");
  PSQuery query;
  query.query_id = query_id;
  query.p = box.upper;
  query.q.resize(box.dimension());
  for (std::size_t i = 0; i < query.q.size(); ++i) query.q[i] = box.upper[i] - box.lower[i];
  return query;
}

/**
 * Closed-form solve on the ellipsoid sum (z_i/a_i)^2 = 1.
 *
 * The boundary point p + alpha q satisfies
 * (q'Aq) alpha^2 + (2 p'Aq) alpha + (p'Ap - 1) = 0 with A = diag(1/a_i^2);
 * the smaller root is the intersection on the nondominated side.
 */
inline PSSolution solve_quadric_ps(const PSQuery& query, std::span<const double> axes) {
  const std::size_t m = query.p.size();
  detail::require(query.q.size() == m && axes.size() == m, "solve_quadric_ps: dimension mismatch");
  double qaq = 0.0;
  double paq = 0.0;
  double pap = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    detail::require(axes[i] > 0.0, "solve_quadric_ps: semi-axes must be positive");
    detail::require(query.q[i] > 0.0, "solve_quadric_ps: direction must be positive");
    const double w = 1.0 / (axes[i] * axes[i]);
    qaq += query.q[i] * query.q[i] * w;
    paq += query.p[i] * query.q[i] * w;
    pap += query.p[i] * query.p[i] * w;
  }
  const double b = 2.0 * paq;
  const double c = pap - 1.0;
  const double discriminant = b * b - 4.0 * qaq * c;
  if (discriminant < 0.0) {
    throw NoIntersection("solve_quadric_ps: search line misses the ellipsoid");
  }
  const double root = std::sqrt(discriminant);
  // Pick the cancellation-free formula for the smaller root.
  const double alpha = b > 0.0 ? (-b - root) / (2.0 * qaq) : (2.0 * c) / (-b + root);

  PSSolution solution;
  solution.query_id = query.query_id;
  solution.alpha = alpha;
  solution.z.resize(m);
  for (std::size_t i = 0; i < m; ++i) solution.z[i] = query.p[i] + alpha * query.q[i];
  solution.lambda.assign(m, 0.0);
  solution.s = solution.z;
  solution.decision = solution.z;
  return solution;
}

struct GridOptions {
  /// Points per parameter axis; empty means the problem's default. A single
  /// entry applies to every axis.
  std::vector<std::size_t> resolution;
  /// Number of zoom passes around the incumbent; nullopt means the problem's
  /// default.
  std::optional<std::size_t> refinements;
};

namespace detail {

inline double minimax_alpha(const ObjectivePoint& f, const PSQuery& query) {
  double alpha = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) alpha = std::max(alpha, (f[i] - query.p[i]) / query.q[i]);
  return alpha;
}

}  // namespace detail

/**
 * Grid minimax solve of PS(p, q): alpha(x) = max_i (F_i(x) - p_i) / q_i is
 * minimized over a uniform grid of the problem's grid domain (infeasible
 * points skipped), then over finer grids centred on the incumbent. Each
 * refinement spans one cell of the previous grid on either side.
 */
inline PSSolution solve_grid_ps(const PSQuery& query, const ProblemSpec& problem, const GridOptions& options = {}) {
  const GridDomain& domain = problem.grid;
  const std::size_t dims = domain.lower.size();
  detail::require(dims >= 1 && domain.upper.size() == dims && domain.to_decision,
                  "solve_grid_ps: problem has no grid domain");
  detail::require(query.p.size() == problem.m && query.q.size() == problem.m, "solve_grid_ps: dimension mismatch");
  for (double qi : query.q) detail::require(qi > 0.0, "solve_grid_ps: direction must be positive");

  std::vector<std::size_t> resolution = options.resolution.empty() ? domain.default_resolution : options.resolution;
  if (resolution.size() == 1 && dims > 1) resolution.assign(dims, resolution.front());
  detail::require(resolution.size() == dims, "solve_grid_ps: resolution dimension mismatch");
  for (std::size_t r : resolution) detail::require(r >= 2, "solve_grid_ps: resolution must be at least 2");
  const std::size_t refinements = options.refinements.value_or(domain.default_refinements);

  std::vector<double> lo = domain.lower;
  std::vector<double> hi = domain.upper;
  std::vector<double> incumbent;
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> index(dims);
  std::vector<double> t(dims);
  for (std::size_t pass = 0; pass <= refinements; ++pass) {
    if (pass > 0) {
      if (incumbent.empty()) break;
      for (std::size_t d = 0; d < dims; ++d) {
        const double cell = (hi[d] - lo[d]) / static_cast<double>(resolution[d] - 1);
        lo[d] = std::max(domain.lower[d], incumbent[d] - cell);
        hi[d] = std::min(domain.upper[d], incumbent[d] + cell);
      }
    }
    std::fill(index.begin(), index.end(), 0);
    while (true) {
      for (std::size_t d = 0; d < dims; ++d) {
        t[d] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(index[d]) / static_cast<double>(resolution[d] - 1);
      }
      const DecisionVector x = domain.to_decision(t);
      if (problem.feasible(x)) {
        const double alpha = detail::minimax_alpha(problem.objectives(x), query);
        if (alpha < best) {
          best = alpha;
          incumbent = t;
        }
      }
      std::size_t d = 0;
      while (d < dims && ++index[d] == resolution[d]) index[d++] = 0;
      if (d == dims) break;
    }
  }
  if (incumbent.empty()) throw InfeasibleProblem("solve_grid_ps: no feasible grid point");

  PSSolution solution;
  solution.query_id = query.query_id;
  solution.decision = domain.to_decision(incumbent);
  solution.z = problem.objectives(*solution.decision);
  solution.alpha = detail::minimax_alpha(solution.z, query);
  const std::size_t m = problem.m;
  solution.s.resize(m);
  solution.lambda.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    solution.s[i] = query.p[i] + solution.alpha * query.q[i];
    double slack = solution.s[i] - solution.z[i];
    if (slack < 0.0) {
      if (slack < -1e-9) throw ContractError("solve_grid_ps: negative slack beyond tolerance");
      slack = 0.0;
    }
    solution.lambda[i] = slack;
  }
  return solution;
}

/// A scalarization backend: maps a query to its solution. May throw
/// NoIntersection or InfeasibleProblem.
using Solver = std::function<PSSolution(const PSQuery&)>;

enum class BackendKind { automatic, quadric, grid };

/// Closed form for quadric problems, grid search otherwise (or as requested).
inline Solver make_solver(const ProblemSpec& problem, BackendKind kind = BackendKind::automatic,
                          GridOptions options = {}) {
  if (kind == BackendKind::quadric || (kind == BackendKind::automatic && problem.quadric)) {
    if (!problem.quadric) throw ConfigurationError("problem '" + problem.name + "' has no closed-form solver");
    std::vector<double> axes = *problem.quadric;
    return [axes](const PSQuery& query) { return solve_quadric_ps(query, axes); };
  }
  return [problem, options](const PSQuery& query) { return solve_grid_ps(query, problem, options); };
}

}  // namespace hyperbox

#endif  // HYPERBOX_SCALARIZATION_HPP
