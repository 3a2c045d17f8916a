#ifndef HYPERBOX_PROBLEMS_HPP
#define HYPERBOX_PROBLEMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace hyperbox {

using DecisionVector = std::vector<double>;

/// A bounded parameter space searched by the grid scalarization backend.
/// `to_decision` maps a parameter vector into the problem's decision space;
/// it lets a problem expose a lower-dimensional parametrization (e.g. angles
/// on a sphere boundary) instead of its full decision box.
struct GridDomain {
  std::vector<double> lower;
  std::vector<double> upper;
  std::function<DecisionVector(std::span<const double>)> to_decision;
  std::vector<std::size_t> default_resolution;
  std::size_t default_refinements = 1;
};

struct ProblemSpec {
  std::string name;
  std::size_t m = 0;
  std::vector<double> decision_lower;
  std::vector<double> decision_upper;
  std::function<ObjectivePoint(std::span<const double>)> objectives;
  std::function<bool(std::span<const double>)> feasible;
  ObjectivePoint ideal;
  ObjectivePoint nadir;
  /// Semi-axes a_i when the outcome set is the ellipsoid sum (z_i/a_i)^2 <= 1.
  std::optional<std::vector<double>> quadric;
  GridDomain grid;
  /// Seeded sampler of nondominated points; empty when unavailable.
  std::function<std::vector<ObjectivePoint>(std::size_t, std::uint64_t)> front_sampler;

  [[nodiscard]] BoxDims start_box() const { return {ideal, nadir}; }
  [[nodiscard]] std::size_t decision_dimension() const { return decision_lower.size(); }
};

inline constexpr double kFeasibilityTolerance = 1e-12;

/// Objective vector at x; x must lie in the decision box and be feasible.
inline ObjectivePoint evaluate_objectives(const ProblemSpec& spec, std::span<const double> x) {
  detail::require(x.size() == spec.decision_dimension(), "evaluate_objectives: decision dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    detail::require(x[i] >= spec.decision_lower[i] - kFeasibilityTolerance &&
                        x[i] <= spec.decision_upper[i] + kFeasibilityTolerance,
                    "evaluate_objectives: x outside the decision box");
  }
  detail::require(spec.feasible(x), "evaluate_objectives: x is infeasible");
  return spec.objectives(x);
}

/// Removes every point weakly dominated by another one (duplicates keep their
/// first occurrence). Quadratic; intended for sampler output.
inline std::vector<ObjectivePoint> nondominated_filter(std::vector<ObjectivePoint> points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });
  std::vector<char> keep(points.size(), 1);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto& p = points[order[oi]];
    for (std::size_t oj = 0; oj < order.size(); ++oj) {
      const auto& q = points[order[oj]];
      if (q[0] > p[0]) break;
      if (oj == oi) continue;
      if (dominates(q, p) || (q == p && order[oj] < order[oi])) {
        keep[order[oi]] = 0;
        break;
      }
    }
  }
  std::vector<ObjectivePoint> result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) result.push_back(std::move(points[i]));
  }
  return result;
}

namespace detail {

// Ellipsoid boundary in the negative orthant from m-1 angles in [0, pi/2].
inline DecisionVector orthant_boundary(std::span<const double> angles, const std::vector<double>& axes) {
  const std::size_t m = axes.size();
  DecisionVector x(m);
  double carry = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    x[i] = -axes[i] * carry * std::cos(angles[i]);
    carry *= std::sin(angles[i]);
  }
  x[m - 1] = -axes[m - 1] * carry;
  return x;
}

inline ProblemSpec make_quadric(std::string name, std::vector<double> axes) {
  const std::size_t m = axes.size();
  ProblemSpec spec;
  spec.name = std::move(name);
  spec.m = m;
  for (double a : axes) {
    spec.decision_lower.push_back(-a);
    spec.decision_upper.push_back(a);
    spec.ideal.push_back(-a);
    spec.nadir.push_back(0.0);
  }
  spec.objectives = [](std::span<const double> x) { return ObjectivePoint(x.begin(), x.end()); };
  spec.feasible = [axes](std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) total += (x[i] / axes[i]) * (x[i] / axes[i]);
    return total <= 1.0 + 1e-9;
  };
  spec.quadric = axes;
  spec.grid.lower.assign(m - 1, 0.0);
  spec.grid.upper.assign(m - 1, std::numbers::pi / 2.0);
  spec.grid.to_decision = [axes](std::span<const double> t) { return orthant_boundary(t, axes); };
  spec.grid.default_resolution.assign(m - 1, m <= 3 ? 400 : 30);
  spec.front_sampler = [axes](std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<ObjectivePoint> out;
    out.reserve(n);
    while (out.size() < n) {
      ObjectivePoint g(axes.size());
      double norm = 0.0;
      for (double& v : g) {
        v = std::abs(gauss(rng));
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm < 1e-12) continue;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = -axes[i] * g[i] / norm;
      out.push_back(std::move(g));
    }
    return out;
  };
  return spec;
}

inline ProblemSpec make_nonconvex() {
  const double x1_max = std::acos(0.2);
  const double x2_max = std::log(5.0);
  ProblemSpec spec;
  spec.name = "nonconvex";
  spec.m = 3;
  spec.decision_lower = {0.0, 0.0, 1.2};
  spec.decision_upper = {std::numbers::pi, x2_max, 2.0};
  spec.objectives = [](std::span<const double> x) { return ObjectivePoint{-x[0], -x[1], -x[2] * x[2]}; };
  spec.feasible = [](std::span<const double> x) {
    return -std::cos(x[0]) - std::exp(-x[1]) + x[2] <= kFeasibilityTolerance && x[2] >= 1.2 - kFeasibilityTolerance;
  };
  spec.ideal = {-x1_max, -x2_max, -4.0};
  spec.nadir = {0.0, 0.0, -1.44};
  // f3 improves with x3 alone, so the search runs over (x1, x2) with x3 on
  // the constraint boundary.
  spec.grid.lower = {0.0, 0.0};
  spec.grid.upper = {x1_max, x2_max};
  spec.grid.to_decision = [](std::span<const double> t) {
    return DecisionVector{t[0], t[1], std::cos(t[0]) + std::exp(-t[1])};
  };
  spec.grid.default_resolution = {200, 200};
  spec.grid.default_refinements = 3;
  spec.front_sampler = [x1_max](std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ObjectivePoint> out;
    out.reserve(n);
    while (out.size() < n) {
      const double x1 = x1_max * unit(rng);
      const double x2_limit = -std::log(1.2 - std::cos(x1));
      if (!(x2_limit >= 0.0)) continue;
      const double x2 = x2_limit * unit(rng);
      const double x3 = std::cos(x1) + std::exp(-x2);
      out.push_back({-x1, -x2, -x3 * x3});
    }
    return nondominated_filter(std::move(out));
  };
  return spec;
}

inline ObjectivePoint comet_objectives(std::span<const double> x) {
  const double cubic = x[0] * x[0] * x[0] * x[1] * x[1];
  return {(1.0 + x[2]) * (cubic - 10.0 * x[0] - 4.0 * x[1]), (1.0 + x[2]) * (cubic - 10.0 * x[0] + 4.0 * x[1]),
          3.0 * (1.0 + x[2]) * x[0] * x[0]};
}

inline ProblemSpec make_comet() {
  ProblemSpec spec;
  spec.name = "comet";
  spec.m = 3;
  spec.decision_lower = {1.0, -2.0, 0.0};
  spec.decision_upper = {3.5, 2.0, 1.0};
  spec.objectives = comet_objectives;
  spec.feasible = [](std::span<const double>) { return true; };
  // Minimum of f1 (and f2) is attained at x = (3.5, +-2/3.5^3, 1).
  const double corner = -35.0 - 4.0 / (3.5 * 3.5 * 3.5);
  spec.ideal = {2.0 * corner, 2.0 * corner, 3.0};
  spec.nadir = {4.0, 4.0, 73.5};
  spec.grid.lower = spec.decision_lower;
  spec.grid.upper = spec.decision_upper;
  spec.grid.to_decision = [](std::span<const double> t) { return DecisionVector(t.begin(), t.end()); };
  spec.grid.default_resolution = {50, 50, 30};
  spec.grid.default_refinements = 3;
  spec.front_sampler = [](std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ObjectivePoint> out;
    out.reserve(n);
    const std::size_t tail = n / 5;
    for (std::size_t i = 0; i < n; ++i) {
      DecisionVector x(3);
      if (i < n - tail) {
        // x3 = 1, -2 <= x2 * x1^3 <= 2
        x[0] = 1.0 + 2.5 * unit(rng);
        x[1] = (-2.0 + 4.0 * unit(rng)) / (x[0] * x[0] * x[0]);
        x[2] = 1.0;
      } else {
        x[0] = 1.0;
        x[1] = -2.0 + 4.0 * unit(rng);
        x[2] = unit(rng);
      }
      out.push_back(comet_objectives(x));
    }
    return nondominated_filter(std::move(out));
  };
  return spec;
}

inline double patched_profile(double t) { return t * (1.0 + std::sin(3.0 * std::numbers::pi * t)); }

// Maximizer of the profile on [a, b] by dense scan plus golden-section polish.
inline double profile_argmax(double a, double b) {
  constexpr int kScan = 20000;
  double best_t = a;
  for (int i = 0; i <= kScan; ++i) {
    const double t = a + (b - a) * i / kScan;
    if (patched_profile(t) > patched_profile(best_t)) best_t = t;
  }
  double lo = std::max(a, best_t - (b - a) / kScan);
  double hi = std::min(b, best_t + (b - a) / kScan);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = hi - ratio * (hi - lo);
    const double d = lo + ratio * (hi - lo);
    if (patched_profile(c) > patched_profile(d)) hi = d; else lo = c;
  }
  return 0.5 * (lo + hi);
}

/// The efficient values of one patched variable: t is efficient iff the
/// profile t(1 + sin 3 pi t) exceeds its value at every smaller t. This is a
/// union of two intervals [0, first_peak] and [rise, second_peak].
struct PatchedIntervals {
  double first_peak;
  double rise;
  double second_peak;
};

inline PatchedIntervals patched_intervals() {
  PatchedIntervals iv{};
  iv.first_peak = profile_argmax(0.0, 0.4);
  const double level = patched_profile(iv.first_peak);
  const double valley = iv.first_peak + 0.2;
  iv.second_peak = profile_argmax(valley, 1.0);
  double lo = valley;
  double hi = iv.second_peak;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (patched_profile(mid) > level) hi = mid; else lo = mid;
  }
  iv.rise = hi;
  return iv;
}

inline ProblemSpec make_patched() {
  const PatchedIntervals iv = patched_intervals();
  ProblemSpec spec;
  spec.name = "patched";
  spec.m = 3;
  spec.decision_lower = {0.0, 0.0};
  spec.decision_upper = {1.0, 1.0};
  spec.objectives = [](std::span<const double> x) {
    return ObjectivePoint{x[0], x[1], 6.0 - patched_profile(x[0]) - patched_profile(x[1])};
  };
  spec.feasible = [](std::span<const double>) { return true; };
  spec.ideal = {0.0, 0.0, 6.0 - 2.0 * patched_profile(iv.second_peak)};
  spec.nadir = {iv.second_peak, iv.second_peak, 6.0};
  spec.grid.lower = spec.decision_lower;
  spec.grid.upper = spec.decision_upper;
  spec.grid.to_decision = [](std::span<const double> t) { return DecisionVector(t.begin(), t.end()); };
  spec.grid.default_resolution = {200, 200};
  spec.grid.default_refinements = 3;
  spec.front_sampler = [iv](std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double first = iv.first_peak;
    const double second = iv.second_peak - iv.rise;
    std::uniform_real_distribution<double> length(0.0, first + second);
    auto draw = [&] {
      const double t = length(rng);
      return t <= first ? t : iv.rise + (t - first);
    };
    std::vector<ObjectivePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = draw();
      const double x2 = draw();
      out.push_back({x1, x2, 6.0 - patched_profile(x1) - patched_profile(x2)});
    }
    return out;
  };
  return spec;
}

}  // namespace detail

/// One of the built-in test problems: sphere and ellipsoid for any m >= 2;
/// nonconvex, comet and patched for m = 3.
inline ProblemSpec make_problem(std::string_view name, std::size_t m) {
  if (name == "sphere" || name == "ellipsoid") {
    if (m < 2) throw ConfigurationError(std::string(name) + " needs m >= 2");
    std::vector<double> axes(m, 1.0);
    if (name == "ellipsoid") axes[0] = static_cast<double>(m);
    return detail::make_quadric(std::string(name), std::move(axes));
  }
  if (name == "nonconvex" || name == "comet" || name == "patched") {
    if (m != 3) throw ConfigurationError(std::string(name) + " is defined for m = 3 only");
    if (name == "nonconvex") return detail::make_nonconvex();
    if (name == "comet") return detail::make_comet();
    return detail::make_patched();
  }
  throw ConfigurationError("unknown problem '" + std::string(name) + "'");
}

/// Seeded sample of the nondominated set.
inline std::vector<ObjectivePoint> sample_front(const ProblemSpec& spec, std::size_t n, std::uint64_t seed) {
  if (!spec.front_sampler) throw UnsupportedProblem("problem '" + spec.name + "' has no front sampler");
  detail::require(n >= 1, "sample_front: n must be positive");
  return spec.front_sampler(n, seed);
}

}  // namespace hyperbox

#endif  // HYPERBOX_PROBLEMS_HPP
