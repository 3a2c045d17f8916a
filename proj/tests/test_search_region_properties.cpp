#include <cmath>
#include <random>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include <hyperbox/bounds_oracle.hpp>
#include <hyperbox/engine.hpp>
#include <hyperbox/search_region.hpp>

#include "support.hpp"

using namespace hyperbox;
using hyperbox::testing::random_nondominated;
using hyperbox::testing::sorted;
using hyperbox::testing::unit_box;

namespace {

struct Instance {
  std::size_t m;
  std::vector<ObjectivePoint> z;
  std::vector<ObjectivePoint> s;
};

// s = z, or z plus a small slack when the slack keeps the s points mutually
// nondominated and inside the box.
Instance make_instance(std::mt19937_64& rng, std::size_t m, bool ties, bool slack) {
  std::uniform_int_distribution<std::size_t> count(1, 8);
  Instance instance{m, random_nondominated(rng, m, count(rng), ties), {}};
  instance.s = instance.z;
  if (slack) {
    std::uniform_real_distribution<double> bump(0.0, 0.01);
    for (auto& s : instance.s)
      for (auto& v : s) v += bump(rng);
    for (std::size_t a = 0; a < instance.s.size(); ++a)
      for (std::size_t b = 0; b < instance.s.size(); ++b)
        if (a != b && weakly_less(instance.s[a], instance.s[b])) instance.s = instance.z;
  }
  return instance;
}

bool is_antichain(const std::vector<ObjectivePoint>& bounds) {
  for (std::size_t a = 0; a < bounds.size(); ++a)
    for (std::size_t b = 0; b < bounds.size(); ++b)
      if (a != b && weakly_less(bounds[a], bounds[b])) return false;
  return true;
}

void expect_defining_consistency(const SearchRegion& region, const std::vector<ObjectivePoint>& z_points,
                                 const std::vector<ObjectivePoint>& s_points) {
  const BoxDims& start = region.start_box();
  const std::size_t m = region.dimension();
  for (BoundKind kind : {BoundKind::lower, BoundKind::upper}) {
    const bool upper = kind == BoundKind::upper;
    const auto& ids = upper ? region.upper_ids() : region.lower_ids();
    const auto& points = upper ? z_points : s_points;
    for (BoundId id : ids) {
      const BoundNode node = region.node(id);
      for (std::size_t j = 0; j < m; ++j) {
        if (node.defining[j].empty()) {
          EXPECT_EQ(node.coords[j], upper ? start.upper[j] : start.lower[j]) << "virtual entry off the start box";
          continue;
        }
        std::set<ObjectivePoint> expected;
        for (const auto& y : points) {
          bool defines = y[j] == node.coords[j];
          for (std::size_t i = 0; i < m && defines; ++i) {
            if (i != j) defines = upper ? y[i] < node.coords[i] : y[i] > node.coords[i];
          }
          if (defines) expected.insert(y);
        }
        const std::set<ObjectivePoint> stored(node.defining[j].begin(), node.defining[j].end());
        EXPECT_EQ(stored, expected);
      }
    }
  }
}

void expect_index_correct(const SearchRegion& region) {
  std::set<std::pair<BoundId, BoundId>> expected;
  for (BoundId l : region.lower_ids())
    for (BoundId u : region.upper_ids())
      if (strictly_less(region.coords(l), region.coords(u)) &&
          region.measure().size(region.coords(l), region.coords(u)) > region.epsilon())
        expected.emplace(l, u);
  std::set<std::pair<BoundId, BoundId>> from_lower;
  std::set<std::pair<BoundId, BoundId>> from_upper;
  for (BoundId l : region.lower_ids())
    for (BoundId u : region.opposing_upper(l)) from_lower.emplace(l, u);
  for (BoundId u : region.upper_ids())
    for (BoundId l : region.opposing_lower(u)) from_upper.emplace(l, u);
  EXPECT_EQ(from_lower, expected);
  EXPECT_EQ(from_upper, expected);
}

}  // namespace

TEST(RegionProperties, OracleAndStrategyEquivalence) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const Instance instance = make_instance(rng, m, trial % 2 == 1, trial % 5 == 0);
    SearchRegion naive(unit_box(m), 0.0, SizeMode::absolute, Strategy::naive);
    SearchRegion improved(unit_box(m), 0.0, SizeMode::absolute, Strategy::improved);
    std::vector<ObjectivePoint> zs;
    std::vector<ObjectivePoint> ss;
    for (std::size_t k = 0; k < instance.z.size(); ++k) {
      zs.push_back(instance.z[k]);
      ss.push_back(instance.s[k]);
      naive.apply_point(instance.z[k], instance.s[k]);
      improved.apply_point(instance.z[k], instance.s[k]);
      const auto upper = bounds_oracle(unit_box(m), zs, BoundKind::upper);
      const auto lower = bounds_oracle(unit_box(m), ss, BoundKind::lower);
      ASSERT_EQ(sorted(naive.upper_bounds()), upper) << "trial " << trial << " step " << k;
      ASSERT_EQ(sorted(improved.upper_bounds()), upper) << "trial " << trial << " step " << k;
      ASSERT_EQ(sorted(naive.lower_bounds()), lower) << "trial " << trial << " step " << k;
      ASSERT_EQ(sorted(improved.lower_bounds()), lower) << "trial " << trial << " step " << k;
      expect_defining_consistency(improved, zs, ss);
      expect_index_correct(improved);
    }
  }
}

TEST(RegionProperties, IndexCorrectWithPruning) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> eps(0.02, 0.3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const Instance instance = make_instance(rng, m, trial % 3 == 0, false);
    const SizeMode mode = trial % 2 ? SizeMode::relative : SizeMode::absolute;
    SearchRegion improved({ObjectivePoint(m, 0.0), ObjectivePoint(m, 1.0)}, eps(rng), mode, Strategy::improved);
    for (const auto& z : instance.z) {
      improved.apply_point(z, z);
      expect_index_correct(improved);
    }
  }
}

TEST(RegionProperties, ChildrenAreMonotoneAndBoundsStayAntichains) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const Instance instance = make_instance(rng, m, trial % 2 == 0, false);
    for (Strategy strategy : {Strategy::naive, Strategy::improved}) {
      SearchRegion region(unit_box(m), 0.0, SizeMode::absolute, strategy);
      for (const auto& z : instance.z) {
        const auto lower_before = region.lower_bounds();
        const auto upper_before = region.upper_bounds();
        const std::set<ObjectivePoint> old_lower(lower_before.begin(), lower_before.end());
        const std::set<ObjectivePoint> old_upper(upper_before.begin(), upper_before.end());
        region.apply_point(z, z);
        for (const auto& l : region.lower_bounds()) {
          if (old_lower.count(l)) continue;
          bool has_parent = false;
          for (const auto& p : lower_before) has_parent = has_parent || (strictly_less(p, z) && weakly_less(p, l));
          EXPECT_TRUE(has_parent);
        }
        for (const auto& u : region.upper_bounds()) {
          if (old_upper.count(u)) continue;
          bool has_parent = false;
          for (const auto& p : upper_before) has_parent = has_parent || (strictly_less(z, p) && weakly_less(u, p));
          EXPECT_TRUE(has_parent);
        }
        EXPECT_TRUE(is_antichain(region.lower_bounds()));
        EXPECT_TRUE(is_antichain(region.upper_bounds()));
      }
    }
  }
}

namespace {

// Quadric answers snapped down onto a coarse lattice: produces ties, stalled
// boxes and dominated points, with s at the exact boundary point.
Solver snapping_solver(std::vector<double> axes, double step) {
  return [axes = std::move(axes), step](const PSQuery& query) {
    PSSolution exact = solve_quadric_ps(query, axes);
    PSSolution snapped = exact;
    for (std::size_t i = 0; i < exact.z.size(); ++i) {
      snapped.z[i] = std::floor(exact.z[i] / step) * step;
      snapped.lambda[i] = exact.z[i] - snapped.z[i];
    }
    snapped.s = exact.z;
    return snapped;
  };
}

}  // namespace

TEST(RegionProperties, StrategiesAgreeOnWholeRuns) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> axis(0.5, 3.0);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t m = 2 + trial % 3;
    std::vector<double> axes(m);
    for (auto& a : axes) a = axis(rng);
    BoxDims start{ObjectivePoint(m), ObjectivePoint(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) start.lower[i] = -axes[i];
    const bool snap = trial % 2 == 1;
    const Solver solver = snap ? snapping_solver(axes, 0.05)
                               : Solver([axes](const PSQuery& q) { return solve_quadric_ps(q, axes); });
    RunConfig config;
    config.epsilon = m == 4 ? 0.35 : 0.15;
    config.mode = static_cast<SizeMode>(trial % 3);
    config.strategy = Strategy::improved;
    const RunReport improved = run_representation(start, config, solver);
    config.strategy = Strategy::naive;
    const RunReport naive = run_representation(start, config, solver);
    ASSERT_EQ(improved.cardinality(), naive.cardinality()) << "trial " << trial;
    for (std::size_t k = 0; k < improved.cardinality(); ++k) {
      ASSERT_EQ(improved.representation[k].z, naive.representation[k].z) << "trial " << trial;
    }
    EXPECT_EQ(improved.selected_sizes, naive.selected_sizes);
    EXPECT_EQ(improved.stalled_boxes, naive.stalled_boxes);
    EXPECT_EQ(improved.skipped_dominated, naive.skipped_dominated);
    for (std::size_t k = 1; k < improved.selected_sizes.size(); ++k) {
      EXPECT_LE(improved.selected_sizes[k], improved.selected_sizes[k - 1]);
    }
    EXPECT_EQ(improved.termination, Termination::completed);
    // Evicted boxes stay in the region, so the bound holds for clean runs only.
    if (improved.stalled_boxes == 0) EXPECT_LE(improved.final_max_box_size, config.epsilon);
  }
}
