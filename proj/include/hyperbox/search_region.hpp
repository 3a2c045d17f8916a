#ifndef HYPERBOX_SEARCH_REGION_HPP
#define HYPERBOX_SEARCH_REGION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace hyperbox {

/// How lower/upper bounds and their boxes are maintained.
///
/// `naive` spawns m children per affected bound, filters redundant ones
/// afterwards and finds the largest box with a nested scan over L x U.
/// `improved` avoids redundant children via defining points and keeps, per
/// bound, the list of opposing bounds whose box is still larger than epsilon.
enum class Strategy { naive, improved };

inline std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::naive ? "naive" : "improved";
}

inline Strategy parse_strategy(std::string_view text) {
  if (text == "naive") return Strategy::naive;
  if (text == "improved") return Strategy::improved;
  throw ConfigurationError("unknown strategy '" + std::string(text) + "'");
}

using BoundId = std::uint32_t;

/// Snapshot of a stored bound.
///
/// `defining[j]` holds every point that fixes coordinate j of the bound: for
/// an upper bound u, the points y with y_j = u_j and y_i < u_i for i != j
/// (lower bounds mirror this). An empty set stands for the virtual start-box
/// point, which is -inf in foreign components for upper bounds and +inf for
/// lower bounds. With ties between points a coordinate can have several
/// defining points.
struct BoundNode {
  BoundId id = 0;
  BoundKind kind = BoundKind::upper;
  ObjectivePoint coords;
  std::vector<std::vector<ObjectivePoint>> defining;
};

namespace detail {

// `witnessed(j, k, value)` tells whether the defining set j is virtual or has
// a point beyond `value` in component k (below it for upper bounds, above it
// for lower bounds). A child in component k needs a witness for every j != k.
template <class Witness>
bool child_allowed(std::size_t m, Witness&& witnessed, double value, std::size_t k) {
  for (std::size_t j = 0; j < m; ++j) {
    if (j != k && !witnessed(j, k, value)) return false;
  }
  return true;
}

inline bool node_witness(const BoundNode& node, std::size_t j, std::size_t k, double value) {
  const auto& set = node.defining[j];
  if (set.empty()) return true;
  const bool upper = node.kind == BoundKind::upper;
  return std::any_of(set.begin(), set.end(),
                     [&](const ObjectivePoint& y) { return upper ? y[k] < value : y[k] > value; });
}

inline void erase_value(std::vector<BoundId>& values, BoundId value) {
  auto it = std::find(values.begin(), values.end(), value);
  if (it != values.end()) {
    *it = values.back();
    values.pop_back();
  }
}

}  // namespace detail

/// Creation criterion for the k-th child of upper bound `u` at point z.
inline bool child_criterion_upper(const BoundNode& u, std::span<const double> z, std::size_t k) {
  detail::require(u.kind == BoundKind::upper, "child_criterion_upper: not an upper bound");
  detail::require(z.size() == u.coords.size() && k < z.size() && u.defining.size() == z.size(),
                  "child_criterion_upper: dimension mismatch");
  return detail::child_allowed(
      z.size(), [&](std::size_t j, std::size_t c, double v) { return detail::node_witness(u, j, c, v); }, z[k], k);
}

/// Creation criterion for the k-th child of lower bound `l` at point s.
inline bool child_criterion_lower(const BoundNode& l, std::span<const double> s, std::size_t k) {
  detail::require(l.kind == BoundKind::lower, "child_criterion_lower: not a lower bound");
  detail::require(s.size() == l.coords.size() && k < s.size() && l.defining.size() == s.size(),
                  "child_criterion_lower: dimension mismatch");
  return detail::child_allowed(
      s.size(), [&](std::size_t j, std::size_t c, double v) { return detail::node_witness(l, j, c, v); }, s[k], k);
}

/// Result of a largest-box query.
struct SelectedBox {
  BoxDims box;
  BoundId lower_id = 0;
  BoundId upper_id = 0;
  double size = 0.0;
};

struct UpdateCounts {
  std::size_t affected_lower = 0;
  std::size_t affected_upper = 0;
  std::size_t created_lower = 0;
  std::size_t created_upper = 0;
};

/**
 * The unexplored part of the start box, stored as local lower bounds L and
 * local upper bounds U. Every pair l < u spans a box that may still contain
 * nondominated points.
 *
 * Bound ids are never reused and a bound's coordinates never change, so an id
 * pair identifies a box for the lifetime of the region.
 *
 * Pairs whose size is at most `epsilon` are of no further interest. The
 * improved strategy never stores them; the naive strategy skips them when
 * scanning. An epsilon of 0 keeps every pair.
 */
class SearchRegion {
 public:
  static constexpr std::uint32_t kVirtual = std::numeric_limits<std::uint32_t>::max();

  SearchRegion(const BoxDims& start_box, double epsilon, SizeMode mode, Strategy strategy)
      : SearchRegion(start_box, epsilon, SizeMeasure::for_start_box(mode, start_box), strategy) {}

  SearchRegion(const BoxDims& start_box, double epsilon, SizeMeasure measure, Strategy strategy)
      : m_(start_box.dimension()), epsilon_(epsilon), measure_(std::move(measure)), strategy_(strategy),
        start_box_(start_box) {
    detail::require(start_box.valid(), "SearchRegion: start box must satisfy lower < upper");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw ConfigurationError("SearchRegion: epsilon must be finite and non-negative");
    }
    const BoundId l0 = new_bound(BoundKind::lower, start_box.lower);
    const BoundId u0 = new_bound(BoundKind::upper, start_box.upper);
    insert(lower_, l0);
    insert(upper_, u0);
    if (strategy_ == Strategy::improved && pair_kept(l0, u0)) {
      opposing_upper_[l0].push_back(u0);
      opposing_lower_[u0].push_back(l0);
    }
  }

  [[nodiscard]] std::size_t dimension() const { return m_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] Strategy strategy() const { return strategy_; }
  [[nodiscard]] const SizeMeasure& measure() const { return measure_; }
  [[nodiscard]] const BoxDims& start_box() const { return start_box_; }

  [[nodiscard]] const std::vector<BoundId>& lower_ids() const { return lower_; }
  [[nodiscard]] const std::vector<BoundId>& upper_ids() const { return upper_; }

  [[nodiscard]] std::span<const double> coords(BoundId id) const {
    return {bound_coords_.data() + static_cast<std::size_t>(id) * m_, m_};
  }

  [[nodiscard]] bool alive(BoundId id) const { return id < position_.size() && position_[id] != kVirtual; }

  /// Snapshot of a bound. Defining sets are maintained by the improved
  /// strategy only.
  [[nodiscard]] BoundNode node(BoundId id) const {
    detail::require(id < kinds_.size(), "SearchRegion::node: unknown id");
    detail::require(strategy_ == Strategy::improved, "SearchRegion::node: defining points need the improved strategy");
    BoundNode result;
    result.id = id;
    result.kind = kinds_[id];
    auto c = coords(id);
    result.coords.assign(c.begin(), c.end());
    result.defining.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) {
      for (std::uint32_t ref : defining_[static_cast<std::size_t>(id) * m_ + j]) {
        const double* p = point(ref);
        result.defining[j].emplace_back(p, p + m_);
      }
    }
    return result;
  }

  [[nodiscard]] std::vector<ObjectivePoint> lower_bounds() const { return collect(lower_); }
  [[nodiscard]] std::vector<ObjectivePoint> upper_bounds() const { return collect(upper_); }

  /// Improved strategy only: the stored opposing upper bounds of `lower`.
  [[nodiscard]] const std::vector<BoundId>& opposing_upper(BoundId lower) const { return opposing_upper_[lower]; }
  /// Improved strategy only: the stored opposing lower bounds of `upper`.
  [[nodiscard]] const std::vector<BoundId>& opposing_lower(BoundId upper) const { return opposing_lower_[upper]; }

  /// Number of candidate boxes the largest-box query looks at.
  [[nodiscard]] std::size_t stored_pairs() const {
    if (strategy_ == Strategy::naive) return lower_.size() * upper_.size();
    std::size_t total = 0;
    for (BoundId l : lower_) total += opposing_upper_[l].size();
    return total;
  }

  /**
   * Ingest a new image point z and its (possibly weaker) companion s >= z.
   * Lower bounds are split with s, upper bounds with z.
   */
  UpdateCounts apply_point(std::span<const double> z, std::span<const double> s) {
    detail::require(z.size() == m_ && s.size() == m_, "apply_point: dimension mismatch");
    for (std::size_t i = 0; i < m_; ++i) {
      detail::require(std::isfinite(z[i]) && std::isfinite(s[i]), "apply_point: non-finite coordinates");
      detail::require(s[i] >= z[i], "apply_point: s must be componentwise >= z");
    }
    return strategy_ == Strategy::improved ? apply_improved(z, s) : apply_naive(z, s);
  }

  /// Largest box with size > epsilon, or nothing once the region is exhausted.
  [[nodiscard]] std::optional<SelectedBox> largest_box() const {
    return strategy_ == Strategy::improved ? largest_improved() : largest_naive();
  }

  /// True while both bounds of the pair are still stored.
  [[nodiscard]] bool pair_alive(BoundId lower, BoundId upper) const { return alive(lower) && alive(upper); }

  /// Drop the box [lower, upper] permanently, including every box later
  /// derived from it by splitting either bound.
  void evict(BoundId lower, BoundId upper) {
    detail::require(pair_alive(lower, upper), "evict: pair no longer stored");
    if (strategy_ == Strategy::improved) {
      detail::erase_value(opposing_upper_[lower], upper);
      detail::erase_value(opposing_lower_[upper], lower);
    } else {
      evicted_partners_[lower].push_back(upper);
      evicted_partners_[upper].push_back(lower);
    }
  }

 private:
  // -- storage helpers ------------------------------------------------------

  BoundId new_bound(BoundKind kind, std::span<const double> coordinates) {
    const auto id = static_cast<BoundId>(kinds_.size());
    detail::require(id != kVirtual, "SearchRegion: bound id space exhausted");
    kinds_.push_back(kind);
    bound_coords_.insert(bound_coords_.end(), coordinates.begin(), coordinates.end());
    defining_.resize(defining_.size() + m_);
    position_.push_back(kVirtual);
    opposing_upper_.emplace_back();
    opposing_lower_.emplace_back();
    evicted_partners_.emplace_back();
    return id;
  }

  void insert(std::vector<BoundId>& list, BoundId id) {
    position_[id] = static_cast<std::uint32_t>(list.size());
    list.push_back(id);
  }

  void remove(std::vector<BoundId>& list, BoundId id) {
    const std::uint32_t pos = position_[id];
    const BoundId last = list.back();
    list[pos] = last;
    position_[last] = pos;
    list.pop_back();
    position_[id] = kVirtual;
    std::vector<BoundId>().swap(opposing_upper_[id]);
    std::vector<BoundId>().swap(opposing_lower_[id]);
  }

  std::uint32_t store_point(std::span<const double> point) {
    const auto index = static_cast<std::uint32_t>(points_.size() / m_);
    points_.insert(points_.end(), point.begin(), point.end());
    return index;
  }

  [[nodiscard]] const double* point(std::uint32_t ref) const {
    return points_.data() + static_cast<std::size_t>(ref) * m_;
  }

  [[nodiscard]] std::vector<std::uint32_t>& defining(BoundId id, std::size_t j) {
    return defining_[static_cast<std::size_t>(id) * m_ + j];
  }
  [[nodiscard]] const std::vector<std::uint32_t>& defining(BoundId id, std::size_t j) const {
    return defining_[static_cast<std::size_t>(id) * m_ + j];
  }

  // Upper bounds: beyond means below; lower bounds: above.
  [[nodiscard]] bool witnessed(BoundId id, std::size_t j, std::size_t k, double value) const {
    const auto& set = defining(id, j);
    if (set.empty()) return true;
    const bool upper = kinds_[id] == BoundKind::upper;
    for (std::uint32_t ref : set) {
      const double y = point(ref)[k];
      if (upper ? y < value : y > value) return true;
    }
    return false;
  }

  // A point that lies on face j of an unaffected bound and strictly inside
  // the bound in every other component becomes one more defining point.
  void record_face_contact(BoundId id, std::span<const double> p, std::uint32_t ref) {
    auto c = coords(id);
    const bool upper = kinds_[id] == BoundKind::upper;
    std::size_t face = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (p[i] == c[i]) {
        if (face != m_) return;
        face = i;
      } else if (upper ? !(p[i] < c[i]) : !(p[i] > c[i])) {
        return;
      }
    }
    if (face != m_ && !defining(id, face).empty()) defining(id, face).push_back(ref);
  }

  [[nodiscard]] bool pair_kept(BoundId lower, BoundId upper) const {
    auto l = coords(lower);
    auto u = coords(upper);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!(l[i] < u[i])) return false;
    }
    return measure_.size(l, u) > epsilon_;
  }

  [[nodiscard]] std::vector<ObjectivePoint> collect(const std::vector<BoundId>& ids) const {
    std::vector<ObjectivePoint> out;
    out.reserve(ids.size());
    for (BoundId id : ids) {
      auto c = coords(id);
      out.emplace_back(c.begin(), c.end());
    }
    return out;
  }

  // Child of `parent` with component k replaced by p[k]. D_k becomes {p};
  // every other defining set keeps the points beyond p[k] in component k.
  // The naive strategy does not track defining points.
  BoundId spawn_child(BoundId parent, std::size_t k, std::span<const double> p, std::uint32_t ref) {
    ObjectivePoint child(coords(parent).begin(), coords(parent).end());
    child[k] = p[k];
    const BoundId id = new_bound(kinds_[parent], child);
    if (strategy_ == Strategy::naive) return id;
    const bool upper = kinds_[parent] == BoundKind::upper;
    for (std::size_t j = 0; j < m_; ++j) {
      auto& set = defining(id, j);
      if (j == k) {
        set.push_back(ref);
        continue;
      }
      for (std::uint32_t y : defining(parent, j)) {
        if (upper ? point(y)[k] < p[k] : point(y)[k] > p[k]) set.push_back(y);
      }
    }
    return id;
  }

  void inherit_evictions(BoundId parent, BoundId child) {
    if (evicted_partners_[parent].empty()) return;
    evicted_partners_[child] = evicted_partners_[parent];
    for (BoundId partner : evicted_partners_[parent]) evicted_partners_[partner].push_back(child);
  }

  void forget_evictions(BoundId id) {
    for (BoundId partner : evicted_partners_[id]) detail::erase_value(evicted_partners_[partner], id);
    std::vector<BoundId>().swap(evicted_partners_[id]);
  }

  [[nodiscard]] bool is_evicted(BoundId lower, BoundId upper) const {
    const auto& partners = evicted_partners_[lower];
    return std::find(partners.begin(), partners.end(), upper) != partners.end();
  }

  // -- improved strategy ----------------------------------------------------

  UpdateCounts apply_improved(std::span<const double> z, std::span<const double> s) {
    UpdateCounts counts;
    const std::uint32_t s_ref = store_point(s);
    const std::uint32_t z_ref = store_point(z);

    // Lower bounds with s, then the opposing indices of the affected pairs.
    std::vector<BoundId> affected;
    for (BoundId l : lower_) {
      if (strictly_less(coords(l), s)) {
        affected.push_back(l);
      } else {
        record_face_contact(l, s, s_ref);
      }
    }
    counts.affected_lower = affected.size();
    std::vector<BoundId> children;
    for (BoundId l : affected) {
      children.clear();
      for (std::size_t k = 0; k < m_; ++k) {
        auto witness = [&](std::size_t j, std::size_t c, double v) { return witnessed(l, j, c, v); };
        if (detail::child_allowed(m_, witness, s[k], k)) children.push_back(spawn_child(l, k, s, s_ref));
      }
      for (BoundId u : opposing_upper_[l]) {
        auto& lowers = opposing_lower_[u];
        detail::erase_value(lowers, l);
        for (BoundId child : children) {
          if (pair_kept(child, u)) {
            lowers.push_back(child);
            opposing_upper_[child].push_back(u);
          }
        }
      }
      remove(lower_, l);
      for (BoundId child : children) insert(lower_, child);
      counts.created_lower += children.size();
    }

    // Upper bounds with z, indices updated against the new L.
    affected.clear();
    for (BoundId u : upper_) {
      if (strictly_less(z, coords(u))) {
        affected.push_back(u);
      } else {
        record_face_contact(u, z, z_ref);
      }
    }
    counts.affected_upper = affected.size();
    for (BoundId u : affected) {
      children.clear();
      for (std::size_t k = 0; k < m_; ++k) {
        auto witness = [&](std::size_t j, std::size_t c, double v) { return witnessed(u, j, c, v); };
        if (detail::child_allowed(m_, witness, z[k], k)) children.push_back(spawn_child(u, k, z, z_ref));
      }
      for (BoundId l : opposing_lower_[u]) {
        auto& uppers = opposing_upper_[l];
        detail::erase_value(uppers, u);
        for (BoundId child : children) {
          if (pair_kept(l, child)) {
            uppers.push_back(child);
            opposing_lower_[child].push_back(l);
          }
        }
      }
      remove(upper_, u);
      for (BoundId child : children) insert(upper_, child);
      counts.created_upper += children.size();
    }
    return counts;
  }

  [[nodiscard]] std::optional<SelectedBox> largest_improved() const {
    std::optional<SelectedBox> best;
    BoundId best_l = 0;
    BoundId best_u = 0;
    double best_size = epsilon_;
    for (BoundId l : lower_) {
      auto lc = coords(l);
      for (BoundId u : opposing_upper_[l]) {
        auto uc = coords(u);
        const double size = measure_.size(lc, uc);
        if (size < best_size) continue;
        if (!best || compare_boxes(lc, uc, size, coords(best_l), coords(best_u), best_size, measure_) > 0) {
          if (!best) best.emplace();
          best_l = l;
          best_u = u;
          best_size = size;
        }
      }
    }
    if (best) fill_selection(*best, best_l, best_u, best_size);
    return best;
  }

  // -- naive strategy -------------------------------------------------------

  // Replace every affected bound by its m children, then keep only the
  // minimal (lower) or maximal (upper) elements without duplicates.
  std::size_t split_and_filter(std::vector<BoundId>& list, BoundKind kind, std::span<const double> point) {
    const bool lower = kind == BoundKind::lower;
    std::vector<BoundId> affected;
    for (BoundId b : list) {
      if (lower ? strictly_less(coords(b), point) : strictly_less(point, coords(b))) affected.push_back(b);
    }
    if (affected.empty()) return 0;

    std::vector<ObjectivePoint> candidates;
    std::vector<BoundId> parents;
    std::vector<std::size_t> components;
    for (BoundId b : affected) {
      for (std::size_t k = 0; k < m_; ++k) {
        ObjectivePoint child(coords(b).begin(), coords(b).end());
        child[k] = point[k];
        candidates.push_back(std::move(child));
        parents.push_back(b);
        components.push_back(k);
      }
      remove(list, b);
    }

    // `covers(a, b)`: a makes b redundant (a <= b for lower, a >= b for upper).
    auto covers = [lower](std::span<const double> a, std::span<const double> b) {
      return lower ? weakly_less(a, b) : weakly_less(b, a);
    };
    std::vector<char> keep(candidates.size(), 1);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      for (BoundId other : list) {
        if (covers(coords(other), candidates[c])) {
          keep[c] = 0;
          break;
        }
      }
      if (!keep[c]) continue;
      for (std::size_t d = 0; d < candidates.size(); ++d) {
        if (d == c || !covers(candidates[d], candidates[c])) continue;
        if (candidates[d] != candidates[c] || d < c) {
          keep[c] = 0;
          break;
        }
      }
    }

    const std::uint32_t ref = store_point(point);
    std::size_t created = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!keep[c]) continue;
      const BoundId child = spawn_child(parents[c], components[c], point, ref);
      inherit_evictions(parents[c], child);
      insert(list, child);
      ++created;
    }
    for (BoundId b : affected) forget_evictions(b);
    return created;
  }

  UpdateCounts apply_naive(std::span<const double> z, std::span<const double> s) {
    UpdateCounts counts;
    const std::size_t lower_before = lower_.size();
    counts.created_lower = split_and_filter(lower_, BoundKind::lower, s);
    counts.affected_lower = lower_before + counts.created_lower - lower_.size();
    const std::size_t upper_before = upper_.size();
    counts.created_upper = split_and_filter(upper_, BoundKind::upper, z);
    counts.affected_upper = upper_before + counts.created_upper - upper_.size();
    return counts;
  }

  [[nodiscard]] std::optional<SelectedBox> largest_naive() const {
    bool found = false;
    BoundId best_l = 0;
    BoundId best_u = 0;
    double best_size = epsilon_;
    for (BoundId l : lower_) {
      const double* lc = bound_coords_.data() + static_cast<std::size_t>(l) * m_;
      for (BoundId u : upper_) {
        const double* uc = bound_coords_.data() + static_cast<std::size_t>(u) * m_;
        bool opposing = true;
        for (std::size_t i = 0; i < m_; ++i) {
          if (!(lc[i] < uc[i])) {
            opposing = false;
            break;
          }
        }
        if (!opposing) continue;
        const double size = measure_.size({lc, m_}, {uc, m_});
        if (size < best_size || !(size > epsilon_)) continue;
        if (found && compare_boxes({lc, m_}, {uc, m_}, size, coords(best_l), coords(best_u), best_size, measure_) <= 0)
          continue;
        if (is_evicted(l, u)) continue;
        found = true;
        best_l = l;
        best_u = u;
        best_size = size;
      }
    }
    if (!found) return std::nullopt;
    SelectedBox result;
    fill_selection(result, best_l, best_u, best_size);
    return result;
  }

  void fill_selection(SelectedBox& out, BoundId l, BoundId u, double size) const {
    out.lower_id = l;
    out.upper_id = u;
    out.size = size;
    auto lc = coords(l);
    auto uc = coords(u);
    out.box.lower.assign(lc.begin(), lc.end());
    out.box.upper.assign(uc.begin(), uc.end());
  }

  std::size_t m_;
  double epsilon_;
  SizeMeasure measure_;
  Strategy strategy_;
  BoxDims start_box_;

  std::vector<BoundKind> kinds_;
  std::vector<double> bound_coords_;       // id * m + i
  std::vector<std::vector<std::uint32_t>> defining_;  // id * m + j -> point indices, empty when virtual
  std::vector<std::uint32_t> position_;    // index in lower_/upper_, kVirtual when dead
  std::vector<double> points_;             // stored z and s points, flat
  std::vector<BoundId> lower_;
  std::vector<BoundId> upper_;
  std::vector<std::vector<BoundId>> opposing_upper_;    // l -> U^l
  std::vector<std::vector<BoundId>> opposing_lower_;    // u -> L^u
  std::vector<std::vector<BoundId>> evicted_partners_;  // naive only
};

}  // namespace hyperbox

#endif  // HYPERBOX_SEARCH_REGION_HPP
