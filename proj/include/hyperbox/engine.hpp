#ifndef HYPERBOX_ENGINE_HPP
#define HYPERBOX_ENGINE_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "problems.hpp"
#include "scalarization.hpp"
#include "search_region.hpp"

namespace hyperbox {

struct RunConfig {
  double epsilon = 0.1;
  SizeMode mode = SizeMode::absolute;
  Strategy strategy = Strategy::improved;
  std::size_t max_iterations = 100000;

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigurationError("epsilon must be positive and finite");
    if (max_iterations < 1) throw ConfigurationError("max_iterations must be at least 1");
  }
};

struct RepresentationPoint {
  ObjectivePoint z;
  ObjectivePoint s;
  double alpha = 0.0;
  BoxDims box;  // the box whose query produced the point
};

enum class Termination { completed, truncated, aborted };

inline std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::completed: return "completed";
    case Termination::truncated: return "truncated";
    case Termination::aborted: return "aborted";
  }
  return "unknown";
}

struct RunReport {
  std::vector<RepresentationPoint> representation;
  std::size_t iterations = 0;
  std::size_t stalled_boxes = 0;
  std::size_t skipped_dominated = 0;
  /// Size of every selected box, in selection order.
  std::vector<double> selected_sizes;
  double final_max_box_size = 0.0;
  double wall_time_total = 0.0;  // seconds
  double region_time = 0.0;      // bound updates and largest-box queries
  double solve_time = 0.0;       // scalarization backend
  Strategy strategy = Strategy::improved;
  SizeMode mode = SizeMode::absolute;
  double epsilon = 0.0;
  Termination termination = Termination::completed;
  std::string abort_cause;

  [[nodiscard]] std::size_t cardinality() const { return representation.size(); }
};

enum class SubmitOutcome { accepted, skipped_dominated, stalled_evicted };

inline std::string_view to_string(SubmitOutcome outcome) {
  switch (outcome) {
    case SubmitOutcome::accepted: return "accepted";
    case SubmitOutcome::skipped_dominated: return "skipped_dominated";
    case SubmitOutcome::stalled_evicted: return "stalled_evicted";
  }
  return "unknown";
}

/**
 * Step-wise driver: hand out the query for the current largest box, take
 * back its solution and refine the search region.
 *
 * A point is skipped if an earlier representation point weakly dominates it;
 * its s still tightens the lower bounds. If the selected box survives an
 * update, or the backend finds no intersection, that box is evicted so the
 * run always makes progress.
 */
class Session {
 public:
  using Clock = std::chrono::steady_clock;

  Session(const BoxDims& start_box, const RunConfig& config)
      : config_((config.validate(), config)),
        region_(start_box, config.epsilon, config.mode, config.strategy) {
    report_.strategy = config.strategy;
    report_.mode = config.mode;
    report_.epsilon = config.epsilon;
  }

  [[nodiscard]] const SearchRegion& region() const { return region_; }
  [[nodiscard]] const RunConfig& config() const { return config_; }
  [[nodiscard]] const RunReport& report() const { return report_; }
  [[nodiscard]] bool finished() const { return finished_; }
  [[nodiscard]] bool closed() const { return closed_; }

  /// Query for the current largest box, or nullopt once the run is over.
  /// Repeated calls without a submission return the same query.
  std::optional<PSQuery> next_query() {
    if (closed_) throw SessionError("next_query on a closed session");
    if (pending_) return pending_->query;
    if (finished_) return std::nullopt;
    if (report_.iterations >= config_.max_iterations) {
      finish(Termination::truncated);
      return std::nullopt;
    }
    const auto started = Clock::now();
    auto selected = region_.largest_box();
    report_.region_time += seconds_since(started);
    if (!selected) {
      finish(Termination::completed);
      return std::nullopt;
    }
    report_.selected_sizes.push_back(selected->size);
    pending_ = Pending{make_query(selected->box, next_id_++), std::move(*selected)};
    return pending_->query;
  }

  SubmitOutcome submit(const PSSolution& solution) {
    if (closed_) throw SessionError("submit on a closed session");
    if (!pending_) throw ProtocolError("no query is pending");
    if (solution.query_id != pending_->query.query_id) {
      throw ProtocolError("solution for query " + std::to_string(solution.query_id) + ", pending query is " +
                          std::to_string(pending_->query.query_id));
    }
    const std::size_t m = region_.dimension();
    if (solution.z.size() != m || solution.lambda.size() != m) throw ProtocolError("solution dimension mismatch");
    ObjectivePoint s(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(solution.z[i]) || !std::isfinite(solution.lambda[i])) {
        throw ContractError("solution has non-finite entries");
      }
      if (solution.lambda[i] < -kLambdaTolerance) throw ContractError("lambda is negative beyond tolerance");
      s[i] = solution.z[i] + std::max(solution.lambda[i], 0.0);
    }

    ++report_.iterations;
    const auto started = Clock::now();
    const bool dominated = dominated_by_representation(solution.z);
    const UpdateCounts counts = region_.apply_point(solution.z, s);
    const Pending current = std::move(*pending_);
    pending_.reset();
    SubmitOutcome outcome = SubmitOutcome::accepted;
    if (region_.pair_alive(current.selection.lower_id, current.selection.upper_id)) {
      region_.evict(current.selection.lower_id, current.selection.upper_id);
      ++report_.stalled_boxes;
      outcome = SubmitOutcome::stalled_evicted;
    } else if (dominated) {
      ++report_.skipped_dominated;
      outcome = SubmitOutcome::skipped_dominated;
    }
    report_.region_time += seconds_since(started);

    // A stalled point that still split other upper bounds is kept: those
    // bounds are now only justified by it.
    if (!dominated && (outcome == SubmitOutcome::accepted || counts.affected_upper > 0)) {
      report_.representation.push_back({solution.z, std::move(s), solution.alpha, current.selection.box});
    }
    return outcome;
  }

  /// The backend found no point on the pending query's search line.
  void report_no_intersection() {
    if (closed_) throw SessionError("report_no_intersection on a closed session");
    if (!pending_) throw ProtocolError("no query is pending");
    ++report_.iterations;
    const auto started = Clock::now();
    region_.evict(pending_->selection.lower_id, pending_->selection.upper_id);
    report_.region_time += seconds_since(started);
    ++report_.stalled_boxes;
    pending_.reset();
  }

  void abort(std::string cause) {
    report_.abort_cause = std::move(cause);
    pending_.reset();
    finish(Termination::aborted);
  }

  void close() {
    if (!finished_) finish(Termination::truncated);
    closed_ = true;
  }

  void add_solve_time(double seconds) { report_.solve_time += seconds; }

 private:
  struct Pending {
    PSQuery query;
    SelectedBox selection;
  };

  static double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }

  [[nodiscard]] bool dominated_by_representation(const ObjectivePoint& z) const {
    for (const auto& point : report_.representation) {
      if (weakly_less(point.z, z)) return true;
    }
    return false;
  }

  // Largest size over all remaining pairs l < u, pruned or not.
  [[nodiscard]] double max_remaining_box_size() const {
    double largest = 0.0;
    for (BoundId l : region_.lower_ids()) {
      for (BoundId u : region_.upper_ids()) {
        if (strictly_less(region_.coords(l), region_.coords(u))) {
          largest = std::max(largest, region_.measure().size(region_.coords(l), region_.coords(u)));
        }
      }
    }
    return largest;
  }

  void finish(Termination termination) {
    finished_ = true;
    report_.termination = termination;
    report_.final_max_box_size = max_remaining_box_size();
  }

  RunConfig config_;
  SearchRegion region_;
  RunReport report_;
  std::optional<Pending> pending_;
  std::uint64_t next_id_ = 1;
  bool finished_ = false;
  bool closed_ = false;
};

/// Batch run from `start_box` with an in-process backend.
inline RunReport run_representation(const BoxDims& start_box, const RunConfig& config, const Solver& solver) {
  const auto started = Session::Clock::now();
  Session session(start_box, config);
  while (auto query = session.next_query()) {
    const auto solve_started = Session::Clock::now();
    std::optional<PSSolution> solution;
    try {
      solution = solver(*query);
    } catch (const NoIntersection&) {
    } catch (const std::exception& e) {
      session.abort(e.what());
      break;
    }
    session.add_solve_time(std::chrono::duration<double>(Session::Clock::now() - solve_started).count());
    if (solution) {
      try {
        session.submit(*solution);
      } catch (const std::exception& e) {
        session.abort(e.what());
        break;
      }
    } else {
      session.report_no_intersection();
    }
  }
  RunReport report = session.report();
  report.wall_time_total = std::chrono::duration<double>(Session::Clock::now() - started).count();
  return report;
}

/// Batch run of a built-in problem on its [ideal, nadir] start box.
inline RunReport run_representation(const ProblemSpec& problem, const RunConfig& config,
                                    BackendKind backend = BackendKind::automatic, GridOptions grid = {}) {
  return run_representation(problem.start_box(), config, make_solver(problem, backend, std::move(grid)));
}

}  // namespace hyperbox

#endif  // HYPERBOX_ENGINE_HPP
