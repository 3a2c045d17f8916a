#ifndef HYPERBOX_IO_HPP
#define HYPERBOX_IO_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "engine.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "metrics.hpp"
#include "protocol.hpp"

namespace hyperbox::io {

/// Points file: header f1..fm, one row per point, 17 significant digits.
inline void write_points_csv(std::ostream& out, const std::vector<ObjectivePoint>& points, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) out << (i ? ",f" : "f") << i + 1;
  out << '\n';
  for (const auto& point : points) {
    detail::require(point.size() == m, "write_points_csv: dimension mismatch");
    for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << protocol::format_number(point[i]);
    out << '\n';
  }
}

inline std::vector<ObjectivePoint> representation_points(const RunReport& report) {
  std::vector<ObjectivePoint> points;
  points.reserve(report.representation.size());
  for (const auto& entry : report.representation) points.push_back(entry.z);
  return points;
}

inline std::vector<ObjectivePoint> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigurationError("points file is empty");
  const std::size_t m = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  std::vector<ObjectivePoint> points;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    ObjectivePoint point;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        point.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigurationError("points file line " + std::to_string(number) + ": bad number '" + cell + "'");
      }
    }
    if (point.size() != m) throw ConfigurationError("points file line " + std::to_string(number) + ": wrong column count");
    points.push_back(std::move(point));
  }
  return points;
}

/// Start box file: {"l0": [...], "u0": [...]}.
inline BoxDims read_start_box(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("start box file: ") + e.what());
  }
  BoxDims box;
  try {
    box.lower = doc.at("l0").get<std::vector<double>>();
    box.upper = doc.at("u0").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("start box file needs numeric arrays l0 and u0: ") + e.what());
  }
  if (box.lower.size() < 2 || !box.valid()) throw ConfigurationError("start box file: need l0 < u0 with m >= 2");
  return box;
}

struct ReportContext {
  std::string problem;
  std::size_t m = 0;
  std::optional<QualityReport> quality;
};

inline nlohmann::ordered_json report_json(const RunReport& report, const ReportContext& context) {
  nlohmann::ordered_json doc;
  doc["problem"] = context.problem;
  doc["m"] = context.m;
  doc["epsilon"] = report.epsilon;
  doc["mode"] = std::string(to_string(report.mode));
  doc["strategy"] = std::string(to_string(report.strategy));
  doc["cardinality"] = report.cardinality();
  doc["iterations"] = report.iterations;
  doc["stalledBoxes"] = report.stalled_boxes;
  doc["skippedDominated"] = report.skipped_dominated;
  doc["finalMaxBoxSize"] = report.final_max_box_size;
  doc["wallTimeMs"] = report.wall_time_total * 1e3;
  doc["regionTimeMs"] = report.region_time * 1e3;
  doc["solveTimeMs"] = report.solve_time * 1e3;
  doc["termination"] = std::string(to_string(report.termination));
  if (!report.abort_cause.empty()) doc["abortCause"] = report.abort_cause;
  if (context.quality) {
    const QualityReport& q = *context.quality;
    doc["empiricalAlpha"] = q.empirical_alpha;
    doc["worstSample"] = q.worst_sample;
    doc["coveringSlack"] = q.covering_slack;
    doc["samples"] = q.samples;
    doc["uniformity"] = q.uniformity ? nlohmann::ordered_json(*q.uniformity) : nlohmann::ordered_json(nullptr);
  }
  return doc;
}

inline void write_report(std::ostream& out, const RunReport& report, const ReportContext& context) {
  out << report_json(report, context).dump(2) << '\n';
}

/**
 * Drive `session` over a line-oriented solver connection: queries go to
 * `to_solver`, replies come from `from_solver`. Sends the termination record
 * at the end, also after a failure. Throws ProtocolError or ContractError
 * naming the offending reply line; the session is aborted first.
 */
inline void serve(Session& session, std::istream& from_solver, std::ostream& to_solver) {
  std::size_t line_number = 0;
  auto fail = [&](const std::string& what, auto make_error) {
    session.abort(what);
    to_solver << protocol::encode_done() << '\n' << std::flush;
    throw make_error(what);
  };
  while (true) {
    const std::optional<PSQuery> query = session.next_query();
    if (!query) break;
    to_solver << protocol::encode_query(*query) << '\n' << std::flush;
    const auto started = Session::Clock::now();
    std::string line;
    if (!std::getline(from_solver, line)) {
      fail("solver closed the connection after line " + std::to_string(line_number),
           [](const std::string& w) { return ProtocolError(w); });
    }
    ++line_number;
    session.add_solve_time(std::chrono::duration<double>(Session::Clock::now() - started).count());
    const std::string where = "solver line " + std::to_string(line_number) + ": ";
    try {
      auto reply = protocol::decode_reply(line, query->query_id, session.region().dimension());
      if (auto* solution = std::get_if<PSSolution>(&reply)) {
        session.submit(*solution);
      } else {
        session.report_no_intersection();
      }
    } catch (const ProtocolError& e) {
      fail(where + e.what(), [](const std::string& w) { return ProtocolError(w); });
    } catch (const ContractError& e) {
      fail(where + e.what(), [](const std::string& w) { return ContractError(w); });
    }
  }
  to_solver << protocol::encode_done() << '\n' << std::flush;
}

}  // namespace hyperbox::io

#endif  // HYPERBOX_IO_HPP
