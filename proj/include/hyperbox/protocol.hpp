#ifndef HYPERBOX_PROTOCOL_HPP
#define HYPERBOX_PROTOCOL_HPP

// Line-delimited JSON records exchanged with an external scalarization solver.
//
//   engine -> solver   {"query_id":3,"p":[...],"q":[...]}
//   solver -> engine   {"query_id":3,"alpha":...,"z":[...],"lambda":[...],"x":[...]}
//   solver -> engine   {"query_id":3,"no_intersection":true}
//   engine -> solver   {"done":true}
//
// Numbers are written with 17 significant digits so doubles survive the trip.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "errors.hpp"
#include "scalarization.hpp"

namespace hyperbox::protocol {

inline std::string format_number(double value) {
  if (!std::isfinite(value)) throw ProtocolError("cannot encode non-finite number");
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

inline std::string format_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  out += ']';
  return out;
}

inline std::string encode_query(const PSQuery& query) {
  return "{\"query_id\":" + std::to_string(query.query_id) + ",\"p\":" + format_array(query.p) +
         ",\"q\":" + format_array(query.q) + "}";
}

inline std::string encode_solution(const PSSolution& solution) {
  std::string out = "{\"query_id\":" + std::to_string(solution.query_id) +
                    ",\"alpha\":" + format_number(solution.alpha) + ",\"z\":" + format_array(solution.z) +
                    ",\"lambda\":" + format_array(solution.lambda);
  if (solution.decision) out += ",\"x\":" + format_array(*solution.decision);
  return out + "}";
}

inline std::string encode_no_intersection(std::uint64_t query_id) {
  return "{\"query_id\":" + std::to_string(query_id) + ",\"no_intersection\":true}";
}

inline std::string encode_done() { return "{\"done\":true}"; }

namespace detail {

inline nlohmann::json parse_object(std::string_view line) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("malformed record: ") + e.what());
  }
  if (!record.is_object()) throw ProtocolError("record is not an object");
  return record;
}

inline std::uint64_t read_id(const nlohmann::json& record) {
  auto it = record.find("query_id");
  if (it == record.end() || !it->is_number_unsigned()) throw ProtocolError("missing or invalid query_id");
  return it->get<std::uint64_t>();
}

inline ObjectivePoint read_vector(const nlohmann::json& record, const char* field, std::size_t m) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_array()) throw ProtocolError(std::string("missing array '") + field + "'");
  if (m != 0 && it->size() != m) {
    throw ProtocolError(std::string("array '") + field + "' has " + std::to_string(it->size()) +
                        " entries, expected " + std::to_string(m));
  }
  ObjectivePoint out;
  out.reserve(it->size());
  for (const auto& value : *it) {
    if (!value.is_number()) throw ProtocolError(std::string("non-numeric entry in '") + field + "'");
    out.push_back(value.get<double>());
  }
  return out;
}

}  // namespace detail

/// Solver side: the next query, or nullopt on the termination record.
inline std::optional<PSQuery> decode_query(std::string_view line) {
  const auto record = detail::parse_object(line);
  if (auto done = record.find("done"); done != record.end()) {
    if (done->is_boolean() && done->get<bool>()) return std::nullopt;
    throw ProtocolError("invalid 'done' field");
  }
  PSQuery query;
  query.query_id = detail::read_id(record);
  query.p = detail::read_vector(record, "p", 0);
  query.q = detail::read_vector(record, "q", query.p.size());
  if (query.p.size() < 2) throw ProtocolError("query dimension must be at least 2");
  return query;
}

struct NoIntersectionReply {
  std::uint64_t query_id = 0;
};

using SolverReply = std::variant<PSSolution, NoIntersectionReply>;

/**
 * Engine side: decode a solver reply to query `expected_id` in dimension m.
 * Slack entries in [-1e-12, 0) are clamped to 0; s is recomputed as z + lambda.
 */
inline SolverReply decode_reply(std::string_view line, std::uint64_t expected_id, std::size_t m) {
  const auto record = detail::parse_object(line);
  const std::uint64_t id = detail::read_id(record);
  if (id != expected_id) {
    throw ProtocolError("reply for query " + std::to_string(id) + ", expected " + std::to_string(expected_id));
  }
  if (auto flag = record.find("no_intersection"); flag != record.end()) {
    if (flag->is_boolean() && flag->get<bool>()) return NoIntersectionReply{id};
    throw ProtocolError("invalid 'no_intersection' field");
  }
  PSSolution solution;
  solution.query_id = id;
  auto alpha = record.find("alpha");
  if (alpha == record.end() || !alpha->is_number()) throw ProtocolError("missing or invalid 'alpha'");
  solution.alpha = alpha->get<double>();
  solution.z = detail::read_vector(record, "z", m);
  solution.lambda = detail::read_vector(record, "lambda", m);
  if (record.contains("x")) solution.decision = detail::read_vector(record, "x", 0);
  solution.s.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (solution.lambda[i] < 0.0) {
      if (solution.lambda[i] < -kLambdaTolerance) {
        throw ContractError("lambda[" + std::to_string(i) + "] is negative beyond tolerance");
      }
      solution.lambda[i] = 0.0;
    }
    solution.s[i] = solution.z[i] + solution.lambda[i];
  }
  return solution;
}

/// decode_reply for callers that do not expect a no-intersection reply.
inline PSSolution decode_solution(std::string_view line, std::uint64_t expected_id, std::size_t m) {
  auto reply = decode_reply(line, expected_id, m);
  if (auto* solution = std::get_if<PSSolution>(&reply)) return *solution;
  throw ProtocolError("unexpected no_intersection reply");
}

}  // namespace hyperbox::protocol

#endif  // HYPERBOX_PROTOCOL_HPP
