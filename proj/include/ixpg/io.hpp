#pragma once

#include <string>

#include <json.hpp>

#include "ixpg/approx.hpp"
#include "ixpg/dynamics.hpp"
#include "ixpg/multi.hpp"
#include "ixpg/oracle.hpp"
#include "ixpg/payments.hpp"

namespace ixpg {

using nlohmann::json;

/// Exact rationals travel as strings: "3", "-1/2". Parsing also accepts JSON
/// integers and decimal strings ("0.25"); JSON floats are rejected because
/// they are not exact.
json to_json(const Rat& r);
Rat rat_from_json(const json& j);

/// {"n","m","cc","dc","fcost"}.
json to_json(const Instance& inst);
Instance instance_from_json(const json& j);

/// Throws InvalidInput for unreadable files or malformed JSON.
json read_json_file(const std::string& path);
Instance read_instance(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// 16 hex digits of instance_hash.
std::string hash_hex(const Instance& inst);

/// Facility index or null.
json to_json(const Assignment& s);
Assignment assignment_from_json(const json& j);

/// Array of facility-index arrays.
json multi_to_json(const MultiAssignment& s);
MultiAssignment multi_assignment_from_json(const json& j);

json to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const json& j, int rows, int cols);
json to_json(const RatVector& v);
RatVector vector_from_json(const json& j, int size);

json to_json(const Ratio& r);

json to_json(const TraceStep& step);
json to_json(const MultiTraceStep& step);

/// Nonzero peer payments as {"i", "j", "amount"} with i < j and the amount
/// paid from i to j (negative when j pays i).
json peer_payments_json(const RatMatrix& p);
RatMatrix peer_payments_from_json(const json& j, int agents);

json to_json(const IntegralSolution& sol);
json lp_values_json(const LpSolution& lp);

}  // namespace ixpg
