#include "ixpg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ixpg/errors.hpp"

namespace ixpg {

json to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  throw InvalidInput("expected an exact number (integer or string), got " + j.dump());
}

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InvalidInput(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

const json& array(const json& j, std::size_t size, const std::string& what) {
  if (!j.is_array() || j.size() != size) {
    throw InvalidInput(what + " must be an array of length " + std::to_string(size));
  }
  return j;
}

int index_from_json(const json& j, int limit, const std::string& what) {
  if (!j.is_number_integer()) throw InvalidInput(what + " must be an integer index");
  const long v = j.get<long>();
  if (v < 0 || v >= limit) throw InvalidInput(what + " out of range: " + std::to_string(v));
  return static_cast<int>(v);
}

}  // namespace

json to_json(const RatMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMatrix matrix_from_json(const json& j, int rows, int cols) {
  array(j, rows, "matrix");
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    array(j[i], cols, "matrix row " + std::to_string(i));
    for (int k = 0; k < cols; ++k) m(i, k) = rat_from_json(j[i][k]);
  }
  return m;
}

json to_json(const RatVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

RatVector vector_from_json(const json& j, int size) {
  array(j, size, "vector");
  RatVector v(size);
  for (int i = 0; i < size; ++i) v(i) = rat_from_json(j[i]);
  return v;
}

json to_json(const Instance& inst) {
  return {{"n", inst.agents()},
          {"m", inst.facilities()},
          {"cc", to_json(inst.connection_costs())},
          {"dc", to_json(inst.disconnection_costs())},
          {"fcost", to_json(inst.facility_costs())}};
}

Instance instance_from_json(const json& j) {
  const json& cc = field(j, "cc");
  if (!cc.is_array()) throw InvalidInput("cc must be an array");
  const int n = j.contains("n") ? j["n"].get<int>() : static_cast<int>(cc.size());
  const json& fcost = field(j, "fcost");
  if (!fcost.is_array()) throw InvalidInput("fcost must be an array");
  const int m = j.contains("m") ? j["m"].get<int>() : static_cast<int>(fcost.size());
  if (n < 0 || m < 0) throw InvalidInput("n and m must be non-negative");
  return Instance(matrix_from_json(cc, n, m), matrix_from_json(field(j, "dc"), n, n),
                  vector_from_json(fcost, m));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

Instance read_instance(const std::string& path) {
  try {
    return instance_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::string hash_hex(const Instance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(instance_hash(inst)));
  return buf;
}

json to_json(const Assignment& s) {
  json out = json::array();
  for (Strategy x : s) out.push_back(x == kNoFacility ? json(nullptr) : json(x));
  return out;
}

Assignment assignment_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("assignment must be an array");
  Assignment s;
  for (const auto& x : j) {
    if (x.is_null()) s.push_back(kNoFacility);
    else if (x.is_number_integer()) s.push_back(x.get<int>());
    else throw InvalidInput("assignment entries must be a facility index or null");
  }
  return s;
}

json multi_to_json(const MultiAssignment& s) {
  json out = json::array();
  for (FacilitySet x : s) {
    json set = json::array();
    for (int k = 0; x >> k; ++k) {
      if (x >> k & 1U) set.push_back(k);
    }
    out.push_back(std::move(set));
  }
  return out;
}

MultiAssignment multi_assignment_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("multi assignment must be an array of arrays");
  MultiAssignment s;
  for (const auto& set : j) {
    if (!set.is_array()) throw InvalidInput("multi assignment must be an array of arrays");
    FacilitySet x = 0;
    for (const auto& k : set) x |= FacilitySet{1} << index_from_json(k, kMaxMultiFacilities, "facility");
    s.push_back(x);
  }
  return s;
}

json to_json(const Ratio& r) {
  if (!r.value) return {{"unbounded", true}};
  return to_json(*r.value);
}

json to_json(const TraceStep& step) {
  json out;
  if (step.kind == TraceStep::Kind::improve) {
    out = {{"step", "improve"},
           {"agent", step.agent},
           {"from", step.from == kNoFacility ? json(nullptr) : json(step.from)},
           {"to", step.to == kNoFacility ? json(nullptr) : json(step.to)}};
  } else {
    out = {{"step", "close"},
           {"facility", step.facility},
           {"moved", step.moved},
           {"targets", to_json(Assignment(step.targets))}};
  }
  out["potential"] = to_json(step.potential);
  return out;
}

json to_json(const MultiTraceStep& step) {
  json out;
  if (step.kind == MultiTraceStep::Kind::improve) {
    out = {{"step", "improve"},
           {"agent", step.agent},
           {"from", multi_to_json({step.from})[0]},
           {"to", multi_to_json({step.to})[0]}};
  } else {
    out = {{"step", "close"},
           {"facility", step.facility},
           {"moved", step.moved},
           {"targets", multi_to_json(step.targets)}};
  }
  out["potential"] = to_json(step.potential);
  return out;
}

json peer_payments_json(const RatMatrix& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
      if (!p(i, j).is_zero()) out.push_back({{"i", i}, {"j", j}, {"amount", to_json(p(i, j))}});
    }
  }
  return out;
}

RatMatrix peer_payments_from_json(const json& j, int agents) {
  if (!j.is_array()) throw InvalidInput("peer payments must be an array");
  RatMatrix p = RatMatrix::Constant(agents, agents, Rat());
  for (const auto& e : j) {
    const int a = index_from_json(field(e, "i"), agents, "payer");
    const int b = index_from_json(field(e, "j"), agents, "payee");
    if (a == b) throw InvalidInput("an agent cannot pay itself");
    const Rat amount = rat_from_json(field(e, "amount"));
    p(a, b) += amount;
    p(b, a) -= amount;
  }
  return p;
}

json to_json(const IntegralSolution& sol) {
  const auto& L = sol.layout;
  json x_ik = json::array();
  for (int i = 0; i < L.n; ++i) {
    json row = json::array();
    for (int k = 0; k < L.m; ++k) row.push_back(sol.values(L.x_ik(i, k)));
    x_ik.push_back(std::move(row));
  }
  json x_ij = json::array();
  json x_ijk = json::array();
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) {
      x_ij.push_back({{"i", i}, {"j", j}, {"value", sol.values(L.x_ij(i, j))}});
      json shared = json::array();
      for (int k = 0; k < L.m; ++k) shared.push_back(sol.values(L.x_ijk(i, j, k)));
      x_ijk.push_back({{"i", i}, {"j", j}, {"values", std::move(shared)}});
    }
  }
  json x_k = json::array();
  for (int k = 0; k < L.m; ++k) x_k.push_back(sol.values(L.x_k(k)));
  return {{"x_ik", x_ik}, {"x_ij", x_ij}, {"x_ijk", x_ijk}, {"x_k", x_k},
          {"objective", to_json(sol.objective)}, {"assignment", multi_to_json(sol.assignment)}};
}

json lp_values_json(const LpSolution& lp) {
  const auto& L = lp.layout;
  json x_ik = json::array();
  for (int i = 0; i < L.n; ++i) {
    json row = json::array();
    for (int k = 0; k < L.m; ++k) row.push_back(lp.values(L.x_ik(i, k)));
    x_ik.push_back(std::move(row));
  }
  json x_ij = json::array();
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) {
      x_ij.push_back({{"i", i}, {"j", j}, {"value", lp.values(L.x_ij(i, j))}});
    }
  }
  json x_k = json::array();
  for (int k = 0; k < L.m; ++k) x_k.push_back(lp.values(L.x_k(k)));
  return {{"x_ik", x_ik}, {"x_ij", x_ij}, {"x_k", x_k}, {"objective", lp.objective}};
}

}  // namespace ixpg
