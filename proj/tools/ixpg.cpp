// Command-line front end for the IXP group-formation game.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ixpg/approx.hpp"
#include "ixpg/dynamics.hpp"
#include "ixpg/errors.hpp"
#include "ixpg/generate.hpp"
#include "ixpg/io.hpp"
#include "ixpg/multi.hpp"
#include "ixpg/oracle.hpp"
#include "ixpg/payments.hpp"

namespace {

using namespace ixpg;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kVerifyFailed = 3;
constexpr int kSizeCap = 4;

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) std::cout << text;
  else write_text(path, text);
}

void emit(const std::string& path, const json& report) { emit(path, report.dump(2) + "\n"); }

json base_report(const char* kind, const Instance& inst) {
  return {{"kind", kind}, {"instance_hash", hash_hex(inst)}};
}

Rat parse_rat(const std::string& text, const char* what) {
  try {
    return Rat::parse(text);
  } catch (const std::invalid_argument&) {
    throw InvalidInput(std::string("invalid ") + what + ": " + text);
  }
}

bool single_enumerable(const Instance& inst) {
  return single_assignment_count(inst) <= kEnumerationCap;
}

bool multi_enumerable(const Instance& inst) {
  return inst.facilities() <= kMaxMultiFacilities && multi_assignment_count(inst) <= kEnumerationCap;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::string fixture;
  std::string eps = "1/2";
  GeneratorParams params;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_gen(const GenOptions& o) {
  Instance inst;
  if (o.fixture == "paper-pos") {
    inst = pos_fixture(parse_rat(o.eps, "eps"));
  } else if (o.fixture == "paper-poa") {
    inst = poa_fixture();
  } else {
    if (!o.seed) throw InvalidInput("--seed is required for random instances");
    GeneratorParams p = o.params;
    p.seed = *o.seed;
    inst = random_instance(p);
  }
  emit(o.out, to_json(inst));
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string instance;
  std::string method = "brute";
  bool multi = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

json rounding_report(const Instance& inst, const LpSolution& lp, const IntegralSolution& sol) {
  const Assignment single = project_single(inst, sol.assignment);
  return {{"lp", lp_values_json(lp)},
          {"rounded", to_json(sol)},
          {"ip_feasible", ip_feasible(sol)},
          {"assignment", multi_to_json(sol.assignment)},
          {"cost", to_json(sol.objective)},
          {"social_cost", to_json(social_cost_multi(inst, sol.assignment))},
          {"lp_objective", lp.objective},
          {"single_facility_projection",
           {{"lossy", true},
            {"assignment", to_json(single)},
            {"cost", to_json(social_cost(inst, single))}}}};
}

int cmd_solve(const SolveOptions& o) {
  const Instance inst = read_instance(o.instance);
  json report = base_report("solution", inst);
  report["method"] = o.method;

  if (o.method == "brute") {
    report["mode"] = o.multi ? "multi" : "single";
    if (o.multi) {
      const auto opt = brute_force_optimum_multi(inst);
      report["assignment"] = multi_to_json(opt.assignment);
      report["cost"] = to_json(opt.cost);
    } else {
      const auto opt = brute_force_optimum(inst);
      report["assignment"] = to_json(opt.assignment);
      report["cost"] = to_json(opt.cost);
    }
  } else if (o.method == "lp-det") {
    report["mode"] = "multi";
    const auto lp = solve_relaxation(inst);
    report.update(rounding_report(inst, lp, round_deterministic(lp, inst)));
    report["bound"] = (inst.facilities() + 1) * lp.objective;
  } else if (o.method == "lp-rand") {
    if (!o.seed) throw InvalidInput("--seed is required for lp-rand");
    report["mode"] = "multi";
    const auto lp = solve_relaxation(inst);
    const auto rounded = round_randomized(lp, inst, *o.seed);
    report.update(rounding_report(inst, lp, rounded.solution));
    report["seed"] = rounded.seed;
    report["runs"] = rounded.runs;
  } else {
    report["mode"] = "single";
    const auto lab = to_uniform_labeling(inst);
    report["labeling"] = {{"nodes", lab.nodes},
                          {"labels", lab.labels()},
                          {"facility_labels", lab.facility_labels},
                          {"label_cost", to_json(lab.label_cost)},
                          {"separation", to_json(lab.separation)},
                          {"big_m", to_json(lab.big_m)}};
    const auto best = exhaustive_labeling(lab);
    const auto s = labeling_assignment(lab, best.labels);
    report["labels"] = best.labels;
    report["labeling_cost"] = to_json(best.cost);
    report["assignment"] = to_json(s);
    report["cost"] = to_json(social_cost(inst, s));
  }
  emit(o.out, report);
  return kOk;
}

// ---------------------------------------------------------------- stabilize

struct StabilizeOptions {
  std::string instance;
  std::string alpha = "1";
  bool multi = false;
  std::string start = "optimum";
  std::string trace;
  std::string out;
};

int cmd_stabilize(const StabilizeOptions& o) {
  const Instance inst = read_instance(o.instance);
  const Rat alpha = parse_rat(o.alpha, "alpha");
  require_alpha_range(alpha);
  json report = base_report("state", inst);
  report["mode"] = o.multi ? "multi" : "single";
  report["alpha"] = to_json(alpha);
  report["start"] = o.start;

  json steps = json::array();
  std::optional<Rat> opt_cost;
  if (o.multi) {
    std::optional<MultiAssignment> start;
    if (o.start == "optimum") {
      const auto opt = brute_force_optimum_multi(inst);
      start = opt.assignment;
      opt_cost = opt.cost;
    } else if (multi_enumerable(inst)) {
      opt_cost = brute_force_optimum_multi(inst).cost;
    }
    const auto res = stabilize_multi(inst, start, alpha);
    for (const auto& step : res.trace.steps) steps.push_back(to_json(step));
    report["assignment"] = multi_to_json(res.state.assignment());
    report["prices"] = to_json(res.state.prices());
    report["cost"] = to_json(social_cost_multi(inst, res.state.assignment()));
    report["initial_potential"] = to_json(res.trace.initial_potential);
    if (opt_cost) {
      report["opt_cost"] = to_json(*opt_cost);
      report["ratio"] = to_json(Ratio::of(social_cost_multi(inst, res.state.assignment()), *opt_cost));
    }
  } else {
    std::optional<Assignment> start;
    if (o.start == "optimum") {
      const auto opt = brute_force_optimum(inst);
      start = opt.assignment;
      opt_cost = opt.cost;
    } else if (single_enumerable(inst)) {
      opt_cost = brute_force_optimum(inst).cost;
    }
    const auto res = stabilize_alpha(inst, alpha, start);
    for (const auto& step : res.trace.steps) steps.push_back(to_json(step));
    const Rat cost = social_cost(inst, res.state.assignment());
    report["assignment"] = to_json(res.state.assignment());
    report["prices"] = to_json(res.state.prices());
    report["cost"] = to_json(cost);
    report["initial_potential"] = to_json(res.trace.initial_potential);
    if (opt_cost) {
      report["opt_cost"] = to_json(*opt_cost);
      report["ratio"] = to_json(Ratio::of(cost, *opt_cost));
    }
  }
  report["trace"] = steps;

  if (!o.trace.empty()) {
    std::string lines;
    for (const auto& step : steps) lines += step.dump() + "\n";
    write_text(o.trace, lines);
  }
  emit(o.out, report);
  return kOk;
}

// ---------------------------------------------------------------- payments

struct PaymentsOptions {
  std::string instance;
  std::string mode = "direct";
  bool multi = false;
  std::string assignment;
  std::string out;
};

int cmd_payments(const PaymentsOptions& o) {
  const Instance inst = read_instance(o.instance);
  json report = base_report(o.mode == "double" ? "doubled" : "payments", inst);
  report["mode"] = o.mode;

  if (o.multi) {
    if (o.mode != "peering") throw InvalidInput("--multi is only available with --mode peering");
    const MultiAssignment s = o.assignment.empty()
                                  ? brute_force_optimum_multi(inst).assignment
                                  : multi_assignment_from_json(read_json_file(o.assignment));
    const auto res = peering_payments_multi(inst, s);
    report["multi"] = true;
    report["assignment"] = multi_to_json(s);
    report["feasible"] = res.feasible;
    report["gamma"] = to_json(res.prices);
    report["delta"] = to_json(res.payments);
    json p = json::array();
    for (int k = 0; k < inst.facilities(); ++k) {
      p.push_back({{"facility", k}, {"p", peer_payments_json(res.p[k])}});
    }
    report["p"] = p;
    if (!res.feasible) {
      report["failed_facility"] = res.failed_facility;
      report["violating_agents"] = res.violating_agents;
      report["refutation"] = multi_to_json(res.refutation);
      report["cost"] = to_json(social_cost_multi(inst, s));
      report["refutation_cost"] = to_json(social_cost_multi(inst, res.refutation));
    }
    emit(o.out, report);
    return kOk;
  }

  const Assignment s = o.assignment.empty() ? brute_force_optimum(inst).assignment
                                            : assignment_from_json(read_json_file(o.assignment));
  validate(inst, s);
  report["multi"] = false;
  report["assignment"] = to_json(s);
  if (o.mode == "direct") {
    const auto scheme = direct_payment_scheme(inst, s);
    report["feasible"] = scheme.balanced;
    report["gamma"] = to_json(scheme.prices);
    report["delta"] = to_json(scheme.payments.delta);
    report["total"] = to_json(scheme.payments.total());
    report["unfunded"] = scheme.unfunded;
  } else if (o.mode == "peering") {
    const auto res = peering_payments(inst, s);
    report["feasible"] = res.feasible;
    report["gamma"] = to_json(res.prices);
    report["delta"] = to_json(res.payments.delta);
    report["p"] = peer_payments_json(res.p);
    if (!res.feasible) {
      report["failed_facility"] = res.failed_facility;
      report["violating_agents"] = res.violating_agents;
      report["refutation"] = to_json(res.refutation);
      report["cost"] = to_json(social_cost(inst, s));
      report["refutation_cost"] = to_json(social_cost(inst, res.refutation));
    }
  } else {
    const auto doubled = doubled_weights(inst, s);
    report["instance"] = to_json(doubled.instance);
    report["gamma"] = to_json(doubled.prices);
  }
  emit(o.out, report);
  return kOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string instance;
  bool sweep = false;
  int trials = 100;
  GeneratorParams params;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
};

json analysis(const Instance& inst) {
  const auto report = oracle_report(inst);
  const auto trade = tradeoff_check(inst);
  const auto w = witness_states(inst, trade.optimum.assignment);
  json out = base_report("analysis", inst);
  out["optimum"] = {{"assignment", to_json(report->optimum.assignment)},
                    {"cost", to_json(report->optimum.cost)}};
  out["stable_states"] = report->stabilizable.size();
  out["pos"] = to_json(report->pos);
  out["poa"] = to_json(report->poa);
  out["delta"] = to_json(trade.delta);
  out["tradeoff_ok"] = trade.holds;
  out["tradeoff_skipped"] = trade.skipped;
  if (trade.ratio) out["tradeoff_ratio"] = to_json(*trade.ratio);
  if (trade.bound) out["tradeoff_bound"] = to_json(*trade.bound);
  out["witness"] = w.witness ? json(*w.witness) : json(nullptr);
  return out;
}

int thread_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("IXPG_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) n = std::min(n, limit);
  }
  return std::max(1, n);
}

std::string csv_field(const Ratio& r) { return r.value ? r.value->str() : "unbounded"; }

int cmd_analyze_sweep(const AnalyzeOptions& o) {
  if (!o.seed) throw InvalidInput("--seed is required for a sweep");
  if (o.trials < 1) throw InvalidInput("--trials must be positive");
  GeneratorParams probe = o.params;
  probe.seed = *o.seed;
  const Instance first = random_instance(probe);  // validates the parameters
  if (!single_enumerable(first)) {
    throw SizeCapExceeded("sweep instances exceed the enumeration cap");
  }

  std::vector<std::string> rows(o.trials);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (int t = next++; t < o.trials; t = next++) {
      try {
        GeneratorParams p = o.params;
        p.seed = *o.seed + static_cast<std::uint64_t>(t);
        const Instance inst = random_instance(p);
        const auto report = oracle_report(inst);
        const auto trade = tradeoff_check(inst);
        const auto w = witness_states(inst, trade.optimum.assignment);
        std::ostringstream row;
        row << t << ',' << p.seed << ',' << hash_hex(inst) << ',' << report->optimum.cost.str()
            << ',' << csv_field(report->pos) << ',' << csv_field(report->poa) << ','
            << trade.delta.str() << ',' << (trade.holds ? "true" : "false") << ','
            << (w.witness ? "true" : "false");
        rows[t] = row.str();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min(thread_count(o.threads), o.trials);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  // Rows are indexed by trial, so the output order does not depend on scheduling.
  std::string csv = "trial,seed,instance_hash,opt_cost,pos,poa,delta,tradeoff_ok,witness_ok\n";
  for (const auto& row : rows) csv += row + "\n";
  emit(o.out, csv);
  return kOk;
}

int cmd_analyze(const AnalyzeOptions& o) {
  if (o.sweep) return cmd_analyze_sweep(o);
  if (o.instance.empty()) throw InvalidInput("--instance is required unless --sweep is given");
  emit(o.out, analysis(read_instance(o.instance)));
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string instance;
  std::string report;
  std::string out;
};

class Checker {
 public:
  void require(bool ok, const std::string& reason) {
    if (!ok) violations_.push_back(reason);
  }
  void add(const std::vector<std::string>& reasons) {
    violations_.insert(violations_.end(), reasons.begin(), reasons.end());
  }
  bool ok() const { return violations_.empty(); }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

Rat field_rat(const json& r, const char* name) {
  if (!r.contains(name)) throw InvalidInput(std::string("report has no \"") + name + "\"");
  return rat_from_json(r.at(name));
}

void verify_solution(const Instance& inst, const json& r, Checker& c) {
  const std::string method = r.at("method");
  const bool multi = r.value("mode", "single") == "multi";
  const Rat cost = field_rat(r, "cost");
  if (method == "brute") {
    if (multi) {
      const auto s = multi_assignment_from_json(r.at("assignment"));
      c.require(social_cost_multi(inst, s) == cost, "reported cost does not match the assignment");
      c.require(brute_force_optimum_multi(inst).cost == cost, "assignment is not optimal");
    } else {
      const auto s = assignment_from_json(r.at("assignment"));
      validate(inst, s);
      c.require(social_cost(inst, s) == cost, "reported cost does not match the assignment");
      c.require(brute_force_optimum(inst).cost == cost, "assignment is not optimal");
    }
    return;
  }
  if (method == "labeling-reduce") {
    const auto s = assignment_from_json(r.at("assignment"));
    validate(inst, s);
    c.require(social_cost(inst, s) == cost, "reported cost does not match the assignment");
    c.require(exhaustive_labeling(to_uniform_labeling(inst)).cost == cost,
              "labeling optimum does not match");
    return;
  }
  // Rounded solutions: rebuild the 0/1 point and re-check it.
  const auto rel = build_relaxation(inst);
  const auto& L = rel.layout;
  IntegralSolution sol;
  sol.layout = L;
  sol.values = Eigen::VectorXi::Zero(L.variables());
  const json& x = r.at("rounded");
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) sol.values(L.x_ik(i, k)) = x.at("x_ik").at(i).at(k).get<int>();
  }
  for (const auto& e : x.at("x_ij")) sol.values(L.x_ij(e.at("i"), e.at("j"))) = e.at("value").get<int>();
  for (const auto& e : x.at("x_ijk")) {
    for (int k = 0; k < L.m; ++k) sol.values(L.x_ijk(e.at("i"), e.at("j"), k)) = e.at("values").at(k).get<int>();
  }
  for (int k = 0; k < L.m; ++k) sol.values(L.x_k(k)) = x.at("x_k").at(k).get<int>();
  c.require(ip_feasible(sol), "rounded solution violates the integer program");
  c.require(ip_objective(inst, L, sol.values) == cost, "reported cost does not match the rounded point");
  const auto s = multi_assignment_from_json(r.at("assignment"));
  validate(inst, s);
  for (int i = 0; i < L.n; ++i) {
    for (int k = 0; k < L.m; ++k) {
      c.require(((s[i] >> k & 1U) != 0) == (sol.values(L.x_ik(i, k)) == 1),
                "assignment disagrees with x_ik for agent " + std::to_string(i + 1));
    }
  }
  if (method == "lp-det") {
    const double lp = r.at("lp_objective").get<double>();
    c.require(cost.to_double() <= (L.m + 1) * lp * (1 + 1e-6) + 1e-9,
              "rounded cost exceeds (m+1) times the LP objective");
  }
}

void verify_state(const Instance& inst, const json& r, Checker& c) {
  const Rat alpha = r.contains("alpha") ? field_rat(r, "alpha") : Rat(1);
  const Rat cost = field_rat(r, "cost");
  const RatMatrix prices = matrix_from_json(r.at("prices"), inst.agents(), inst.facilities());
  if (r.value("mode", "single") == "multi") {
    const MultiState state(inst, multi_assignment_from_json(r.at("assignment")), prices);
    c.require(social_cost_multi(inst, state.assignment()) == cost, "reported cost does not match the assignment");
    if (alpha == Rat(1)) c.add(is_stable_multi(inst, state).violations);
    return;
  }
  const State state(inst, assignment_from_json(r.at("assignment")), prices);
  c.require(social_cost(inst, state.assignment()) == cost, "reported cost does not match the assignment");
  c.add(alpha == Rat(1) ? is_stable(inst, state).violations
                        : is_alpha_stable(inst, state, alpha).violations);
}

void verify_payments(const Instance& inst, const json& r, Checker& c) {
  const int n = inst.agents();
  const int m = inst.facilities();
  const std::string mode = r.at("mode");
  const bool feasible = r.at("feasible").get<bool>();
  const RatMatrix gamma = matrix_from_json(r.at("gamma"), n, m);

  if (r.value("multi", false)) {
    const auto s = multi_assignment_from_json(r.at("assignment"));
    if (!feasible) {
      const auto refutation = multi_assignment_from_json(r.at("refutation"));
      validate(inst, refutation);
      c.require(social_cost_multi(inst, refutation) < social_cost_multi(inst, s),
                "refutation is not cheaper than the assignment");
      return;
    }
    RatMatrix delta = RatMatrix::Constant(n, m, Rat());
    for (const auto& entry : r.at("p")) {
      const int k = entry.at("facility");
      const RatMatrix p = peer_payments_from_json(entry.at("p"), n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j || p(i, j).is_zero()) continue;
          c.require(abs(p(i, j)) <= inst.dc(i, j), "payment between agents " + std::to_string(i + 1) +
                                                     " and " + std::to_string(j + 1) + " exceeds dc");
          c.require((s[i] >> k & 1U) && (s[j] >> k & 1U),
                    "payment at " + strategy_name(k) + " between agents that do not both use it");
          delta(j, k) += p(i, j);
        }
      }
    }
    c.require(delta == matrix_from_json(r.at("delta"), n, m), "delta does not match the peer payments");
    c.add(is_stable_multi(inst, MultiState(inst, s, gamma), delta).violations);
    return;
  }

  const auto s = assignment_from_json(r.at("assignment"));
  validate(inst, s);
  const RatVector delta = vector_from_json(r.at("delta"), n);
  if (mode == "direct") {
    for (int i = 0; i < n; ++i) c.require(delta(i).sign() >= 0, "coordinator payments must be non-negative");
    if (!feasible) {
      c.require(!r.at("unfunded").empty(), "infeasible scheme without an unfunded facility");
      return;
    }
  } else {
    if (!feasible) {
      const auto refutation = assignment_from_json(r.at("refutation"));
      validate(inst, refutation);
      c.require(social_cost(inst, refutation) < social_cost(inst, s),
                "refutation is not cheaper than the assignment");
      return;
    }
    const RatMatrix p = peer_payments_from_json(r.at("p"), n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || p(i, j).is_zero()) continue;
        c.require(abs(p(i, j)) <= inst.dc(i, j), "payment between agents " + std::to_string(i + 1) +
                                                   " and " + std::to_string(j + 1) + " exceeds dc");
        c.require(s[i] != kNoFacility && s[i] == s[j], "payment between agents at different facilities");
      }
    }
    c.require(PaymentVector::from_peer_payments(p).delta == delta, "delta does not match the peer payments");
  }
  c.add(is_stable(inst, State(inst, s, gamma), PaymentVector{delta}).violations);
}

void verify_doubled(const Instance& inst, const json& r, Checker& c) {
  const Instance doubled = instance_from_json(r.at("instance"));
  const auto s = assignment_from_json(r.at("assignment"));
  validate(inst, s);
  c.require(doubled.agents() == inst.agents() && doubled.facilities() == inst.facilities(),
            "doubled instance has different dimensions");
  if (!c.ok()) return;
  c.require(doubled.connection_costs() == inst.connection_costs(), "connection costs changed");
  c.require(doubled.facility_costs() == inst.facility_costs(), "facility costs changed");
  for (int i = 0; i < inst.agents(); ++i) {
    for (int j = 0; j < inst.agents(); ++j) {
      c.require(inst.dc(i, j) <= doubled.dc(i, j) && doubled.dc(i, j) <= Rat(2) * inst.dc(i, j),
                "dc'(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ") outside [dc, 2 dc]");
    }
  }
  const RatMatrix gamma = matrix_from_json(r.at("gamma"), inst.agents(), inst.facilities());
  c.add(is_stable(doubled, State(doubled, s, gamma)).violations);
}

void verify_analysis(const Instance& inst, const json& r, Checker& c) {
  const json fresh = analysis(inst);
  for (const char* key : {"pos", "poa", "delta", "tradeoff_ok"}) {
    c.require(r.contains(key) && r.at(key) == fresh.at(key), std::string(key) + " does not match");
  }
  c.require(r.at("optimum").at("cost") == fresh.at("optimum").at("cost"), "optimum cost does not match");
}

int cmd_verify(const VerifyOptions& o) {
  const Instance inst = read_instance(o.instance);
  const json r = read_json_file(o.report);
  Checker c;
  const std::string kind = r.value("kind", "");
  try {
    if (r.value("instance_hash", "") != hash_hex(inst)) {
      c.require(false, "instance hash mismatch");
    } else if (kind == "solution") {
      verify_solution(inst, r, c);
    } else if (kind == "state") {
      verify_state(inst, r, c);
    } else if (kind == "payments") {
      verify_payments(inst, r, c);
    } else if (kind == "doubled") {
      verify_doubled(inst, r, c);
    } else if (kind == "analysis") {
      verify_analysis(inst, r, c);
    } else {
      throw InvalidInput("unknown report kind \"" + kind + "\"");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
  json out = base_report("verification", inst);
  out["report_kind"] = kind;
  out["ok"] = c.ok();
  out["violations"] = c.violations();
  emit(o.out, out);
  return c.ok() ? kOk : kVerifyFailed;
}

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump() << "\n";
  return code;
}

void add_generator_flags(CLI::App* cmd, GeneratorParams& p) {
  cmd->add_option("--n", p.agents, "Number of agents");
  cmd->add_option("--m", p.facilities, "Number of facilities");
  cmd->add_option("--cc-min", p.cc_min);
  cmd->add_option("--cc-max", p.cc_max);
  cmd->add_option("--dc-min", p.dc_min);
  cmd->add_option("--dc-max", p.dc_max);
  cmd->add_option("--fcost-min", p.fcost_min);
  cmd->add_option("--fcost-max", p.fcost_max);
  cmd->add_option("--density", p.density, "Probability that a pair has a nonzero dc");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IXP group-formation game: stability, payments and approximation"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Write a random or named instance");
  g->add_option("--fixture", gen.fixture)->check(CLI::IsMember({"paper-pos", "paper-poa"}));
  g->add_option("--eps", gen.eps, "Epsilon of the paper-pos fixture (exact, e.g. 1/2)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out);
  add_generator_flags(g, gen.params);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Optimum or approximate optimum");
  s->add_option("--instance", solve.instance)->required();
  s->add_option("--method", solve.method)
      ->check(CLI::IsMember({"brute", "lp-det", "lp-rand", "labeling-reduce"}));
  s->add_flag("--multi", solve.multi, "Multi-facility brute force");
  s->add_option("--seed", solve.seed);
  s->add_option("--out", solve.out);

  StabilizeOptions stab;
  auto* st = app.add_subcommand("stabilize", "Run the stabilization procedure");
  st->add_option("--instance", stab.instance)->required();
  st->add_option("--alpha", stab.alpha, "Approximation factor in [1, 2]");
  st->add_flag("--multi", stab.multi);
  st->add_option("--start", stab.start)->check(CLI::IsMember({"optimum", "empty"}));
  st->add_option("--trace", stab.trace, "Write the trace as JSON lines");
  st->add_option("--out", stab.out);

  PaymentsOptions pay;
  auto* p = app.add_subcommand("payments", "Payments that stabilize an assignment");
  p->add_option("--instance", pay.instance)->required();
  p->add_option("--mode", pay.mode)->check(CLI::IsMember({"direct", "peering", "double"}));
  p->add_flag("--multi", pay.multi);
  p->add_option("--assignment", pay.assignment, "JSON assignment (default: the optimum)");
  p->add_option("--out", pay.out);

  AnalyzeOptions an;
  auto* a = app.add_subcommand("analyze", "Price of stability and anarchy, payment tradeoff");
  a->add_option("--instance", an.instance);
  a->add_flag("--sweep", an.sweep, "Analyze generated instances and write CSV");
  a->add_option("--trials", an.trials);
  a->add_option("--seed", an.seed);
  a->add_option("--threads", an.threads, "Worker threads (capped by IXPG_THREADS)");
  a->add_option("--out", an.out);
  add_generator_flags(a, an.params);

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Re-check an emitted report");
  v->add_option("--instance", ver.instance)->required();
  v->add_option("--report", ver.report)->required();
  v->add_option("--out", ver.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(kInvalid, "usage", e.what());
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*st) return cmd_stabilize(stab);
    if (*p) return cmd_payments(pay);
    if (*a) return cmd_analyze(an);
    if (*v) return cmd_verify(ver);
  } catch (const SizeCapExceeded& e) {
    return fail(kSizeCap, "size_cap_exceeded", e.what());
  } catch (const VerificationFailed& e) {
    return fail(kVerifyFailed, "verification_failed", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kInvalid, "invalid_input", e.what());
  } catch (const json::exception& e) {
    return fail(kInvalid, "invalid_input", e.what());
  }
  return kInvalid;
}
