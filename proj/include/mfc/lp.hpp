#pragma once

// Solver-neutral LP-format export of the arc-based MILP (MTZ ordering,
// big-M time propagation), a structural reader for audits, and import of
// external solver values back into a Solution.
//
// Naming (all indices 1-based except nodes, where 0 is the depot):
//   x_i_j_k  arc i->j used by slot k        y_tau_v  slot v of type tau active
//   A_i_k    arrival of slot k at node i    W_j / L_j  wait / lateness at client j
//   u_j_k    MTZ visit order
// A_{n+1}_k is the return time of slot k to the depot.
//
// Constraint rows are named <family>_<indices> with families
//   cov depout depin flow mtz link fleetmin fleettot time winopen winclose
//   batt fuel sym

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfc/evaluation.hpp"
#include "mfc/model.hpp"
#include "mfc/solution.hpp"

namespace mfc {

enum class BigMMode { paper_default, tightened };

struct BigMPolicy {
  double mtz_M = 0.0;
  double time_M = 0.0;
  BigMMode mode = BigMMode::paper_default;
  bool symmetry_breaking = false;
};

namespace detail {

inline double max_service(const Instance& inst) {
  double m = 0.0;
  for (const auto& c : inst.clients)
    for (const auto& vt : inst.types) m = std::max(m, service_time(c, vt));
  return m;
}

inline double max_travel(const Instance& inst) {
  double m = 0.0;
  for (double t : inst.travel_time.raw()) m = std::max(m, t);
  return m;
}

}  // namespace detail

/// MTZ M = number of clients; time M = horizon + longest service + longest leg.
inline BigMPolicy make_bigm_policy(const Instance& inst, BigMMode mode = BigMMode::paper_default,
                                   bool symmetry_breaking = false) {
  BigMPolicy p;
  p.mtz_M = static_cast<double>(inst.num_clients());
  p.time_M = inst.coeffs.horizon + detail::max_service(inst) + detail::max_travel(inst);
  p.mode = mode;
  p.symmetry_breaking = symmetry_breaking;
  return p;
}

/// Flat slot table: k (1-based) -> (type, index) with types in catalog order.
inline std::vector<SlotId> slot_table(const Instance& inst) {
  std::vector<SlotId> slots;
  for (std::size_t t = 0; t < inst.types.size(); ++t)
    for (int v = 0; v < inst.types[t].max_slots; ++v) slots.push_back({static_cast<int>(t), v});
  return slots;
}

namespace lpnames {

inline std::string x(std::size_t i, std::size_t j, std::size_t k) {
  return "x_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}
inline std::string y(SlotId s) {
  return "y_" + std::to_string(s.type + 1) + "_" + std::to_string(s.index + 1);
}
inline std::string A(std::size_t i, std::size_t k) {
  return "A_" + std::to_string(i) + "_" + std::to_string(k);
}
inline std::string W(std::size_t j) { return "W_" + std::to_string(j); }
inline std::string L(std::size_t j) { return "L_" + std::to_string(j); }
inline std::string u(std::size_t j, std::size_t k) {
  return "u_" + std::to_string(j) + "_" + std::to_string(k);
}

}  // namespace lpnames

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

/// Objective coefficient of every variable with a nonzero cost.
inline std::vector<std::pair<std::string, double>> objective_terms(const Instance& inst) {
  const auto& cf = inst.coeffs;
  const auto slots = slot_table(inst);
  const std::size_t nodes = inst.num_nodes();
  std::vector<std::pair<std::string, double>> terms;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto& vt = inst.types[static_cast<std::size_t>(slots[k].type)];
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j) {
        if (i == j) continue;
        const double s = j == 0 ? 0.0 : service_time(inst.client(static_cast<int>(j)), vt);
        const double t = inst.travel_time(i, j);
        const double c = cf.alpha * (t + s) + cf.beta * inst.distance(i, j) * vt.fuel_rate +
                         cf.zeta * vt.opex_hr * t;
        if (c != 0.0) terms.emplace_back(lpnames::x(i, j, k + 1), c);
      }
  }
  for (const auto& s : slots) {
    const double c = cf.epsilon * inst.types[static_cast<std::size_t>(s.type)].capex_day;
    if (c != 0.0) terms.emplace_back(lpnames::y(s), c);
  }
  for (std::size_t j = 1; j < nodes; ++j)
    if (cf.lambda_w != 0.0) terms.emplace_back(lpnames::W(j), cf.lambda_w);
  for (std::size_t j = 1; j < nodes; ++j)
    if (cf.delta != 0.0) terms.emplace_back(lpnames::L(j), cf.delta);
  return terms;
}

namespace detail {

class LpWriter {
 public:
  explicit LpWriter(std::ostringstream& os) : os_(os) {}

  void begin_row(const std::string& name) {
    os_ << " " << name << ":";
    col_ = 0;
    first_ = true;
  }
  void term(double coef, const std::string& var) {
    if (coef == 0.0) return;
    if (col_ == 8) {
      os_ << "\n   ";
      col_ = 0;
    }
    const bool neg = coef < 0.0;
    const double mag = std::abs(coef);
    os_ << (neg ? " -" : (first_ ? "" : " +"));
    if (mag != 1.0) os_ << " " << format_number(mag);
    os_ << " " << var;
    first_ = false;
    ++col_;
  }
  void end_row(const char* op, double rhs) { os_ << " " << op << " " << format_number(rhs) << "\n"; }
  bool empty_row() const { return first_; }

 private:
  std::ostringstream& os_;
  int col_ = 0;
  bool first_ = true;
};

inline void check_bigm(double m, const char* what) {
  if (!std::isfinite(m) || m > 1e12)
    throw Error("bigm_overflow", std::string(what) + " big-M exceeds LP number precision");
}

}  // namespace detail

/// Writes the full model. Byte-identical for identical inputs.
inline std::string emit(const Instance& inst, const BigMPolicy& policy) {
  detail::check_bigm(policy.mtz_M, "MTZ");
  detail::check_bigm(policy.time_M, "time");
  const auto& cf = inst.coeffs;
  const auto slots = slot_table(inst);
  const std::size_t n = inst.num_clients();
  const std::size_t nodes = inst.num_nodes();
  const std::size_t ret = nodes;  // return-to-depot time node
  const double M = policy.mtz_M;

  std::ostringstream os;
  detail::LpWriter w(os);
  os << "\\ mfcroute FSMCVRPTW model\n";
  os << "\\ instance " << inst.name << ", clients " << n << ", slots " << slots.size()
     << ", bigm " << (policy.mode == BigMMode::paper_default ? "paper" : "tight") << "\n";

  os << "Minimize\n";
  w.begin_row("obj");
  for (const auto& [var, c] : objective_terms(inst)) w.term(c, var);
  if (w.empty_row()) {
    os << " 0 " << (slots.empty() ? std::string("W_1") : lpnames::y(slots.front()));
  }
  os << "\n";

  os << "Subject To\n";
  // coverage
  for (std::size_t j = 1; j <= n; ++j) {
    w.begin_row("cov_" + std::to_string(j));
    for (std::size_t k = 1; k <= slots.size(); ++k)
      for (std::size_t i = 0; i < nodes; ++i)
        if (i != j) w.term(1, lpnames::x(i, j, k));
    w.end_row("=", 1);
  }
  // depot departure and return tied to slot activation
  for (std::size_t k = 1; k <= slots.size(); ++k) {
    const auto y = lpnames::y(slots[k - 1]);
    w.begin_row("depout_" + std::to_string(k));
    for (std::size_t j = 1; j <= n; ++j) w.term(1, lpnames::x(0, j, k));
    w.term(-1, y);
    w.end_row("=", 0);
    w.begin_row("depin_" + std::to_string(k));
    for (std::size_t i = 1; i <= n; ++i) w.term(1, lpnames::x(i, 0, k));
    w.term(-1, y);
    w.end_row("=", 0);
  }
  // flow conservation
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= slots.size(); ++k) {
      w.begin_row("flow_" + std::to_string(j) + "_" + std::to_string(k));
      for (std::size_t i = 0; i < nodes; ++i)
        if (i != j) w.term(1, lpnames::x(i, j, k));
      for (std::size_t i = 0; i < nodes; ++i)
        if (i != j) w.term(-1, lpnames::x(j, i, k));
      w.end_row("=", 0);
    }
  // MTZ ordering
  for (std::size_t k = 1; k <= slots.size(); ++k)
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) {
        if (i == j) continue;
        w.begin_row("mtz_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k));
        w.term(1, lpnames::u(i, k));
        w.term(-1, lpnames::u(j, k));
        w.term(M, lpnames::x(i, j, k));
        w.end_row("<=", M - 1);
      }
  // arc use requires an active slot
  for (std::size_t k = 1; k <= slots.size(); ++k)
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j) {
        if (i == j) continue;
        w.begin_row("link_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k));
        w.term(1, lpnames::x(i, j, k));
        w.term(-1, lpnames::y(slots[k - 1]));
        w.end_row("<=", 0);
      }
  // fleet size
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    w.begin_row("fleetmin_" + std::to_string(t + 1));
    for (const auto& s : slots)
      if (static_cast<std::size_t>(s.type) == t) w.term(1, lpnames::y(s));
    if (w.empty_row()) os << " 0 " << lpnames::W(1);
    w.end_row(">=", inst.types[t].min_slots);
  }
  w.begin_row("fleettot");
  for (const auto& s : slots) w.term(1, lpnames::y(s));
  if (w.empty_row()) os << " 0 " << lpnames::W(1);
  w.end_row("<=", inst.total_fleet_cap);
  // time propagation
  for (std::size_t k = 1; k <= slots.size(); ++k) {
    const auto& vt = inst.types[static_cast<std::size_t>(slots[k - 1].type)];
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j) {
        if (i == j) continue;
        const double s_i = i == 0 ? 0.0 : service_time(inst.client(static_cast<int>(i)), vt);
        const double t_ij = inst.travel_time(i, j);
        double m = policy.time_M;
        if (policy.mode == BigMMode::tightened) {
          const double latest_i = i == 0 ? cf.t_start : inst.client(static_cast<int>(i)).window_close;
          const double open_j = j == 0 ? 0.0 : inst.client(static_cast<int>(j)).window_open;
          m = std::min(m, std::max(0.0, latest_i + s_i + t_ij - open_j));
        }
        w.begin_row("time_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k));
        w.term(1, lpnames::A(j == 0 ? ret : j, k));
        w.term(-1, lpnames::A(i, k));
        if (i != 0) w.term(-1, lpnames::W(i));
        w.term(-m, lpnames::x(i, j, k));
        w.end_row(">=", s_i + t_ij - m);
      }
  }
  // service windows
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= slots.size(); ++k) {
      const Client& c = inst.client(static_cast<int>(j));
      w.begin_row("winopen_" + std::to_string(j) + "_" + std::to_string(k));
      w.term(1, lpnames::A(j, k));
      w.term(1, lpnames::W(j));
      w.end_row(">=", c.window_open);
    }
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= slots.size(); ++k) {
      const Client& c = inst.client(static_cast<int>(j));
      const auto& vt = inst.types[static_cast<std::size_t>(slots[k - 1].type)];
      const double tm = policy.time_M;
      w.begin_row("winclose_" + std::to_string(j) + "_" + std::to_string(k));
      w.term(1, lpnames::A(j, k));
      w.term(1, lpnames::W(j));
      w.term(-1, lpnames::L(j));
      for (std::size_t i = 0; i < nodes; ++i)
        if (i != j) w.term(tm, lpnames::x(i, j, k));
      w.end_row("<=", c.window_close - service_time(c, vt) + tm);
    }
  // battery and fuel budgets
  for (std::size_t k = 1; k <= slots.size(); ++k) {
    const auto& vt = inst.types[static_cast<std::size_t>(slots[k - 1].type)];
    w.begin_row("batt_" + std::to_string(k));
    for (std::size_t j = 1; j <= n; ++j) {
      const double e = inst.client(static_cast<int>(j)).energy_demand;
      for (std::size_t i = 0; i < nodes; ++i)
        if (i != j) w.term(e, lpnames::x(i, j, k));
    }
    w.term(-vt.battery * cf.sigma_batt, lpnames::y(slots[k - 1]));
    w.end_row("<=", 0);
    w.begin_row("fuel_" + std::to_string(k));
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j)
        if (i != j) w.term(inst.distance(i, j) * vt.fuel_rate, lpnames::x(i, j, k));
    w.term(-vt.fuel_cap * cf.sigma_fuel, lpnames::y(slots[k - 1]));
    w.end_row("<=", 0);
  }
  if (policy.symmetry_breaking) {
    for (const auto& s : slots) {
      if (s.index == 0) continue;
      w.begin_row("sym_" + std::to_string(s.type + 1) + "_" + std::to_string(s.index + 1));
      w.term(1, lpnames::y(s));
      w.term(-1, lpnames::y({s.type, s.index - 1}));
      w.end_row("<=", 0);
    }
  }

  os << "Bounds\n";
  for (std::size_t k = 1; k <= slots.size(); ++k) {
    os << " " << lpnames::A(0, k) << " = " << format_number(cf.t_start) << "\n";
    for (std::size_t i = 1; i <= ret; ++i)
      os << " 0 <= " << lpnames::A(i, k) << " <= " << format_number(cf.horizon) << "\n";
  }
  for (std::size_t k = 1; k <= slots.size(); ++k)
    for (std::size_t j = 1; j <= n; ++j)
      os << " 1 <= " << lpnames::u(j, k) << " <= " << n << "\n";

  os << "Generals\n";
  for (std::size_t k = 1; k <= slots.size(); ++k)
    for (std::size_t j = 1; j <= n; ++j) os << " " << lpnames::u(j, k) << "\n";

  os << "Binaries\n";
  for (std::size_t k = 1; k <= slots.size(); ++k)
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j)
        if (i != j) os << " " << lpnames::x(i, j, k) << "\n";
  for (const auto& s : slots) os << " " << lpnames::y(s) << "\n";
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Structural reader

struct ModelSummary {
  std::map<std::string, int> variables;    // family -> distinct variable count
  std::map<std::string, int> constraints;  // family -> row count
  int objective_terms = 0;
  int binaries = 0;
  int generals = 0;
  bool operator==(const ModelSummary&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const ModelSummary& s) {
  os << "vars{";
  for (const auto& [k, v] : s.variables) os << k << ":" << v << " ";
  os << "} rows{";
  for (const auto& [k, v] : s.constraints) os << k << ":" << v << " ";
  return os << "} obj=" << s.objective_terms << " bin=" << s.binaries << " gen=" << s.generals;
}

/// Closed-form family sizes of `emit(inst, policy)`.
inline ModelSummary expected_summary(const Instance& inst, const BigMPolicy& policy) {
  const int J = static_cast<int>(inst.num_clients());
  const int N = J + 1;
  const int K = inst.total_slots();
  const int T = static_cast<int>(inst.types.size());
  ModelSummary s;
  auto put = [](std::map<std::string, int>& m, const char* key, int v) {
    if (v > 0) m[key] = v;
  };
  put(s.variables, "x", K * N * (N - 1));
  put(s.variables, "y", K);
  put(s.variables, "A", K * (N + 1));
  put(s.variables, "W", J);
  put(s.variables, "L", J);
  put(s.variables, "u", K * J);
  put(s.constraints, "cov", J);
  put(s.constraints, "depout", K);
  put(s.constraints, "depin", K);
  put(s.constraints, "flow", J * K);
  put(s.constraints, "mtz", K * J * (J - 1));
  put(s.constraints, "link", K * N * (N - 1));
  put(s.constraints, "fleetmin", T);
  put(s.constraints, "fleettot", 1);
  put(s.constraints, "time", K * N * (N - 1));
  put(s.constraints, "winopen", J * K);
  put(s.constraints, "winclose", J * K);
  put(s.constraints, "batt", K);
  put(s.constraints, "fuel", K);
  if (policy.symmetry_breaking) {
    int sym = 0;
    for (const auto& vt : inst.types) sym += std::max(0, vt.max_slots - 1);
    put(s.constraints, "sym", sym);
  }
  s.binaries = K * N * (N - 1) + K;
  s.generals = K * J;
  // Arc costs are positive on a metric with distinct sites.
  s.objective_terms = K * N * (N - 1) + (inst.coeffs.lambda_w != 0.0 ? J : 0) +
                      (inst.coeffs.delta != 0.0 ? J : 0);
  for (const auto& vt : inst.types)
    if (inst.coeffs.epsilon * vt.capex_day != 0.0) s.objective_terms += vt.max_slots;
  return s;
}

namespace detail {

inline bool is_number(std::string_view tok) {
  if (tok.empty()) return false;
  double v;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return ec == std::errc() && p == tok.data() + tok.size();
}

inline bool is_identifier(std::string_view tok) {
  return !tok.empty() && (std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_');
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

inline std::string family_of(std::string_view name) {
  const auto pos = name.find('_');
  return std::string(pos == std::string_view::npos ? name : name.substr(0, pos));
}

}  // namespace detail

/// Reads LP text produced by `emit` (or any file in the same grammar subset)
/// and counts variables and rows per family.
inline ModelSummary parse_model(std::string_view text) {
  // strip comments, isolate ':' and relational operators
  std::string cleaned;
  cleaned.reserve(text.size() + 64);
  bool comment = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') comment = false;
    if (comment) continue;
    if (ch == '\\') {
      comment = true;
      continue;
    }
    if (ch == ':') {
      cleaned += " : ";
    } else if (ch == '<' || ch == '>') {
      cleaned += ' ';
      cleaned += ch;
      if (i + 1 < text.size() && text[i + 1] == '=') {
        cleaned += '=';
        ++i;
      }
      cleaned += ' ';
    } else if (ch == '=') {
      cleaned += " = ";
    } else {
      cleaned += ch;
    }
  }
  std::istringstream in(cleaned);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);

  enum class Sec { none, objective, constraints, bounds, generals, binaries, end };
  Sec sec = Sec::none;
  ModelSummary summary;
  std::map<std::string, std::set<std::string>> vars;
  bool saw_objective = false, saw_constraints = false;

  struct Row {
    std::string name;
    int ops = 0;
    bool rhs_numeric = false;
  };
  std::vector<Row> rows;
  auto finish_row = [&]() {
    if (rows.empty()) return;
    const Row& r = rows.back();
    if (r.ops != 1 || !r.rhs_numeric)
      throw ParseError("malformed constraint '" + r.name + "'");
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string key = detail::lower(toks[i]);
    Sec next = sec;
    if (key == "minimize" || key == "maximize" || key == "minimum" || key == "maximum") {
      next = Sec::objective;
    } else if (key == "subject" && i + 1 < toks.size() && detail::lower(toks[i + 1]) == "to") {
      next = Sec::constraints;
      ++i;
    } else if (key == "bounds") {
      next = Sec::bounds;
    } else if (key == "generals" || key == "general") {
      next = Sec::generals;
    } else if (key == "binaries" || key == "binary") {
      next = Sec::binaries;
    } else if (key == "end") {
      next = Sec::end;
    }
    if (next != sec) {
      if (sec == Sec::constraints) finish_row();
      if (next <= sec) throw ParseError("section '" + toks[i] + "' out of order");
      sec = next;
      saw_objective |= sec == Sec::objective;
      saw_constraints |= sec == Sec::constraints;
      if (sec == Sec::end && i + 1 != toks.size()) throw ParseError("content after End");
      continue;
    }
    const std::string& tok = toks[i];
    const bool named = i + 1 < toks.size() && toks[i + 1] == ":";
    switch (sec) {
      case Sec::none:
        throw ParseError("content before the objective section");
      case Sec::objective:
        if (named) {
          ++i;
        } else if (detail::is_identifier(tok)) {
          ++summary.objective_terms;
          vars[detail::family_of(tok)].insert(tok);
        }
        break;
      case Sec::constraints:
        if (named) {
          finish_row();
          rows.push_back({tok});
          ++summary.constraints[detail::family_of(tok)];
          ++i;
        } else if (rows.empty()) {
          throw ParseError("unnamed constraint");
        } else if (tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">") {
          ++rows.back().ops;
          rows.back().rhs_numeric = i + 1 < toks.size() && detail::is_number(toks[i + 1]);
        } else if (detail::is_identifier(tok)) {
          vars[detail::family_of(tok)].insert(tok);
        }
        break;
      case Sec::bounds:
        if (detail::is_identifier(tok) && detail::lower(tok) != "free" &&
            detail::lower(tok) != "inf" && detail::lower(tok) != "infinity")
          vars[detail::family_of(tok)].insert(tok);
        break;
      case Sec::generals:
        ++summary.generals;
        vars[detail::family_of(tok)].insert(tok);
        break;
      case Sec::binaries:
        ++summary.binaries;
        vars[detail::family_of(tok)].insert(tok);
        break;
      case Sec::end:
        break;
    }
  }
  if (sec != Sec::end) throw ParseError("model text is truncated (missing End)");
  if (!saw_objective || !saw_constraints) throw ParseError("missing objective or constraints");
  for (const auto& [fam, names] : vars) summary.variables[fam] = static_cast<int>(names.size());
  return summary;
}

// ---------------------------------------------------------------------------
// Solution import

/// Reads `name=value` pairs, one per line; '#' starts a comment.
inline std::map<std::string, double> parse_values(std::string_view text) {
  std::map<std::string, double> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected name=value");
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double v;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (name.empty() || ec != std::errc() || p != value.data() + value.size())
      throw ParseError("line " + std::to_string(lineno) + ": bad value '" + value + "'");
    out[name] = v;
  }
  return out;
}

struct ImportResult {
  Solution solution;
  double imported_objective = 0.0;     // objective evaluated on the raw values
  double reevaluated_objective = 0.0;  // earliest-arrival schedule, re-costed
  double difference = 0.0;             // reevaluated - imported
  double imported_wait = 0.0;
  double earliest_wait = 0.0;
  bool arrival_inflation = false;  // imported waits undercut earliest-arrival waits
};

namespace detail {

inline bool binary_value(const std::string& name, double v) {
  constexpr double tol = 1e-4;
  if (std::abs(v) <= tol) return false;
  if (std::abs(v - 1.0) <= tol) return true;
  throw FractionalValue(name + " = " + format_number(v) + " is not within 1e-4 of 0 or 1");
}

inline std::vector<std::size_t> split_indices(std::string_view name) {
  std::vector<std::size_t> idx;
  std::size_t pos = name.find('_');
  while (pos != std::string_view::npos) {
    const std::size_t next = name.find('_', pos + 1);
    const auto part = name.substr(pos + 1, next == std::string_view::npos ? next : next - pos - 1);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size())
      throw ParseError("bad variable name '" + std::string(name) + "'");
    idx.push_back(v);
    pos = next;
  }
  return idx;
}

}  // namespace detail

/// Rebuilds routes from arc values by following successors from the depot,
/// then re-schedules with earliest arrivals and re-costs.
inline ImportResult import_solution(const Instance& inst, const std::map<std::string, double>& values) {
  const auto slots = slot_table(inst);
  const std::size_t nodes = inst.num_nodes();
  std::vector<std::map<std::size_t, std::size_t>> succ(slots.size());
  ImportResult res;

  std::unordered_map<std::string, double> coef;
  for (const auto& [name, c] : objective_terms(inst)) coef.emplace(name, c);

  for (const auto& [name, v] : values) {
    if (auto it = coef.find(name); it != coef.end()) res.imported_objective += it->second * v;
    if (name.rfind("W_", 0) == 0) res.imported_wait += v;
    if (name.rfind("x_", 0) == 0) {
      const auto idx = detail::split_indices(name);
      if (idx.size() != 3 || idx[0] >= nodes || idx[1] >= nodes || idx[0] == idx[1] ||
          idx[2] < 1 || idx[2] > slots.size())
        throw ParseError("variable '" + name + "' is outside the model");
      if (!detail::binary_value(name, v)) continue;
      auto& s = succ[idx[2] - 1];
      if (!s.emplace(idx[0], idx[1]).second)
        throw ParseError("node " + std::to_string(idx[0]) + " has two successors on slot " +
                         std::to_string(idx[2]));
    } else if (name.rfind("y_", 0) == 0) {
      detail::binary_value(name, v);
    }
  }

  std::vector<char> served(nodes, 0);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    auto& s = succ[k];
    if (s.empty()) continue;
    Route route{slots[k], {}};
    std::size_t cur = 0;
    std::set<std::size_t> seen;
    while (s.count(cur)) {
      const std::size_t next = s.at(cur);
      s.erase(cur);
      if (next == 0) break;
      if (!seen.insert(next).second) break;
      route.stops.push_back(static_cast<int>(next));
      served[next] = 1;
      cur = next;
    }
    if (!s.empty()) {
      // Whatever remains is disconnected from the depot.
      std::size_t start = s.begin()->first;
      std::string cycle = std::to_string(start);
      std::size_t at = start;
      std::set<std::size_t> walked{start};
      while (s.count(at)) {
        at = s.at(at);
        cycle += "->" + std::to_string(at);
        if (!walked.insert(at).second) break;
      }
      throw SubtourDetected("subtour detected on slot " + std::to_string(k + 1) + ": " + cycle);
    }
    if (!route.stops.empty()) res.solution.routes.push_back(std::move(route));
  }
  for (std::size_t j = 1; j < nodes; ++j)
    if (!served[j]) res.solution.unserved.push_back(static_cast<int>(j));

  res.reevaluated_objective = solution_objective(inst, res.solution);
  res.difference = res.reevaluated_objective - res.imported_objective;
  res.earliest_wait = operational_totals(res.solution, inst).wait_h;
  res.arrival_inflation = res.imported_wait < res.earliest_wait - 1e-6;
  return res;
}

}  // namespace mfc
