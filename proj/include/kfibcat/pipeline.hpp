#pragma once

// Proof replay: phase A (search), phase B (per-k bounds and reduction for
// 3 <= k <= 420), phase C (large-k chain and global reduction rounds).

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kfibcat/alg_numbers.hpp"
#include "kfibcat/baker_bounds.hpp"
#include "kfibcat/cf_engine.hpp"
#include "kfibcat/dp_reduction.hpp"
#include "kfibcat/kfib.hpp"
#include "kfibcat/precision.hpp"
#include "kfibcat/search.hpp"

namespace kfibcat {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCacheEnvVar = "KFIBCAT_CACHE_DIR";

struct RunConfig {
  std::set<char> phases{'A', 'B', 'C'};
  int k_min = 3;
  int k_max = 50;
  long m_max = 199;
  long l_max = 199;
  std::vector<int> sample_k{100, 200, 300, 400};
  int precision_digits = kDefaultPrecisionDigits;
  unsigned workers = 1;
  ChainMode chain_mode = ChainMode::printed;
  MuForm mu_form = MuForm::corrected;
  bool homogeneous_fallback = false;
  std::string cache_dir;  // empty: no cache (unless the environment sets one)

  void validate() const {
    if (phases.empty()) throw DomainError("no phases requested");
    for (char c : phases) {
      if (c != 'A' && c != 'B' && c != 'C') throw DomainError(std::string("unknown phase ") + c);
    }
    if ((phases.count('B') || phases.count('C')) && precision_digits < 200) {
      throw DomainError("phases B and C need at least 200 digits of precision");
    }
    SearchRange{k_min, k_max, m_max, l_max}.validate();
    if (phases.count('B') && k_min < 3) throw DomainError("phase B needs k >= 3");
    for (int k : sample_k) {
      if (k < 3 || k > 420) throw DomainError("sample k must lie in [3, 420]");
    }
  }

  std::vector<int> phase_b_ks() const {
    std::set<int> ks(sample_k.begin(), sample_k.end());
    for (int k = k_min; k <= std::min(k_max, 420); ++k) ks.insert(k);
    return {ks.begin(), ks.end()};
  }

  std::string effective_cache_dir() const {
    if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
    return cache_dir;
  }
};

/// One published value compared against the recomputed one.
struct ReferenceCheck {
  std::string name;
  std::string relation;  // "==", "<=", "<", "subset"
  std::string expected;
  std::string computed;
  bool pass = false;
};

enum class RunStatus { certified, constant_mismatch, certification_failure };

inline int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::certified: return 0;
    case RunStatus::constant_mismatch: return 2;
    case RunStatus::certification_failure: return 3;
  }
  return 3;
}

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::certified: return "certified";
    case RunStatus::constant_mismatch: return "constant_mismatch";
    case RunStatus::certification_failure: return "certification_failure";
  }
  return "?";
}

struct ProofReport {
  RunConfig config;
  json phases = json::object();
  std::vector<ReferenceCheck> checks;
  std::vector<std::string> errors;
  std::map<std::string, double> timings;  // seconds; excluded from comparisons

  bool constants_reproduced() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReferenceCheck& c) { return c.pass; });
  }

  RunStatus status() const {
    if (!errors.empty()) return RunStatus::certification_failure;
    return constants_reproduced() ? RunStatus::certified : RunStatus::constant_mismatch;
  }
};

// Quoted per-k bounds on n - 1 for the sample values of k.
inline const std::map<int, long>& reference_per_k_bounds() {
  static const std::map<int, long> table{{3, 135}, {10, 135}, {100, 164}, {200, 164}, {300, 164}, {400, 167}};
  return table;
}

inline constexpr long kReferencePerKCeiling = 171;
inline constexpr long kReferenceNlCeiling = 170;
inline constexpr long kReferenceMCeiling = 175;

namespace detail {

inline ReferenceCheck check_le(std::string name, const RealValue& computed, const std::string& expected) {
  const RealValue e = RealValue::parse(expected, computed.precision());
  return {std::move(name), "<=", expected, computed.to_string(8), computed <= e};
}

inline ReferenceCheck check_lt(std::string name, const RealValue& computed, const std::string& expected) {
  const RealValue e = RealValue::parse(expected, computed.precision());
  return {std::move(name), "<", expected, computed.to_string(8), computed < e};
}

inline ReferenceCheck check_ge(std::string name, const RealValue& computed, const std::string& expected) {
  const RealValue e = RealValue::parse(expected, computed.precision());
  return {std::move(name), ">=", expected, computed.to_string(8), computed >= e};
}

inline ReferenceCheck check_eq(std::string name, long computed, long expected) {
  return {std::move(name), "==", std::to_string(expected), std::to_string(computed), computed == expected};
}

inline json solution_json(const ConcatSolution& s) {
  return json{{"k", s.k}, {"n", s.n}, {"m", s.m}, {"l", s.l}, {"d", s.d}, {"value", s.value.get_str()},
              {"canonical", s.canonical}};
}

inline json attempts_json(const ReductionOutcome& o) {
  json trail = json::array();
  for (const auto& a : o.trail) {
    trail.push_back(json{{"index", a.index},
                         {"epsilon", a.epsilon.to_string(8)},
                         {"gamma_bound", a.gamma_bound ? json(a.gamma_bound->to_string(10)) : json(nullptr)}});
  }
  return trail;
}

inline json reduction_json(const ReductionOutcome& o) {
  return json{{"first_index_above_6M", o.first_index_above_6M},
              {"q_index", o.q_index},
              {"q_used", o.q_used.get_str()},
              {"epsilon", o.epsilon.to_string(10)},
              {"gamma_bound", o.gamma_bound.to_string(10)},
              {"argmin", o.argmin_label},
              {"attempts", o.attempts},
              {"trail", attempts_json(o)}};
}

inline std::string cache_key(int k, const RunConfig& c) {
  std::ostringstream key;
  key << "phaseB_k" << k << "_p" << c.precision_digits << "_m" << kReferenceMCeiling << "_nl" << kReferenceMCeiling << "_"
      << to_string(c.mu_form) << "_" << to_string(c.chain_mode)
      << (c.homogeneous_fallback ? "_hom" : "") << ".json";
  return key.str();
}

inline std::optional<json> cache_load(const std::string& dir, const std::string& key) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(std::filesystem::path(dir) / key);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void cache_store(const std::string& dir, const std::string& key, const json& row) {
  if (dir.empty()) return;
  write_atomically(std::filesystem::path(dir) / key, row.dump(2));
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Phase A

inline void run_phase_a(const RunConfig& c, ProofReport& report) {
  const SearchRange range{c.k_min, c.k_max, c.m_max, c.l_max};
  const std::vector<ConcatSolution> sols = brute_force(range, SearchMode::windowed, c.workers);
  json arr = json::array();
  std::set<std::tuple<int, long, long, long>> canonical_k3;
  std::set<std::string> k2_values;
  for (const auto& s : sols) {
    if (!verify_solution(s)) {
      report.errors.push_back("phase A: emitted tuple fails verification: k=" + std::to_string(s.k) +
                              " n=" + std::to_string(s.n));
    }
    arr.push_back(detail::solution_json(s));
    if (s.k >= 3 && s.canonical) canonical_k3.insert({s.k, s.n, s.m, s.l});
    if (s.k == 2) k2_values.insert(s.value.get_str());
  }
  const PowerCaseCertificate power = power_case_certificate(200, 200);
  report.phases["A"] = json{
      {"range", {{"k_min", c.k_min}, {"k_max", c.k_max}, {"m_max", c.m_max}, {"l_max", c.l_max}}},
      {"solutions", arr},
      {"power_case",
       {{"a_max", power.a_max},
        {"d_max", power.d_max},
        {"no_mersenne_power_of_five", power.no_mersenne_power_of_five},
        {"parity_branch", power.parity_branch},
        {"small_n_direct", power.small_n_direct}}}};

  // Expected solution set restricted to the searched window.
  std::set<std::tuple<int, long, long, long>> expected;
  for (auto t : {std::tuple<int, long, long, long>{3, 7, 3, 4}, {3, 8, 4, 4}, {8, 16, 6, 9}}) {
    const auto [k, n, m, l] = t;
    if (k >= c.k_min && k <= c.k_max && m <= c.m_max && l <= c.l_max) expected.insert(t);
  }
  auto show = [](const auto& set) {
    std::string out;
    for (const auto& [k, n, m, l] : set) {
      out += "(" + std::to_string(k) + "," + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(l) + ")";
    }
    return out.empty() ? std::string("{}") : out;
  };
  report.checks.push_back({"A.solutions_k_ge_3", "==", show(expected), show(canonical_k3), expected == canonical_k3});
  if (c.k_min <= 2) {
    const std::set<std::string> want{"13", "21", "55"};
    std::string got;
    for (const auto& v : k2_values) got += (got.empty() ? "" : ",") + v;
    report.checks.push_back({"A.solutions_k_eq_2", "==", "13,21,55", got, k2_values == want});
  }
  report.checks.push_back({"A.power_case", "==", "true", power.holds() ? "true" : "false", power.holds()});
}

// ---------------------------------------------------------------------------
// Phase B

struct PhaseBRow {
  int k = 0;
  json data;
};

inline json phase_b_row(int k, const RunConfig& c) {
  const Precision p(c.precision_digits);
  const PerKLegendre leg = per_k_legendre(k, c.chain_mode, p);
  PerKOptions opt;
  opt.m_max = kReferenceMCeiling;
  opt.nl_max = kReferenceMCeiling;
  opt.mu_form = c.mu_form;
  opt.chain_mode = c.chain_mode;
  opt.homogeneous_fallback = c.homogeneous_fallback;
  const PerKReduction red = per_k_reduction(k, opt, p);
  const long n_top = red.n1_bound;  // n - 1 < n1_bound
  const std::vector<ConcatSolution> sols = windowed_search(k, k + 2, n_top, leg.m_bound);
  json found = json::array();
  for (const auto& s : sols) found.push_back(detail::solution_json(s));
  return json{{"k", k},
              {"M_k", red.M_k.get_str()},
              {"legendre",
               {{"last_index_within_cap", leg.bound.last_index_within_cap},
                {"a_max", leg.bound.a_max.get_str()},
                {"convergent_branch_exponent", leg.bound.convergent_branch_exponent.to_string(10)},
                {"complementary_exponent", leg.bound.complementary_exponent.to_string(10)}}},
              {"nl_bound", leg.nl_bound},
              {"m_bound", leg.m_bound},
              {"grid", {{"m_max", red.m_max}, {"nl_max", red.nl_max}, {"mu_form", to_string(c.mu_form)}}},
              {"reduction", red.outcome.attempts ? detail::reduction_json(red.outcome) : json(nullptr)},
              {"homogeneous", red.homogeneous ? json{{"cells", red.homogeneous->cells},
                                                     {"q_index", red.homogeneous->q_index},
                                                     {"delta", red.homogeneous->delta.to_string(8)},
                                                     {"worst_eta", red.homogeneous->worst_eta.to_string(8)},
                                                     {"bound", red.homogeneous->bound.to_string(10)}}
                                              : json(nullptr)},
              {"n1_bound", red.n1_bound},
              {"min_epsilon", red.outcome.attempts ? red.outcome.epsilon.to_string(6) : std::string("n/a")},
              {"research", {{"n_min", k + 2}, {"n_max", n_top}, {"m_bound", leg.m_bound}, {"solutions", found}}}};
}

inline void run_phase_b(const RunConfig& c, ProofReport& report) {
  const std::vector<int> ks = c.phase_b_ks();
  const std::string cache_dir = c.effective_cache_dir();
  std::vector<json> rows(ks.size());
  std::vector<std::string> errors(ks.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < ks.size(); i = next++) {
      const std::string key = detail::cache_key(ks[i], c);
      if (auto cached = detail::cache_load(cache_dir, key)) {
        rows[i] = std::move(*cached);
        continue;
      }
      try {
        rows[i] = phase_b_row(ks[i], c);
        detail::cache_store(cache_dir, key, rows[i]);
      } catch (const std::exception& e) {
        errors[i] = "phase B k=" + std::to_string(ks[i]) + ": " + e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(ks.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  json arr = json::array();
  long worst_n1 = 0, worst_nl = 0, worst_m = 0;
  bool research_clean = true;
  const std::set<std::tuple<long, long, long, long>> known{{3, 7, 3, 4}, {3, 8, 4, 4}, {8, 16, 6, 9}};
  for (size_t i = 0; i < ks.size(); ++i) {
    if (!errors[i].empty()) {
      report.errors.push_back(errors[i]);
      continue;
    }
    const json& row = rows[i];
    arr.push_back(row);
    const int k = row["k"].get<int>();
    const long n1 = row["n1_bound"].get<long>();
    worst_n1 = std::max(worst_n1, n1);
    worst_nl = std::max(worst_nl, row["nl_bound"].get<long>());
    worst_m = std::max(worst_m, row["m_bound"].get<long>());
    for (const auto& s : row["research"]["solutions"]) {
      if (!s["canonical"].get<bool>()) continue;
      if (!known.count({s["k"].get<long>(), s["n"].get<long>(), s["m"].get<long>(), s["l"].get<long>()})) {
        research_clean = false;
      }
    }
    if (auto it = reference_per_k_bounds().find(k); it != reference_per_k_bounds().end()) {
      report.checks.push_back(detail::check_eq("B.n1_bound.k=" + std::to_string(k), n1, it->second));
    }
  }
  report.phases["B"] = json{{"k_values", ks}, {"rows", arr}};
  report.checks.push_back({"B.nl_bound_max", "<", std::to_string(kReferenceNlCeiling), std::to_string(worst_nl),
                           worst_nl <= kReferenceNlCeiling});
  report.checks.push_back({"B.m_bound_max", "<=", std::to_string(kReferenceMCeiling), std::to_string(worst_m),
                           worst_m <= kReferenceMCeiling});
  report.checks.push_back({"B.n1_bound_max", "<=", std::to_string(kReferencePerKCeiling), std::to_string(worst_n1),
                           worst_n1 <= kReferencePerKCeiling});
  report.checks.push_back({"B.research_only_known_solutions", "subset", "known solutions",
                           research_clean ? "yes" : "no", research_clean});
}

// ---------------------------------------------------------------------------
// Phase C

inline json constant_check_json(const ConstantCheck& c) {
  return json{{"name", c.name},
              {"derivation", c.derivation},
              {"printed", c.printed.to_string(6)},
              {"computed", c.computed.to_string(8)},
              {"ratio", c.ratio().to_string(6)},
              {"upper_rounding_ok", c.upper_rounding_ok()},
              {"ratio_ok", c.ratio_ok()}};
}

inline json round_json(const RoundResult& r) {
  return json{{"q_cap", RealValue(r.q_cap, bound_precision()).to_string(6)},
              {"legendre",
               {{"last_index_within_cap", r.legendre.last_index_within_cap},
                {"a_max", r.legendre.a_max.get_str()},
                {"convergent_branch_value", r.legendre.convergent_branch_value.to_string(6)},
                {"convergent_branch_exponent", r.legendre.convergent_branch_exponent.to_string(8)},
                {"complementary_value", r.legendre.complementary_value.to_string(6)},
                {"complementary_exponent", r.legendre.complementary_exponent.to_string(8)}}},
              {"lambda_cap", r.lambda_cap},
              {"k_branch_bound", r.k_branch_bound.to_string(8)},
              {"nl_cap_computed", r.nl_cap_computed},
              {"nl_cap_used", r.nl_cap_used},
              {"reduction", detail::reduction_json(r.reduction)},
              {"k_bound", r.k_bound.to_string(8)},
              {"n_bound", r.n_bound.to_string(6)}};
}

inline std::vector<ReferenceCheck> global_round_checks(const GlobalRounds& g) {
  using detail::check_ge;
  using detail::check_le;
  using detail::check_lt;
  const auto& r1 = g.round1;
  const auto& r2 = g.round2;
  const Precision bp = bound_precision();
  std::vector<ReferenceCheck> out;
  out.push_back(check_le("C.r1.lambda_cap", RealValue(r1.lambda_cap, bp), "777"));
  out.push_back(check_le("C.r1.legendre_value", r1.legendre.convergent_branch_value.at(bp), "4.3e233"));
  out.push_back(check_le("C.r1.complementary_value", r1.legendre.complementary_value.at(bp), "1.6e230"));
  out.push_back(check_lt("C.r1.complementary_exponent", r1.legendre.complementary_exponent.at(bp), "765"));
  out.push_back(check_le("C.r1.a_max", RealValue(r1.legendre.a_max, bp), "5393"));
  out.push_back(check_ge("C.r1.a_max_exact", RealValue(r1.legendre.a_max, bp), "5393"));
  out.push_back(check_le("C.r1.k_branch", r1.k_branch_bound.at(bp), "1570"));
  out.push_back(check_le("C.r1.nl_cap", RealValue(r1.nl_cap_computed, bp), "780"));
  out.push_back(check_ge("C.r1.min_epsilon", r1.reduction.epsilon.at(bp), "0.000957"));
  out.push_back(check_lt("C.r1.gamma_bound", r1.reduction.gamma_bound.at(bp), "795"));
  out.push_back(check_le("C.r1.k_bound", r1.k_bound.at(bp), "1590"));
  out.push_back(check_le("C.r1.n_bound", r1.n_bound.at(bp), "4e52"));
  out.push_back(check_le("C.r2.lambda_cap", RealValue(r2.lambda_cap, bp), "188"));
  out.push_back(check_lt("C.r2.k_branch_below_420", r2.k_branch_bound.at(bp), "420"));
  out.push_back(check_le("C.r2.nl_cap", RealValue(r2.nl_cap_computed, bp), "190"));
  out.push_back(check_ge("C.r2.min_epsilon", r2.reduction.epsilon.at(bp), "0.001034"));
  out.push_back(check_le("C.r2.k_bound", r2.k_bound.at(bp), "410"));
  out.push_back({"C.contradiction_k_below_420", "==", "true", g.contradiction ? "true" : "false", g.contradiction});
  return out;
}

inline void run_phase_c(const RunConfig& c, ProofReport& report) {
  const Precision p(c.precision_digits);
  json constants = json::array();
  for (const ConstantCheck& cc : bound_chain_constant_checks(c.chain_mode)) {
    constants.push_back(constant_check_json(cc));
    report.checks.push_back({"C.constant." + cc.name, "<= (ratio >= 0.5)", cc.printed.to_string(6),
                             cc.computed.to_string(8), cc.ok()});
  }
  const SmallKChain small = small_k_chain(c.chain_mode);
  const LargeKChain large = large_k_chain(421, c.chain_mode);
  json lemmas = json::array();
  auto add_lemmas = [&](const std::vector<CheckedLemma>& ls) {
    for (const auto& l : ls) {
      lemmas.push_back(json{{"name", l.name}, {"statement", l.statement}, {"holds", l.holds}, {"detail", l.detail}});
      if (!l.holds) report.errors.push_back("lemma failed: " + l.statement);
    }
  };
  add_lemmas(small.lemmas);
  add_lemmas(large.lemmas);

  GlobalRoundsOptions gopt;
  gopt.mode = c.chain_mode;
  const GlobalRounds g = global_rounds(gopt, p);
  for (auto& chk : global_round_checks(g)) report.checks.push_back(std::move(chk));

  report.phases["C"] = json{
      {"chain_mode", to_string(c.chain_mode)},
      {"constants", constants},
      {"extra",
       {{"height_eta3_coeff", constant_check_json(large.height_eta3_coeff)},
        {"u4_numerator", constant_check_json(large.u4_numerator)},
        {"k_branch_lambda", constant_check_json(large.k_branch_quoted)},
        {"k_final_tight", large.k_final_tight.to_string(8)}}},
      {"lemmas", lemmas},
      {"round1", round_json(g.round1)},
      {"round2", round_json(g.round2)},
      {"contradiction", g.contradiction}};
}

// ---------------------------------------------------------------------------

inline ProofReport run(const RunConfig& config) {
  config.validate();
  ProofReport report;
  report.config = config;
  const auto t_all = std::chrono::steady_clock::now();
  auto guarded = [&](char phase, auto fn) {
    if (!config.phases.count(phase)) return;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(config, report);
    } catch (const std::exception& e) {
      report.errors.push_back(std::string("phase ") + phase + ": " + e.what());
    }
    report.timings[std::string("phase_") + phase] = detail::seconds_since(t0);
  };
  guarded('A', run_phase_a);
  guarded('B', run_phase_b);
  guarded('C', run_phase_c);
  report.timings["total"] = detail::seconds_since(t_all);
  return report;
}

// ---------------------------------------------------------------------------
// Report emission

enum class ReportFormat { json, csv, text };

inline json config_json(const RunConfig& c) {
  std::string phases;
  for (char ch : c.phases) phases += (phases.empty() ? "" : ",") + std::string(1, ch);
  return json{{"phases", phases},
              {"k_min", c.k_min},
              {"k_max", c.k_max},
              {"m_max", c.m_max},
              {"l_max", c.l_max},
              {"sample_k", c.sample_k},
              {"precision_digits", c.precision_digits},
              {"chain_mode", to_string(c.chain_mode)},
              {"mu_form", to_string(c.mu_form)},
              {"homogeneous_fallback", c.homogeneous_fallback}};
}

/// Canonical JSON form. Timing fields live only under "timings".
inline json report_json(const ProofReport& r, bool include_timings = true) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"name", c.name}, {"relation", c.relation}, {"expected", c.expected},
                          {"computed", c.computed}, {"pass", c.pass}});
  }
  json out{{"schema_version", kSchemaVersion},
           {"tool", "kfibcat"},
           {"config", config_json(r.config)},
           {"precision_digits", r.config.precision_digits},
           {"phases", r.phases},
           {"checks", checks},
           {"constants_reproduced", r.constants_reproduced()},
           {"status", to_string(r.status())},
           {"errors", r.errors}};
  if (include_timings) {
    json t = json::object();
    for (const auto& [k, v] : r.timings) t[k] = v;
    out["timings"] = t;
  }
  return out;
}

inline std::string report_csv(const ProofReport& r) {
  std::ostringstream out;
  out << "k,nl_bound,m_bound,n1_bound,min_epsilon\n";
  if (r.phases.contains("B")) {
    for (const auto& row : r.phases["B"]["rows"]) {
      out << row["k"].get<int>() << ',' << row["nl_bound"].get<long>() << ',' << row["m_bound"].get<long>() << ','
          << row["n1_bound"].get<long>() << ',' << row["min_epsilon"].get<std::string>() << '\n';
    }
  }
  return out.str();
}

inline std::string report_text(const ProofReport& r) {
  std::ostringstream out;
  out << "kfibcat proof replay (schema " << kSchemaVersion << ", " << r.config.precision_digits << " digits, "
      << to_string(r.config.chain_mode) << " constants)\n";
  if (r.phases.contains("A")) {
    out << "\nPhase A: " << r.phases["A"]["solutions"].size() << " solution tuples\n";
    for (const auto& s : r.phases["A"]["solutions"]) {
      out << "  k=" << s["k"] << " F_" << s["n"] << " = " << s["value"].get<std::string>() << " = F_" << s["m"]
          << " | F_" << s["l"] << (s["canonical"].get<bool>() ? "" : "  (duplicate index)") << '\n';
    }
  }
  if (r.phases.contains("B")) {
    out << "\nPhase B: per-k bounds\n   k  n-l<  m<  n-1<  min eps\n";
    for (const auto& row : r.phases["B"]["rows"]) {
      char line[160];
      std::snprintf(line, sizeof line, "%4d %5ld %4ld %5ld  %s\n", row["k"].get<int>(), row["nl_bound"].get<long>(),
                    row["m_bound"].get<long>(), row["n1_bound"].get<long>(),
                    row["min_epsilon"].get<std::string>().c_str());
      out << line;
    }
  }
  if (r.phases.contains("C")) {
    const auto& c = r.phases["C"];
    for (const char* round : {"round1", "round2"}) {
      const auto& rd = c[round];
      out << "\nPhase C " << round << ": lambda < " << rd["lambda_cap"] << ", n-l < " << rd["nl_cap_computed"]
          << ", q index " << rd["reduction"]["q_index"] << ", min eps " << rd["reduction"]["epsilon"].get<std::string>()
          << ", gamma < " << rd["reduction"]["gamma_bound"].get<std::string>() << ", k < "
          << rd["k_bound"].get<std::string>() << '\n';
    }
    out << "contradiction with k > 420: " << (c["contradiction"].get<bool>() ? "yes" : "no") << '\n';
  }
  out << "\nChecks:\n";
  for (const auto& chk : r.checks) {
    out << "  [" << (chk.pass ? "PASS" : "FAIL") << "] " << chk.name << ": computed " << chk.computed << ' '
        << chk.relation << ' ' << chk.expected << '\n';
  }
  for (const auto& e : r.errors) out << "  [ERROR] " << e << '\n';
  out << "\npaper constants reproduced: " << (r.constants_reproduced() ? "yes" : "no") << '\n';
  out << "status: " << to_string(r.status()) << '\n';
  return out.str();
}

inline std::string render_report(const ProofReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return report_json(r).dump(2) + "\n";
    case ReportFormat::csv: return report_csv(r);
    case ReportFormat::text: return report_text(r);
  }
  return {};
}

/// Writes the report atomically (temporary file, then rename).
inline void emit_report(const ProofReport& r, ReportFormat f, const std::filesystem::path& path) {
  detail::write_atomically(path, render_report(r, f));
}

}  // namespace kfibcat
