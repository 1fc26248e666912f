#pragma once

// Dujella-Petho style reduction.
//
// For |s tau - t + mu| < K L^-gamma with s <= M: if p/q is a convergent of
// tau with q > 6M and eps = ||mu q|| - M ||tau q|| > 0, there is no solution
// with gamma >= log(K q / eps) / log L.

#include <gmpxx.h>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kfibcat/alg_numbers.hpp"
#include "kfibcat/baker_bounds.hpp"
#include "kfibcat/cf_engine.hpp"
#include "kfibcat/kfib.hpp"
#include "kfibcat/precision.hpp"

namespace kfibcat {

struct ReductionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Convergent selection. Starting at the first q > 6M, advance while
/// eps <= 0 (at most `attempt_cap` convergents). After the first success,
/// `lookahead` further convergents are tried and the smallest gamma bound
/// is kept; every candidate is a valid instance of the lemma.
struct ReductionPolicy {
  size_t attempt_cap = 25;
  size_t lookahead = 4;
  bool recheck = true;
};

struct ReductionInstance {
  RealFn tau;
  RealFn mu;
  RealValue K;
  RealValue L;
  mpz_class M;
  std::string label;

  void validate() const {
    if (K.sign() <= 0) throw DomainError("K must be positive");
    if (L <= RealValue(1L, L.precision())) throw DomainError("L must exceed 1");
    if (M < 1) throw DomainError("M must be at least 1");
  }
};

/// Many mu values sharing tau, K, L and M; one convergent serves them all and
/// eps is the minimum over the family.
struct ReductionFamily {
  RealFn tau;
  std::function<std::vector<RealValue>(Precision)> mus;
  std::function<std::string(size_t)> member_label;
  RealValue K;
  RealValue L;
  mpz_class M;
  std::string label;
};

struct ReductionAttempt {
  size_t index = 0;
  RealValue epsilon;
  std::optional<RealValue> gamma_bound;
};

struct ReductionOutcome {
  mpz_class q_used;
  size_t q_index = 0;
  size_t first_index_above_6M = 0;
  RealValue epsilon;
  RealValue gamma_bound;
  int attempts = 0;
  std::string argmin_label;  // member attaining the minimal eps
  std::vector<ReductionAttempt> trail;
};

namespace detail {

struct EpsilonScan {
  RealValue epsilon;
  size_t argmin = 0;
  bool degenerate = false;
};

inline EpsilonScan min_epsilon(const std::vector<RealValue>& mus, const RealValue& tau, const mpz_class& q,
                               const mpz_class& M) {
  const Precision p = tau.precision();
  const RealValue qv(q, p);
  const RealValue tail = RealValue(M, p) * dist_to_nearest_int(tau * qv);
  const RealValue floor_tol = ten_to_minus(p.digits() / 2, p);
  EpsilonScan out{RealValue(1L, p), 0, false};
  RealValue best_dist(1L, p);
  for (size_t i = 0; i < mus.size(); ++i) {
    RealValue d = dist_to_nearest_int(mus[i] * qv);
    if (d < best_dist) {
      best_dist = std::move(d);
      out.argmin = i;
    }
  }
  out.degenerate = best_dist < floor_tol;
  out.epsilon = best_dist - tail;
  return out;
}

inline RealValue gamma_bound(const RealValue& K, const RealValue& L, const mpz_class& q, const RealValue& eps) {
  return eval_log(K * RealValue(q, eps.precision()) / eps) / eval_log(L);
}

}  // namespace detail

inline ReductionOutcome reduce_family(const ReductionFamily& fam, Precision p,
                                      const ReductionPolicy& policy = {}) {
  if (fam.K.sign() <= 0) throw DomainError("K must be positive");
  if (fam.L <= RealValue(1L, fam.L.precision())) throw DomainError("L must exceed 1");
  if (fam.M < 1) throw DomainError("M must be at least 1");

  const mpz_class six_m = fam.M * 6;
  CFExpansion cf = expand_escalating(fam.tau, StopCondition::denominator_above(six_m), p);
  const Convergent first = first_convergent_exceeding(cf, six_m);
  const RealValue tau = fam.tau(p);
  const std::vector<RealValue> mus = fam.mus(p);
  if (mus.empty()) throw DomainError("empty reduction family");
  const RealValue K = fam.K.at(p);
  const RealValue L = fam.L.at(p);

  ReductionOutcome out;
  out.first_index_above_6M = first.index;
  std::optional<size_t> best;
  size_t first_success = 0;
  std::string worst_member;  // argmin of the latest scan
  for (size_t i = first.index; i < first.index + policy.attempt_cap; ++i) {
    if (best && i > first_success + policy.lookahead) break;
    ensure_quotients(cf, i + 1);
    const mpz_class& q = cf.q[i];
    const detail::EpsilonScan scan = detail::min_epsilon(mus, tau, q, fam.M);
    if (scan.degenerate) {
      const std::string who = fam.member_label ? fam.member_label(scan.argmin) : std::to_string(scan.argmin);
      throw DegeneracyError(fam.label + ": ||mu q|| vanishes to working precision for " + who);
    }
    ++out.attempts;
    worst_member = fam.member_label ? fam.member_label(scan.argmin) : std::to_string(scan.argmin);
    ReductionAttempt attempt{i, scan.epsilon, std::nullopt};
    if (certified_sign(scan.epsilon) == CertifiedSign::positive) {
      attempt.gamma_bound = detail::gamma_bound(K, L, q, scan.epsilon);
      if (!best) first_success = i;
      if (!best || *attempt.gamma_bound < out.gamma_bound) {
        best = i;
        out.q_used = q;
        out.q_index = i;
        out.epsilon = scan.epsilon;
        out.gamma_bound = *attempt.gamma_bound;
        out.argmin_label = fam.member_label ? fam.member_label(scan.argmin) : std::to_string(scan.argmin);
      }
    }
    out.trail.push_back(std::move(attempt));
  }
  if (!best) {
    throw ReductionFailure(fam.label + ": eps <= 0 for " + std::to_string(policy.attempt_cap) +
                           " convergents from index " + std::to_string(first.index) + " (last minimum at " +
                           worst_member + ")");
  }

  if (policy.recheck) {
    const Precision p2 = p.doubled();
    const detail::EpsilonScan again = detail::min_epsilon(fam.mus(p2), fam.tau(p2), out.q_used, fam.M);
    if (certified_sign(again.epsilon) != CertifiedSign::positive) {
      throw CertificationError(fam.label + ": eps not positive at " + std::to_string(p2.digits()) + " digits");
    }
    const RealValue rel = abs(again.epsilon.at(p) - out.epsilon) / out.epsilon;
    if (rel > RealValue::parse("1e-3", p)) {
      throw CertificationError(fam.label + ": eps disagrees between " + std::to_string(p.digits()) + " and " +
                               std::to_string(p2.digits()) + " digits");
    }
  }
  return out;
}

inline ReductionOutcome reduce(const ReductionInstance& inst, Precision p = default_precision(),
                               const ReductionPolicy& policy = {}) {
  inst.validate();
  ReductionFamily fam{inst.tau,
                      [mu = inst.mu](Precision q) { return std::vector<RealValue>{mu(q)}; },
                      [label = inst.label](size_t) { return label; },
                      inst.K,
                      inst.L,
                      inst.M,
                      inst.label};
  return reduce_family(fam, p, policy);
}

// ---------------------------------------------------------------------------
// Per-k pass (3 <= k <= 420).

/// How mu divides the logarithm: by log alpha (consistent with the linear
/// form) or by log 10 (as the displayed inequality reads).
enum class MuForm { corrected, as_printed };

inline const char* to_string(MuForm f) { return f == MuForm::corrected ? "corrected" : "as_printed"; }

struct PerKOptions {
  long m_max = 175;
  long nl_max = 175;
  MuForm mu_form = MuForm::corrected;
  ChainMode chain_mode = ChainMode::printed;
  ReductionPolicy policy{};
  // Cells whose mu is within ||q_i tau|| / 2 of an integer (q_{i+1} > M_k) are
  // bounded homogeneously instead of by the reduction lemma.
  bool homogeneous_fallback = false;
};

/// |d tau - N| >= ||q_i tau|| =: delta for 1 <= d < q_{i+1}. With
/// |eta| = |mu - round(mu)| < delta the cell gives
/// K alpha^-(n-1) > delta - |eta|.
struct HomogeneousPart {
  size_t cells = 0;
  size_t q_index = 0;  // i
  RealValue delta;
  RealValue worst_eta;
  RealValue bound;  // n - 1 < bound
};

struct PerKReduction {
  int k = 0;
  mpz_class M_k;
  long m_max = 0;
  long nl_max = 0;
  ReductionOutcome outcome;      // empty (attempts == 0) when every cell went homogeneous
  std::optional<HomogeneousPart> homogeneous;
  long n1_bound = 0;  // n - 1 < n1_bound = ceil(max bound)
};

inline RealValue tau_k(int k, Precision p) { return log_of(10, p) / k_constants(k, p).log_alpha; }

/// mu for every (m, n-l) in [1, m_max] x [1, nl_max], row-major in m.
inline std::vector<RealValue> per_k_mus(int k, long m_max, long nl_max, MuForm form, Precision p) {
  const KConstants& kc = k_constants(k, p);
  KSequence seq(k);
  std::vector<RealValue> log_fm;
  log_fm.reserve(static_cast<size_t>(m_max));
  for (long m = 1; m <= m_max; ++m) log_fm.push_back(eval_log(RealValue(seq.term(m), p)));
  std::vector<RealValue> log_tail;  // log(f_k (1 - alpha^-j))
  log_tail.reserve(static_cast<size_t>(nl_max));
  const RealValue log_fk = eval_log(kc.fk);
  for (long j = 1; j <= nl_max; ++j) log_tail.push_back(log_fk + eval_log(1L - pow_int(kc.alpha, -j)));
  const RealValue denom = form == MuForm::corrected ? kc.log_alpha : log_of(10, p);
  std::vector<RealValue> out;
  out.reserve(log_fm.size() * log_tail.size());
  for (const RealValue& a : log_fm) {
    for (const RealValue& b : log_tail) out.push_back((a - b) / denom);
  }
  return out;
}

namespace detail {

inline std::string per_k_label(size_t i, long nl_max) {
  return "m=" + std::to_string(static_cast<long>(i) / nl_max + 1) +
         ",n-l=" + std::to_string(static_cast<long>(i) % nl_max + 1);
}

// Splits the grid into homogeneous cells and the rest (indices into the grid).
inline std::pair<std::optional<HomogeneousPart>, std::vector<size_t>> split_homogeneous(
    int k, const std::vector<RealValue>& mus, const mpz_class& M, Precision p) {
  CFExpansion cf = expand_escalating([k](Precision q) { return tau_k(k, q); }, StopCondition::denominator_above(M), p);
  const Convergent above = first_convergent_exceeding(cf, M);
  if (above.index == 0) throw DomainError("M below the first convergent denominator");
  const size_t i = above.index - 1;
  const RealValue tau = tau_k(k, p);
  const RealValue delta = dist_to_nearest_int(tau * RealValue(cf.q[i], p));
  const RealValue half = delta / 2L;
  HomogeneousPart part{0, i, delta, RealValue(0L, p), RealValue(0L, p)};
  std::vector<size_t> rest;
  for (size_t c = 0; c < mus.size(); ++c) {
    const RealValue eta = dist_to_nearest_int(mus[c]);
    if (eta < half) {
      ++part.cells;
      if (eta > part.worst_eta) part.worst_eta = eta;
    } else {
      rest.push_back(c);
    }
  }
  if (part.cells == 0) return {std::nullopt, std::move(rest)};
  const KConstants& kc = k_constants(k, p);
  const RealValue K = RealValue(12L, p) / kc.log_alpha;
  part.bound = eval_log(K / (delta - part.worst_eta)) / kc.log_alpha;
  return {std::move(part), std::move(rest)};
}

}  // namespace detail

inline PerKReduction per_k_reduction(int k, const PerKOptions& opt = {}, Precision p = default_precision()) {
  if (k < 3) throw DomainError("per_k_reduction needs k >= 3");
  if (opt.m_max < 1 || opt.nl_max < 1) throw DomainError("empty (m, n-l) grid");
  PerKReduction out;
  out.k = k;
  out.M_k = n_bound_integer(k, opt.chain_mode);
  out.m_max = opt.m_max;
  out.nl_max = opt.nl_max;
  const long nl_max = opt.nl_max;

  // Grid indices handled by the reduction lemma; all of them unless split.
  std::optional<std::vector<size_t>> subset;
  if (opt.homogeneous_fallback) {
    auto [part, rest] = detail::split_homogeneous(k, per_k_mus(k, opt.m_max, opt.nl_max, opt.mu_form, p), out.M_k, p);
    out.homogeneous = std::move(part);
    if (out.homogeneous) subset = std::move(rest);
  }
  auto select = [subset](std::vector<RealValue> all) {
    if (!subset) return all;
    std::vector<RealValue> picked;
    picked.reserve(subset->size());
    for (size_t i : *subset) picked.push_back(std::move(all[i]));
    return picked;
  };

  RealValue bound(0L, p);
  if (!subset || !subset->empty()) {
    ReductionFamily fam{
        [k](Precision q) { return tau_k(k, q); },
        [k, opt, select](Precision q) { return select(per_k_mus(k, opt.m_max, opt.nl_max, opt.mu_form, q)); },
        [nl_max, subset](size_t i) { return detail::per_k_label(subset ? (*subset)[i] : i, nl_max); },
        RealValue(12L, p) / k_constants(k, p).log_alpha,
        k_constants(k, p).alpha,
        out.M_k,
        "k=" + std::to_string(k)};
    try {
      out.outcome = reduce_family(fam, p, opt.policy);
    } catch (const PrecisionError&) {
      out.outcome = reduce_family(fam, p.doubled(), opt.policy);
    }
    bound = out.outcome.gamma_bound.at(p);
  }
  if (out.homogeneous && out.homogeneous->bound > bound) bound = out.homogeneous->bound;
  out.n1_bound = bound.ceil().get_si();
  return out;
}

/// Legendre step for one k: alpha^(n-l) < 28 (a_max + 2) M_k / log 10, with
/// the complementary branch, where a_max runs over the expansion of
/// log alpha / log 10. At least 10 (the argument assumes n - l > 10).
struct PerKLegendre {
  int k = 0;
  LegendreBound bound;
  long nl_bound = 0;  // n - l < nl_bound
  long m_bound = 0;   // m < m_bound = nl_bound + 3
};

inline PerKLegendre per_k_legendre(int k, ChainMode mode = ChainMode::printed, Precision p = default_precision()) {
  const mpz_class M = n_bound_integer(k, mode);
  CFExpansion cf = expand_escalating(
      [k](Precision q) { return k_constants(k, q).log_alpha / log_of(10, q); },
      StopCondition::denominator_above(M), p);
  PerKLegendre out;
  out.k = k;
  out.bound = legendre_bound(cf, M, RealValue(28L, p) / log_of(10, p), k_constants(k, p).alpha);
  out.nl_bound = std::max<long>(10, out.bound.exponent_bound.ceil().get_si());
  out.m_bound = out.nl_bound + 3;
  return out;
}

// ---------------------------------------------------------------------------
// Global rounds (k > 420), with 2^(k/2) dominance.

struct GlobalRoundsOptions {
  ChainMode mode = ChainMode::printed;
  ReductionPolicy policy{};
};

struct RoundResult {
  mpz_class q_cap;                // M: bound on n
  LegendreBound legendre;         // for log 2 / log 10
  long lambda_cap = 0;            // lambda < lambda_cap
  RealValue k_branch_bound;       // lambda = k/2 - 8
  long nl_cap_computed = 0;       // lambda = n - l - 2
  long nl_cap_used = 0;           // family range upper end
  ReductionOutcome reduction;     // tau = log 10 / log 2
  RealValue k_bound;              // k < 2 gamma
  RealValue n_bound;              // small-k chain n bound at k_bound
};

struct GlobalRounds {
  RoundResult round1;
  RoundResult round2;
  bool contradiction = false;  // round2.k_bound < 420
};

inline RealValue global_tau(Precision q) { return log_of(10, q) / log_of(2, q); }

/// mu_j = -log(1 - 2^-j) / log 2, j = 3 .. nl_cap.
inline std::vector<RealValue> global_mus(long nl_cap, Precision q) {
  const RealValue log2 = log_of(2, q);
  const RealValue two(2L, q);
  std::vector<RealValue> out;
  for (long j = 3; j <= nl_cap; ++j) out.push_back(-eval_log(1L - pow_int(two, -j)) / log2);
  return out;
}

inline RoundResult global_round(const mpz_class& q_cap, std::optional<long> nl_cap_override,
                                const GlobalRoundsOptions& opt, Precision p) {
  RoundResult r;
  r.q_cap = q_cap;
  CFExpansion x_cf = expand_escalating([](Precision q) { return log_of(2, q) / log_of(10, q); },
                                       StopCondition::denominator_above(q_cap), p);
  r.legendre = legendre_bound(x_cf, q_cap, RealValue(2L, p) / log_of(10, p), RealValue(2L, p));
  r.lambda_cap = r.legendre.exponent_bound.ceil().get_si();
  r.k_branch_bound = RealValue(2 * (r.lambda_cap + 8), p);
  r.nl_cap_computed = r.lambda_cap + 2;
  r.nl_cap_used = nl_cap_override.value_or(r.nl_cap_computed);
  const long nl_cap = r.nl_cap_used;
  ReductionFamily fam{global_tau,
                      [nl_cap](Precision q) { return global_mus(nl_cap, q); },
                      [](size_t i) { return "n-l=" + std::to_string(i + 3); },
                      RealValue(336L, p) / log_of(2, p),
                      RealValue(2L, p),
                      q_cap,
                      "global M=" + RealValue(q_cap, bound_precision()).to_string(4)};
  r.reduction = reduce_family(fam, p, opt.policy);
  r.k_bound = r.reduction.gamma_bound * 2L;
  r.n_bound = bound_chain(r.k_bound.at(bound_precision()), opt.mode).bound_n;
  return r;
}

/// Round 1 starts from the n bound of the large-k chain; round 2 from the n
/// bound at round 1's k. In printed mode the quoted 9e229, 780, 4e52 and 190
/// are the inputs of the next step.
inline GlobalRounds global_rounds(const GlobalRoundsOptions& opt = {}, Precision p = default_precision()) {
  GlobalRounds out;
  const LargeKChain chain = large_k_chain(421, opt.mode);
  const bool printed = opt.mode == ChainMode::printed;
  const mpz_class m1 = printed ? mpz_class("9" + std::string(229, '0')) : chain.n_final.computed.ceil();
  out.round1 = global_round(m1, printed ? std::optional<long>(780) : std::nullopt, opt, p);
  const mpz_class m2 = printed ? mpz_class("4" + std::string(52, '0')) : out.round1.n_bound.ceil();
  out.round2 = global_round(m2, printed ? std::optional<long>(190) : std::nullopt, opt, p);
  out.contradiction = out.round2.k_bound < RealValue(420L, p);
  return out;
}

}  // namespace kfibcat
