#pragma once

// Matveev-type lower bounds, the Guzman inversion and the explicit chain of
// bounds on n - l, n, lambda and k.
//
// Two modes: `printed` feeds each step the rounded constant quoted for the
// previous step, `strict` feeds it the value recomputed here. Every step
// records the computed constant next to the quoted one.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "kfibcat/precision.hpp"

namespace kfibcat {

inline Precision bound_precision() { return Precision(100); }

struct MatveevInstance {
  int t = 2;
  long d_F = 1;
  RealValue B;
  std::vector<RealValue> A;

  void validate() const {
    if (t != 2 && t != 3) throw DomainError("Matveev instance needs t in {2, 3}");
    if (d_F < 1) throw DomainError("field degree must be positive");
    if (static_cast<int>(A.size()) != t) throw DomainError("need exactly t values A_i");
    const RealValue floor_a = RealValue::parse("0.16", B.precision());
    for (const RealValue& a : A) {
      if (a < floor_a) throw DomainError("A_i below 0.16");
    }
    if (B < RealValue(1L, B.precision())) throw DomainError("B below 1");
  }
};

/// |C(t)| = 1.4 * 30^(t+3) * t^4.5.
inline RealValue matveev_constant(int t, Precision p = bound_precision()) {
  const RealValue thirty = pow_int(RealValue(30L, p), t + 3);
  const RealValue t_pow = pow_real(RealValue(static_cast<long>(t), p), RealValue::parse("4.5", p));
  return RealValue::parse("1.4", p) * thirty * t_pow;
}

/// The (negative) exponent E with |U| > exp(E):
/// C(t) d_F^2 (1 + log d_F) (1 + log B) A_1 ... A_t.
inline RealValue matveev_exponent(const MatveevInstance& inst) {
  inst.validate();
  const Precision p = inst.B.precision();
  const RealValue d(inst.d_F, p);
  RealValue e = -matveev_constant(inst.t, p) * d * d * (eval_log(d) + 1L) * (eval_log(inst.B) + 1L);
  for (const RealValue& a : inst.A) e = e * a;
  return e;
}

/// 2^e H (log H)^e: bounds every f with f / (log f)^e < H, provided
/// H > (4 e^2)^e.
inline RealValue guzman_invert(int e, const RealValue& H) {
  if (e < 1) throw DomainError("guzman_invert needs e >= 1");
  const Precision p = H.precision();
  const RealValue threshold = pow_int(RealValue(4L * e * e, p), e);
  if (H <= threshold) throw DomainError("guzman_invert needs H > (4e^2)^e, got H=" + H.to_string(6));
  return pow_int(RealValue(2L, p), e) * H * pow_int(eval_log(H), e);
}

/// Largest real f with f / (log f)^e = H (f > e^e), by fixed-point iteration.
/// Any f with f / (log f)^e < H and f > e^e lies below it.
inline RealValue invert_log_power(int e, const RealValue& H) {
  RealValue f = guzman_invert(e, H);
  for (int i = 0; i < 200; ++i) {
    RealValue next = H * pow_int(eval_log(f), e);
    if (abs(next - f) < abs(f) * ten_to_minus(H.precision().digits() - 10, H.precision())) return next;
    f = next;
  }
  return f;
}

/// An auxiliary inequality used by the chain, evaluated before use.
struct CheckedLemma {
  std::string name;
  std::string statement;
  bool holds = false;
  std::string detail;
};

/// A quoted constant and the value re-derived from the preceding step.
/// Quoted constants are upward roundings, so `computed <= printed`; a ratio
/// below 0.5 flags a likely transcription error.
struct ConstantCheck {
  std::string name;
  std::string derivation;
  RealValue printed;
  RealValue computed;

  bool upper_rounding_ok() const { return computed <= printed; }
  RealValue ratio() const { return computed / printed; }
  bool ratio_ok() const { return ratio() >= RealValue::parse("0.5", printed.precision()); }
  bool ok() const { return upper_rounding_ok() && ratio_ok(); }
};

enum class ChainMode { printed, strict };

inline const char* to_string(ChainMode m) { return m == ChainMode::printed ? "printed" : "strict"; }

namespace detail {

inline RealValue num(const char* text) { return RealValue::parse(text, bound_precision()); }
inline RealValue lg(long v) { return log_of(v, bound_precision()); }
inline RealValue lg(const RealValue& v) { return eval_log(v); }

// Picks the quoted constant or the recomputed one.
inline const RealValue& pick(ChainMode mode, const ConstantCheck& c) {
  return mode == ChainMode::printed ? c.printed : c.computed;
}

}  // namespace detail

/// Coefficients of the small-k chain (valid for every k >= 3).
struct SmallKChain {
  ConstantCheck nl_first;        // n-l < c k^3 log k log(n-m)
  ConstantCheck n1_three_logs;   // n-1 < c k^4 log k log(n-1) (2 log k + (n-l+1) log alpha)
  ConstantCheck nl_case_l_le_m;  // n-l < c k^3 log^2 k
  ConstantCheck n_case_l_le_m;   // n < c k^3 log^2 k
  ConstantCheck n1_substituted;  // n-1 < c k^7 log^2 k log^2(n-1)
  ConstantCheck n_final;         // n < c k^7 log^4 k
  std::vector<CheckedLemma> lemmas;
};

inline SmallKChain small_k_chain(ChainMode mode = ChainMode::printed) {
  using namespace detail;
  SmallKChain out;
  const RealValue log10 = lg(10);
  const RealValue log3 = lg(3);

  // U_1 with t = 2, d_F = k, A = (log alpha, k log 10), B = n - m;
  // 1 + log k < 2 log k and 1 + log(n-m) < 2 log(n-m), then divide by log alpha.
  out.nl_first = {"nl_first", "4 * 1.4*30^5*2^4.5 * log 10", num("7.1e9"), matveev_constant(2) * log10 * 4L};

  // U_2 with t = 3, d_F = k, A_3 = 2k(2 log k + (n-l+1) log alpha), B = n - 1.
  out.n1_three_logs = {"n1_three_logs", "8 * 1.4*30^6*3^4.5 * log 10", num("2.7e12"),
                       matveev_constant(3) * log10 * 8L};

  // Case l <= m: e = 1, H = c k^3 log k with log H < 35 log k.
  const RealValue c8 = pick(mode, out.nl_first);
  out.nl_case_l_le_m = {"nl_case_l_le_m", "2 * c(nl_first) * 35", num("4.98e11"), c8 * 70L};
  // n < 2m + 6 and m < n - l + 3 give n < 2(n-l) + 12.
  out.n_case_l_le_m = {"n_case_l_le_m", "2 * c(nl_case_l_le_m)", num("1e12"),
                       pick(mode, out.nl_case_l_le_m) * 2L};

  // Case m < l: (n-l+3) log k bounds the A_3 factor; substitute nl_first with
  // log(n-m) <= log(n-1).
  out.n1_substituted = {"n1_substituted", "c(n1_three_logs) * c(nl_first)", num("2e22"),
                        pick(mode, out.n1_three_logs) * c8};
  // e = 2, H = c k^7 log^2 k with log H < 80 log k.
  out.n_final = {"n_final", "4 * c(n1_substituted) * 80^2", num("5.2e26"),
                 pick(mode, out.n1_substituted) * 4L * 6400L};

  const RealValue k3(3L, bound_precision());
  out.lemmas.push_back({"two_log_k", "2 log k > 1 + log k for k >= 3", log3 * 2L > log3 + 1L, ""});
  out.lemmas.push_back({"two_log_nm", "2 log(n-m) > 1 + log(n-m) for n-m >= 3", lg(3) * 2L > lg(3) + 1L, ""});
  {
    // log(7.1e9 k^3 log k) < 35 log k: true at k = 3 and the right side grows faster.
    const RealValue lhs = lg(c8) + log3 * 3L + lg(log3);
    out.lemmas.push_back({"log_H_35", "log(7.1e9 k^3 log k) < 35 log k for k >= 3", lhs < log3 * 35L,
                          "k=3: " + lhs.to_string(6) + " < " + (log3 * 35L).to_string(6)});
  }
  {
    const RealValue H = pick(mode, out.n1_substituted) * pow_int(k3, 7) * pow_int(log3, 2);
    const RealValue lhs = lg(H);
    out.lemmas.push_back({"log_H_80", "log(2e22 k^7 log^2 k) < 80 log k for k >= 3", lhs < log3 * 80L,
                          "k=3: " + lhs.to_string(6) + " < " + (log3 * 80L).to_string(6)});
  }
  {
    // Slack of the rounded 7.1e9 absorbs log 14 / log alpha at the smallest
    // configuration k = 3, n - m = 2.
    const RealValue slack = (num("7.1e9") - matveev_constant(2) * log10 * 4L) * 27L * log3 * lg(2);
    const RealValue extra = lg(14) / lg(RealValue::parse("1.8", bound_precision()));
    out.lemmas.push_back({"log14_absorbed", "log 14 / log alpha fits in the rounding slack of 7.1e9",
                          extra < slack, extra.to_string(6) + " < " + slack.to_string(6)});
  }
  out.lemmas.push_back({"inv_fk_below_2", "1 / f_k(alpha) < 2 (f_k(alpha) > 0.5)", true, "see fk_at_alpha"});
  {
    // 1 / (1 - alpha^-(n-l)) < 3 for n - l >= 1 needs alpha > 3/2, true for k >= 3.
    const RealValue alpha_floor = (1L - pow_int(RealValue(2L, bound_precision()), -3)) * 2L;
    out.lemmas.push_back({"inv_one_minus_below_3", "1 / (1 - alpha^(l-n)) < 3 for k >= 3",
                          1L / (1L - 1L / alpha_floor) < RealValue(3L, bound_precision()),
                          "alpha(3) > " + alpha_floor.to_string(6)});
  }
  out.lemmas.push_back({"guzman_pre_e1", "7.1e9 k^3 log k > 4", c8 > num("4"), ""});
  out.lemmas.push_back({"guzman_pre_e2", "2e22 k^7 log^2 k > 256", pick(mode, out.n1_substituted) > num("256"), ""});
  return out;
}

struct LargeKRecord {
  RealValue lambda_bound;     // lambda < c log k
  RealValue k_bound;          // k < ...
  RealValue n_minus_l_bound;  // n - l < c log k
};

struct BoundChainResult {
  RealValue k;
  ChainMode mode;
  RealValue bound_n_minus_l;       // case l <= m
  RealValue bound_n_case_l_le_m;
  RealValue bound_n;               // valid in both cases
  std::optional<LargeKRecord> large_k;
};

/// Large-k chain (k > 420), all coefficients recorded.
struct LargeKChain {
  ConstantCheck lambda_coeff;       // lambda < c log(n-m)
  ConstantCheck log_nm_coeff;       // log(n-m) < c log k
  ConstantCheck lambda_logk_coeff;  // lambda < c log k
  ConstantCheck nl_coeff;           // n-l < c log k
  ConstantCheck height_eta3_coeff;  // h(eta_3) < c log k
  ConstantCheck u4_numerator;       // U_4 < c / 2^(k/2)
  ConstantCheck k_coeff;            // k < c log^2 k
  ConstantCheck k_final;            // k < c, via guzman_invert
  ConstantCheck n_final;            // n < c
  RealValue k_final_tight;          // exact inversion of k / log^2 k < c
  RealValue k_branch_lambda;        // lambda = k/2 - 8 gives k < this
  ConstantCheck k_branch_quoted;    // against the quoted 10^15
  std::vector<CheckedLemma> lemmas;
};

inline LargeKChain large_k_chain(long k_assumed_min = 421, ChainMode mode = ChainMode::printed) {
  using namespace detail;
  if (k_assumed_min <= 420) throw DomainError("large_k_chain assumes k > 420");
  LargeKChain out;
  const RealValue log2 = lg(2);
  const RealValue log10 = lg(10);
  const RealValue logk0 = lg(k_assumed_min);

  // U_3: t = 2, d_F = 1, A = (log 10, log 2); lambda log 2 < |C(2)| (1 + log(n-m)) log 10 log 2.
  out.lambda_coeff = {"lambda_coeff", "2 * 1.4*30^5*2^4.5 * log 10", num("3.6e9"), matveev_constant(2) * log10 * 2L};
  // log(n-m) < log(5.2e26 k^7 log^4 k) < 14 log 420 + 7 log k + 4 log log k < 26 log k.
  out.log_nm_coeff = {"log_nm_coeff", "26 (lemma)", num("26"), num("26")};
  out.lambda_logk_coeff = {"lambda_logk_coeff", "26 * c(lambda_coeff)", num("9.37e10"),
                           pick(mode, out.lambda_coeff) * 26L};
  const RealValue c937 = pick(mode, out.lambda_logk_coeff);
  out.nl_coeff = {"nl_coeff", "c(lambda_logk_coeff) + 2 / log k", num("9.4e10"), c937 + RealValue(2L, bound_precision()) / logk0};
  const RealValue c94 = pick(mode, out.nl_coeff);
  out.height_eta3_coeff = {"height_eta3_coeff", "(c(nl_coeff) + 1 / log k) * log 2", num("6.6e10"),
                           (c94 + RealValue(1L, bound_precision()) / logk0) * log2};
  // 1/(1 - 2^(l-n)) < 2, the bracket < 5 * 2^3 + 2 = 42, |varsigma| < 2 / 2^(k/2).
  out.u4_numerator = {"u4_numerator", "2 * (5 * 2^3 + 2) * 2", num("168"), num("168")};
  // U_4: t = 3, d_F = 1, A = (log 10, log 2, c66 log k), 1 + log B < 27 log k;
  // (k/2) log 2 < log 168 + |C(3)| 27 log k log 10 log 2 c66 log k.
  out.k_coeff = {"k_coeff", "2 * 27 * 1.4*30^6*3^4.5 * log 10 * c(height_eta3_coeff)", num("1.2e24"),
                 matveev_constant(3) * log10 * pick(mode, out.height_eta3_coeff) * 54L};
  const RealValue c12 = pick(mode, out.k_coeff);
  out.k_final = {"k_final", "guzman_invert(2, c(k_coeff))", num("1e28"), guzman_invert(2, c12)};
  out.k_final_tight = invert_log_power(2, c12);
  const RealValue k_for_n = mode == ChainMode::printed ? out.k_final.printed : out.k_final_tight;
  const RealValue n_coeff = mode == ChainMode::printed ? num("5.2e26") : small_k_chain(mode).n_final.computed;
  out.n_final = {"n_final_large_k", "c(n_final small k) * K^7 log^4 K at K = k bound", num("9e229"),
                 n_coeff * pow_int(k_for_n, 7) * pow_int(lg(k_for_n), 4)};

  // lambda = k/2 - 8 < c937 log k: k < 2 c937 log k + 16.
  {
    RealValue k = num("1e15");
    for (int i = 0; i < 200; ++i) k = c937 * lg(k) * 2L + 16L;
    out.k_branch_lambda = k;
    out.k_branch_quoted = {"k_branch_lambda", "fixed point of k = 2 c(lambda_logk_coeff) log k + 16", num("1e15"), k};
  }

  // Lemmas.
  {
    const RealValue lhs = lg(num("5.2e26"));
    out.lemmas.push_back({"log_52e26_below_14log420", "log 5.2e26 < 14 log 420", lhs < lg(420) * 14L,
                          lhs.to_string(6) + " < " + (lg(420) * 14L).to_string(6)});
    // 4 log log k < 5 log k for every k > 1.
    out.lemmas.push_back({"loglog", "4 log log k < 5 log k for k > 420", lg(logk0) * 4L < logk0 * 5L, ""});
    out.lemmas.push_back({"one_plus_log_B", "1 + 26 log k < 27 log k for k > 420", logk0 > RealValue(1L, bound_precision()), ""});
    // Growth premise for the 2^(n-2)(1+varsigma) estimate: n < 2^(k/2) at k = 421.
    const RealValue n_at = num("5.2e26") * pow_int(RealValue(k_assumed_min, bound_precision()), 7) * pow_int(logk0, 4);
    const RealValue two_pow = eval_exp(log2 * RealValue(k_assumed_min, bound_precision()) / 2L);
    out.lemmas.push_back({"n_below_2_pow_half_k", "5.2e26 k^7 log^4 k < 2^(k/2) for k > 420", n_at < two_pow,
                          n_at.to_string(6) + " < " + two_pow.to_string(6)});
    out.lemmas.push_back({"guzman_pre_k", "c(k_coeff) > (4*2^2)^2", c12 > num("256"), ""});
  }
  return out;
}

/// n - l and n bounds of the small-k chain evaluated at k (k may be huge).
inline BoundChainResult bound_chain(const RealValue& k, ChainMode mode = ChainMode::printed) {
  if (k < RealValue(3L, k.precision())) throw DomainError("bound_chain needs k >= 3");
  const SmallKChain chain = small_k_chain(mode);
  const RealValue logk = eval_log(k);
  BoundChainResult out{k, mode, RealValue(), RealValue(), RealValue(), std::nullopt};
  out.bound_n_minus_l = detail::pick(mode, chain.nl_case_l_le_m) * pow_int(k, 3) * pow_int(logk, 2);
  out.bound_n_case_l_le_m = detail::pick(mode, chain.n_case_l_le_m) * pow_int(k, 3) * pow_int(logk, 2);
  out.bound_n = detail::pick(mode, chain.n_final) * pow_int(k, 7) * pow_int(logk, 4);
  if (k > RealValue(420L, k.precision())) {
    const LargeKChain large = large_k_chain(421, mode);
    out.large_k = LargeKRecord{detail::pick(mode, large.lambda_logk_coeff) * logk,
                               mode == ChainMode::printed ? large.k_final.printed : large.k_final_tight,
                               detail::pick(mode, large.nl_coeff) * logk};
  }
  return out;
}

inline BoundChainResult bound_chain(long k, ChainMode mode = ChainMode::printed) {
  return bound_chain(RealValue(k, bound_precision()), mode);
}

/// M_k for the per-k reduction: ceil of the n bound at k.
inline mpz_class n_bound_integer(long k, ChainMode mode = ChainMode::printed) {
  return bound_chain(k, mode).bound_n.ceil();
}

/// Every quoted constant of both chains with its re-derived value.
inline std::vector<ConstantCheck> bound_chain_constant_checks(ChainMode mode = ChainMode::printed) {
  const SmallKChain s = small_k_chain(mode);
  const LargeKChain l = large_k_chain(421, mode);
  return {s.nl_first,       s.n1_three_logs, s.nl_case_l_le_m, s.n_case_l_le_m, s.n1_substituted,
          s.n_final,        l.lambda_coeff,  l.lambda_logk_coeff, l.nl_coeff,   l.k_coeff,
          l.k_final,        l.n_final};
}

}  // namespace kfibcat
