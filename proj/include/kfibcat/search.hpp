#pragma once

// Exhaustive exact search for F_n = F_m 10^d + F_l.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "kfibcat/kfib.hpp"

namespace kfibcat {

struct SearchRange {
  int k_min = 3;
  int k_max = 420;
  long m_max = 199;
  long l_max = 199;

  void validate() const {
    if (k_min < 2 || k_max < k_min) throw DomainError("invalid k range");
    if (m_max < 1 || l_max < 1) throw DomainError("m and l ranges start at 1");
  }
};

enum class SearchMode {
  windowed,   // n restricted to m + l - 3 < n < m + l + 6
  exhaustive  // membership of every concatenation by sequence generation
};

enum class VerifyReason { ok, identity, digit_count, digit_window, index_window, bad_indices };

inline const char* to_string(VerifyReason r) {
  switch (r) {
    case VerifyReason::ok: return "ok";
    case VerifyReason::identity: return "identity F_n = F_m 10^d + F_l fails";
    case VerifyReason::digit_count: return "d is not the digit count of F_l";
    case VerifyReason::digit_window: return "(l-2)/5 < d < (l+2)/3 fails";
    case VerifyReason::index_window: return "m+l-3 < n < m+l+6 fails";
    case VerifyReason::bad_indices: return "indices out of domain";
  }
  return "?";
}

struct VerifyResult {
  bool ok = false;
  VerifyReason reason = VerifyReason::bad_indices;
  explicit operator bool() const { return ok; }
};

inline VerifyResult verify_solution(const ConcatSolution& s) {
  if (s.k < 2 || s.m < 1 || s.l < 1 || s.n < 1 || s.d < 1) return {false, VerifyReason::bad_indices};
  KSequence seq(s.k);
  const mpz_class fn = seq.term(s.n);
  const mpz_class fm = seq.term(s.m);
  const mpz_class fl = seq.term(s.l);
  if (fn != s.value || fn != fm * pow10(static_cast<unsigned long>(s.d)) + fl) {
    return {false, VerifyReason::identity};
  }
  if (digits10(fl) != s.d) return {false, VerifyReason::digit_count};
  if (s.l >= 3 && !(5 * s.d > s.l - 2 && 3 * s.d < s.l + 2)) return {false, VerifyReason::digit_window};
  if (!(s.m + s.l - 3 < s.n && s.n < s.m + s.l + 6)) return {false, VerifyReason::index_window};
  return {true, VerifyReason::ok};
}

namespace detail {

// Canonical flag: smallest (m, l) among tuples with equal (k, n, F_m, F_l).
inline void mark_canonical(std::vector<ConcatSolution>& sols) {
  std::sort(sols.begin(), sols.end(), [](const ConcatSolution& a, const ConcatSolution& b) {
    return std::tie(a.k, a.n, a.m, a.l) < std::tie(b.k, b.n, b.m, b.l);
  });
  std::set<std::tuple<int, long, std::string, std::string>> seen;
  for (ConcatSolution& s : sols) {
    KSequence seq(s.k);
    auto key = std::make_tuple(s.k, s.n, seq.term(s.m).get_str(), seq.term(s.l).get_str());
    s.canonical = seen.insert(std::move(key)).second;
  }
}

inline std::vector<ConcatSolution> search_one_k(int k, long m_max, long l_max, SearchMode mode) {
  std::vector<ConcatSolution> out;
  KSequence seq(k);
  seq.extend_to(m_max + l_max + 6);
  std::vector<long> digit_counts(static_cast<size_t>(l_max) + 1, 0);
  for (long l = 1; l <= l_max; ++l) digit_counts[static_cast<size_t>(l)] = digits10(seq.at(l));
  for (long m = 1; m <= m_max; ++m) {
    const mpz_class fm = seq.at(m);
    for (long l = 1; l <= l_max; ++l) {
      const long d = digit_counts[static_cast<size_t>(l)];
      const mpz_class v = fm * pow10(static_cast<unsigned long>(d)) + seq.at(l);
      if (mode == SearchMode::windowed) {
        for (long n = std::max(1L, m + l - 2); n <= m + l + 5; ++n) {
          if (seq.at(n) == v) out.push_back(ConcatSolution{k, n, m, l, d, v, true});
        }
      } else if (auto n = seq.index_of(v)) {
        out.push_back(ConcatSolution{k, *n, m, l, d, v, true});
      }
    }
  }
  return out;
}

}  // namespace detail

/// Every (k, m, l) in range; canonical and duplicate-index tuples are both
/// reported, ordered by (k, n, m, l). Work is split by k across `workers`.
inline std::vector<ConcatSolution> brute_force(const SearchRange& range, SearchMode mode = SearchMode::windowed,
                                               unsigned workers = 1) {
  range.validate();
  const int count = range.k_max - range.k_min + 1;
  std::vector<std::vector<ConcatSolution>> per_k(static_cast<size_t>(count));
  auto work = [&](unsigned worker) {
    for (int i = static_cast<int>(worker); i < count; i += static_cast<int>(workers)) {
      per_k[static_cast<size_t>(i)] = detail::search_one_k(range.k_min + i, range.m_max, range.l_max, mode);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<ConcatSolution> all;
  for (auto& v : per_k) all.insert(all.end(), v.begin(), v.end());
  detail::mark_canonical(all);
  return all;
}

/// All n in [n_min, n_max] and m < m_bound with F_n = F_m 10^d + F_l for some
/// l >= 1: the re-search inside the reduced bounds for one k.
inline std::vector<ConcatSolution> windowed_search(int k, long n_min, long n_max, long m_bound) {
  KSequence seq(k);
  seq.extend_to(std::max(n_max, m_bound));
  std::unordered_map<std::string, long> index;  // F_l -> smallest l >= 1
  for (long l = n_max; l >= 1; --l) index[seq.at(l).get_str()] = l;
  std::vector<ConcatSolution> out;
  for (long n = std::max(1L, n_min); n <= n_max; ++n) {
    const mpz_class& fn = seq.at(n);
    const long digits_n = digits10(fn);
    for (long m = 1; m < m_bound && m <= n; ++m) {
      const mpz_class& fm = seq.at(m);
      for (long d = 1; d < digits_n; ++d) {
        const mpz_class rest = fn - fm * pow10(static_cast<unsigned long>(d));
        if (sgn(rest) <= 0) break;
        if (digits10(rest) != d) continue;
        auto it = index.find(rest.get_str());
        if (it == index.end()) continue;
        // Both indices of the value 1 are reported.
        for (long l = it->second; l <= n_max && seq.at(l) == rest; ++l) {
          out.push_back(ConcatSolution{k, n, m, l, d, fn, true});
        }
      }
    }
  }
  detail::mark_canonical(out);
  return out;
}

struct PowerCaseCertificate {
  bool no_mersenne_power_of_five = false;  // 2^a - 1 != 5^d
  bool parity_branch = false;              // 2^a != 2^b 10^d + 1
  bool small_n_direct = false;             // direct scan of the power-of-two terms
  long a_max = 0;
  long d_max = 0;
  bool holds() const { return no_mersenne_power_of_five && parity_branch && small_n_direct; }
};

/// Finite exact certificate for the n <= k + 1 case at the given caps.
inline PowerCaseCertificate power_case_certificate(long a_max, long d_max, long n_direct_max = 64) {
  if (a_max < 1 || d_max < 1) throw DomainError("caps must be positive");
  PowerCaseCertificate c;
  c.a_max = a_max;
  c.d_max = d_max;

  std::set<mpz_class> fives;
  mpz_class f = 1;
  for (long d = 1; d <= d_max; ++d) {
    f *= 5;
    fives.insert(f);
  }
  c.no_mersenne_power_of_five = true;
  for (long a = 1; a <= a_max; ++a) {
    if (fives.count(pow2(static_cast<unsigned long>(a)) - 1)) c.no_mersenne_power_of_five = false;
  }

  // l <= m: 2^(n-l) = 2^(m-l) 10^d + 1 with n - l >= 1, d >= 1; left even, right odd.
  c.parity_branch = true;
  for (long a = 1; a <= a_max && c.parity_branch; ++a) {
    const mpz_class lhs = pow2(static_cast<unsigned long>(a));
    for (long b = 0; b <= a_max && c.parity_branch; ++b) {
      const mpz_class base = pow2(static_cast<unsigned long>(b));
      for (long d = 1; d <= d_max; ++d) {
        const mpz_class rhs = base * pow10(static_cast<unsigned long>(d)) + 1;
        if (rhs > lhs) break;
        if (rhs == lhs || mpz_odd_p(rhs.get_mpz_t()) == 0) {
          c.parity_branch = false;
          break;
        }
      }
    }
  }

  // Direct: 2^(n-2) = 2^(m-2) 10^d + 2^(l-2) has no solution with
  // 2 <= m, l < n <= n_direct_max (covers n <= k + 1 for k < n_direct_max).
  c.small_n_direct = true;
  for (long n = 3; n <= n_direct_max && c.small_n_direct; ++n) {
    const mpz_class fn = pow2(static_cast<unsigned long>(n - 2));
    for (long m = 2; m < n && c.small_n_direct; ++m) {
      for (long l = 2; l < n; ++l) {
        const mpz_class fl = pow2(static_cast<unsigned long>(l - 2));
        if (pow2(static_cast<unsigned long>(m - 2)) * pow10(static_cast<unsigned long>(digits10(fl))) + fl == fn) {
          c.small_n_direct = false;
          break;
        }
      }
    }
  }
  return c;
}

/// True iff 2^a - 1 = 5^d has no solution with a <= a_max, d <= d_max and
/// the parity branch holds.
inline bool power_case_impossible(long a_max, long d_max) {
  const PowerCaseCertificate c = power_case_certificate(a_max, d_max);
  return c.holds();
}

}  // namespace kfibcat
