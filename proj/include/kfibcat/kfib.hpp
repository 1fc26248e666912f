#pragma once

// Exact k-generalized Fibonacci numbers, decimal digit counts and
// concatenation values.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfibcat/precision.hpp"

namespace kfibcat {

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

inline mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

inline mpz_class pow2(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

/// Number of decimal digits of x >= 1.
inline long digits10(const mpz_class& x) {
  if (sgn(x) <= 0) throw DomainError("digits10 of a nonpositive integer");
  // mpz_sizeinbase is exact or one too large for base 10.
  const long d = static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 10));
  return x < pow10(static_cast<unsigned long>(d - 1)) ? d - 1 : d;
}

/// a * 10^digits10(b) + b.
inline mpz_class concat_value(const mpz_class& a, const mpz_class& b) {
  if (sgn(a) <= 0 || sgn(b) <= 0) throw DomainError("concat_value needs positive operands");
  return a * pow10(static_cast<unsigned long>(digits10(b))) + b;
}

/// F_n^{(k)} for n = 2-k, 2-k+1, ... extended on demand.
///
/// Single writer: `term` and `index_of` extend the cache, so a sequence shared
/// between threads must be extended (see `extend_to`) before concurrent reads.
class KSequence {
 public:
  explicit KSequence(int k) : k_(k) {
    if (k < 2) throw DomainError("k must be at least 2, got " + std::to_string(k));
    terms_.assign(static_cast<size_t>(k - 1), mpz_class(0));  // n = 2-k .. 0
    terms_.emplace_back(1);                                   // n = 1
    window_sum_ = 1;
  }

  int k() const { return k_; }

  /// Largest index currently materialised.
  long top() const { return static_cast<long>(terms_.size()) - k_ + 1; }

  void extend_to(long n) {
    while (top() < n) {
      // window_sum_ holds F_{top} + ... + F_{top-k+1}.
      mpz_class next = window_sum_;
      window_sum_ += next;
      window_sum_ -= terms_[terms_.size() - static_cast<size_t>(k_)];
      terms_.push_back(std::move(next));
    }
  }

  /// Returned by value: extending the cache invalidates references.
  mpz_class term(long n) {
    if (n < 2 - k_) {
      throw IndexError("index " + std::to_string(n) + " below 2-k for k=" + std::to_string(k_));
    }
    extend_to(n);
    return terms_[static_cast<size_t>(n + k_ - 2)];
  }

  /// Read-only access to an already materialised term.
  const mpz_class& at(long n) const {
    if (n < 2 - k_ || n > top()) throw IndexError("index " + std::to_string(n) + " not materialised");
    return terms_[static_cast<size_t>(n + k_ - 2)];
  }

  /// Smallest n >= 1 with F_n = v; terms are generated until they exceed v.
  std::optional<long> index_of(const mpz_class& v) {
    if (sgn(v) <= 0) return std::nullopt;
    for (long n = 1;; ++n) {
      const mpz_class& t = term(n);
      if (t == v) return n;
      if (t > v) return std::nullopt;
    }
  }

 private:
  int k_;
  std::vector<mpz_class> terms_;
  mpz_class window_sum_;
};

inline mpz_class term(int k, long n) {
  KSequence seq(k);
  return seq.term(n);
}

inline std::optional<long> index_of(int k, const mpz_class& v) {
  KSequence seq(k);
  return seq.index_of(v);
}

/// F_n = F_m * 10^d + F_l with d the digit count of F_l.
struct ConcatSolution {
  int k = 0;
  long n = 0;
  long m = 0;
  long l = 0;
  long d = 0;
  mpz_class value;
  // Smallest-index representative among tuples with the same (k, value) and
  // the same block values; F_1 = F_2 = 1 produces duplicates.
  bool canonical = true;

  friend bool operator==(const ConcatSolution& a, const ConcatSolution& b) {
    return a.k == b.k && a.n == b.n && a.m == b.m && a.l == b.l && a.d == b.d && a.value == b.value &&
           a.canonical == b.canonical;
  }
};

}  // namespace kfibcat
