#pragma once

// Prime machinery: a cached segmented sieve of Eratosthenes plus the exact
// counting functions built on it.  Everything here is sieve-based; no
// probabilistic or analytic primality shortcuts, so every reported count is
// exact within the configured budgets.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "diffract/core.hpp"

namespace diffract::primes {

namespace detail {

// Odd-only sieve up to limit (inclusive); returns all primes <= limit.
inline std::vector<std::int64_t> simple_sieve(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  if (limit < 3) return out;
  // bit i represents the odd number 2i+1; index 0 (the unit 1) stays unused
  const std::size_t n_odd = static_cast<std::size_t>((limit - 1) / 2) + 1;
  std::vector<std::uint8_t> composite(n_odd, 0);
  for (std::int64_t p = 3; p * p <= limit; p += 2) {
    if (composite[static_cast<std::size_t>(p / 2)]) continue;
    for (std::int64_t m = p * p; m <= limit; m += 2 * p)
      composite[static_cast<std::size_t>(m / 2)] = 1;
  }
  for (std::int64_t v = 3; v <= limit; v += 2)
    if (!composite[static_cast<std::size_t>(v / 2)]) out.push_back(v);
  return out;
}

// Process-wide cache of base primes, grown on demand and handed out as
// immutable snapshots so concurrent readers never see a reallocation.
inline std::shared_ptr<const std::vector<std::int64_t>>
base_primes(std::int64_t limit, const Budget& budget = Budget::standard()) {
  if (limit > budget.base_prime_limit)
    throw BudgetError("base-prime limit " + std::to_string(limit) +
                      " exceeds budget base_prime_limit=" +
                      std::to_string(budget.base_prime_limit));
  static std::mutex mtx;
  static std::shared_ptr<const std::vector<std::int64_t>> cache =
      std::make_shared<const std::vector<std::int64_t>>();
  static std::int64_t cached_limit = 0;
  std::lock_guard<std::mutex> lk(mtx);
  if (limit > cached_limit) {
    std::int64_t grow = std::max<std::int64_t>(limit, 2 * cached_limit);
    grow = std::max<std::int64_t>(grow, 1 << 16);
    grow = std::min<std::int64_t>(grow, budget.base_prime_limit);
    cache = std::make_shared<const std::vector<std::int64_t>>(simple_sieve(grow));
    cached_limit = grow;
  }
  return cache;
}

inline std::int64_t isqrt(std::int64_t x) {
  if (x < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// Sieve the odd numbers of [lo, hi] (both odd, lo >= 3).  Returns a bitmap
// where bit j set means lo + 2j is composite.  base must cover sqrt(hi).
inline std::vector<std::uint64_t>
sieve_odd_segment(std::int64_t lo, std::int64_t hi,
                  const std::vector<std::int64_t>& base) {
  const std::size_t n = static_cast<std::size_t>((hi - lo) / 2) + 1;
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  for (std::int64_t p : base) {
    if (p == 2) continue;
    if (p * p > hi) break;
    std::int64_t start = p * p;
    if (start < lo) {
      std::int64_t q = (lo + p - 1) / p; // lo > 0 throughout
      std::int64_t m = q * p;
      if ((m & 1) == 0) m += p;
      start = m;
    }
    for (std::int64_t m = start; m <= hi; m += 2 * p) {
      std::size_t j = static_cast<std::size_t>((m - lo) / 2);
      bits[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }
  if (lo == 1) bits[0] |= 1; // the unit is not prime
  return bits;
}

inline constexpr std::int64_t kSegmentSpan = std::int64_t{1} << 20; // numbers per segment

} // namespace detail

// ---------------------------------------------------------------------------
// primes_in: all primes in [lo, hi], ascending.  Works at large offsets
// (hi up to ~9e15) as long as sqrt(hi) fits the base-prime budget and the
// result fits the point budget.

inline std::vector<std::int64_t>
primes_in(std::int64_t lo, std::int64_t hi, const Budget& budget = Budget::standard()) {
  std::vector<std::int64_t> out;
  if (hi < 2 || hi < lo) return out;
  lo = std::max<std::int64_t>(lo, 2);
  if (hi > static_cast<std::int64_t>(kMaxExactDouble))
    throw BudgetError("primes_in upper end " + std::to_string(hi) +
                      " beyond supported range 9e15");
  const std::int64_t root = detail::isqrt(hi);
  auto base = detail::base_primes(std::max<std::int64_t>(root, 16), budget);
  if (lo <= 2) out.push_back(2);
  std::int64_t seg_lo = std::max<std::int64_t>(lo, 3);
  if ((seg_lo & 1) == 0) ++seg_lo;
  while (seg_lo <= hi) {
    std::int64_t seg_hi = std::min(hi, seg_lo + detail::kSegmentSpan - 2);
    if ((seg_hi & 1) == 0) --seg_hi;
    auto bits = detail::sieve_odd_segment(seg_lo, seg_hi, *base);
    for (std::int64_t v = seg_lo; v <= seg_hi; v += 2) {
      std::size_t j = static_cast<std::size_t>((v - seg_lo) / 2);
      if (!(bits[j >> 6] >> (j & 63) & 1)) {
        if (static_cast<std::int64_t>(out.size()) >= budget.max_points)
          throw BudgetError("primes_in would exceed max_points=" +
                            std::to_string(budget.max_points));
        out.push_back(v);
      }
    }
    seg_lo = seg_hi + 2;
  }
  return out;
}

inline bool is_prime(std::int64_t x, const Budget& budget = Budget::standard()) {
  if (x < 2) return false;
  if (x == 2) return true;
  if ((x & 1) == 0) return false;
  return !primes_in(x, x, budget).empty();
}

// ---------------------------------------------------------------------------
// pi(x): exact prime count by segmented sieve summation, with cumulative
// per-block counts cached so repeated queries stay cheap.

namespace detail {

struct PiCache {
  std::mutex mtx;
  std::vector<std::int64_t> cum; // cum[k] = #primes < (k+1)*kSegmentSpan
  // single-segment bitmap memo for the partial block of the last query
  std::int64_t memo_block = -1;
  std::vector<std::uint64_t> memo_bits;
};

inline PiCache& pi_cache() {
  static PiCache c;
  return c;
}

} // namespace detail

inline std::int64_t pi(std::int64_t x, const Budget& budget = Budget::standard()) {
  if (x < 2) return 0;
  if (x > budget.sieve_limit)
    throw BudgetError("pi(" + std::to_string(x) + ") exceeds budget sieve_limit=" +
                      std::to_string(budget.sieve_limit));
  auto base = detail::base_primes(std::max<std::int64_t>(detail::isqrt(x), 16), budget);
  auto& cache = detail::pi_cache();
  std::lock_guard<std::mutex> lk(cache.mtx);
  const std::int64_t block = x / detail::kSegmentSpan;
  while (static_cast<std::int64_t>(cache.cum.size()) < block) {
    // extend full blocks [k*span, (k+1)*span)
    const std::int64_t k = static_cast<std::int64_t>(cache.cum.size());
    const std::int64_t lo = k * detail::kSegmentSpan;
    const std::int64_t hi = lo + detail::kSegmentSpan - 1;
    std::int64_t lo_odd = std::max<std::int64_t>(lo, 1) | 1;
    auto bits = detail::sieve_odd_segment(lo_odd, hi, *base);
    std::int64_t cnt = (k == 0) ? 1 : 0; // the prime 2
    const std::size_t n = static_cast<std::size_t>((hi - lo_odd) / 2) + 1;
    for (std::size_t w = 0; w < bits.size(); ++w) {
      std::uint64_t word = ~bits[w];
      if ((w + 1) * 64 > n) word &= (~std::uint64_t{0}) >> (64 - (n & 63));
      cnt += __builtin_popcountll(word);
    }
    cache.cum.push_back((k == 0 ? 0 : cache.cum.back()) + cnt);
  }
  std::int64_t count = block == 0 ? 0 : cache.cum[static_cast<std::size_t>(block) - 1];
  // partial block [block*span, x]; the memo is sieved to the block end so a
  // later query in the same block can reuse it safely
  const std::int64_t lo = block * detail::kSegmentSpan;
  const std::int64_t hi = lo + detail::kSegmentSpan - 1;
  std::int64_t lo_odd = std::max<std::int64_t>(lo, 1) | 1;
  if (cache.memo_block != block) {
    auto full = detail::base_primes(std::max<std::int64_t>(detail::isqrt(hi), 16), budget);
    cache.memo_bits = detail::sieve_odd_segment(lo_odd, hi, *full);
    cache.memo_block = block;
  }
  if (block == 0) count += 1; // the prime 2
  for (std::int64_t v = lo_odd; v <= x; v += 2) {
    std::size_t j = static_cast<std::size_t>((v - lo_odd) / 2);
    if (!(cache.memo_bits[j >> 6] >> (j & 63) & 1)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// pi_d(x, d): #{p prime <= x : p + d prime}.  pi_0 == pi.  For odd d the
// only candidate is p = 2 (p + d would otherwise be even), so the result is
// 0 or 1 by construction.

inline std::int64_t pi_d(std::int64_t x, std::int64_t d,
                         const Budget& budget = Budget::standard()) {
  if (d < 0) throw SpecError("pi_d requires d >= 0");
  if (d == 0) return pi(x, budget);
  if (x < 2) return 0;
  if (x > budget.sieve_limit)
    throw BudgetError("pi_d(" + std::to_string(x) + ") exceeds budget sieve_limit=" +
                      std::to_string(budget.sieve_limit));
  if (d & 1) {
    std::int64_t r = is_prime(2 + d, budget) ? 1 : 0;
    return r; // <= 1: any odd prime p gives even composite p + d
  }
  auto base = detail::base_primes(
      std::max<std::int64_t>(detail::isqrt(checked_add(x, d)), 16), budget);
  std::int64_t count = 0; // p = 2 impossible for even d > 0 (2 + d even > 2)
  std::int64_t seg_lo = 3;
  while (seg_lo <= x) {
    std::int64_t seg_hi = std::min<std::int64_t>(x, seg_lo + detail::kSegmentSpan - 2);
    if ((seg_hi & 1) == 0) --seg_hi;
    auto a = detail::sieve_odd_segment(seg_lo, seg_hi, *base);
    auto b = detail::sieve_odd_segment(seg_lo + d, seg_hi + d, *base);
    const std::int64_t n = (seg_hi - seg_lo) / 2 + 1;
    for (std::int64_t j = 0; j < n; ++j) {
      bool pa = !(a[static_cast<std::size_t>(j) >> 6] >> (j & 63) & 1);
      bool pb = !(b[static_cast<std::size_t>(j) >> 6] >> (j & 63) & 1);
      if (pa && pb) ++count;
    }
    seg_lo = seg_hi + 2;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Twin-style membership: positive members of P_d = {p : p prime, p+d or p-d
// prime} inside [lo, hi].  The partner may fall outside the window; only the
// member itself is range-filtered.

inline std::vector<std::int64_t>
twin_members(std::int64_t d, std::int64_t lo, std::int64_t hi,
             const Budget& budget = Budget::standard()) {
  if (d < 1) throw SpecError("twin distance d must be >= 1");
  std::vector<std::int64_t> out;
  if (hi < 2 || hi < lo) return out;
  auto ps = primes_in(2, checked_add(hi, d), budget);
  auto prime = [&](std::int64_t v) {
    return std::binary_search(ps.begin(), ps.end(), v);
  };
  for (std::int64_t p : ps) {
    if (p > hi) break;
    if (p < lo) continue;
    if (prime(p + d) || (p - d >= 2 && prime(p - d))) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Explicit bounds.

// Interval prime-count bound pi(m+n) - pi(m) <= 2 pi(n).  The inequality is
// asserted only for n >= 2 and m >= 1; at n = 1 both sides are reported raw
// (pi(1) = 0 makes the right side vacuous there).
struct BrunTitchmarshCheck {
  std::int64_t m = 0, n = 0;
  std::int64_t lhs = 0; // pi(m+n) - pi(m)
  std::int64_t rhs = 0; // 2 pi(n)
  bool holds = false;
  bool asserted = false;
};

inline BrunTitchmarshCheck
brun_titchmarsh_check(std::int64_t m, std::int64_t n,
                      const Budget& budget = Budget::standard()) {
  if (m < 1 || n < 1) throw SpecError("brun_titchmarsh_check requires m, n >= 1");
  BrunTitchmarshCheck r;
  r.m = m;
  r.n = n;
  r.lhs = pi(checked_add(m, n), budget) - pi(m, budget);
  r.rhs = 2 * pi(n, budget);
  r.holds = r.lhs <= r.rhs;
  r.asserted = n >= 2;
  return r;
}

// Finite-scale bound (2 pi_{|m|}(n) + |m|) / pi(n) dominating the prime
// autocorrelation entry at displacement m over [-n, n].
struct EtaBound {
  std::int64_t n = 0, m = 0;
  std::int64_t pi_abs_m = 0; // pi_{|m|}(n)
  std::int64_t pi_n = 0;
  Rational exact{0, 1};
  double value = 0.0;
};

inline EtaBound eta_bound(std::int64_t n, std::int64_t m,
                          const Budget& budget = Budget::standard()) {
  if (n < 2) throw SpecError("eta_bound requires n >= 2");
  EtaBound r;
  r.n = n;
  r.m = m;
  const std::int64_t am = m < 0 ? -m : m;
  r.pi_abs_m = pi_d(n, am, budget);
  r.pi_n = pi(n, budget);
  r.exact = Rational(checked_add(2 * r.pi_abs_m, am), r.pi_n);
  r.value = r.exact.value();
  return r;
}

} // namespace diffract::primes
