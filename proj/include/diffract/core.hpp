#pragma once

// Shared plumbing for the diffract library: error types, resource budgets,
// checked 64-bit arithmetic, exact dyadic/rational helpers, deterministic
// number formatting and a small worker-pool helper.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace diffract {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Errors.  SpecError: malformed parameters or inputs (CLI exit code 3).
// BudgetError: a configured resource budget would be exceeded (exit code 2).
// IoError: filesystem failures (exit code 4).

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SpecError : public Error {
public:
  explicit SpecError(const std::string& msg) : Error(msg) {}
};

class BudgetError : public Error {
public:
  explicit BudgetError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Budgets.  Every potentially unbounded enumeration checks one of these
// before materializing anything; violations raise BudgetError naming the
// limit so callers can widen it deliberately.

struct Budget {
  std::int64_t max_points = 50'000'000;        // points materialized per call
  std::int64_t max_pairs = 50'000'000;         // ordered pairs per autocorrelation
  std::int64_t sieve_limit = 1'000'000'000;    // largest x for pi(x)/pi_d(x)
  std::int64_t base_prime_limit = 100'000'000; // cap on sqrt(hi) for segment sieving
  std::int64_t max_fft = std::int64_t{1} << 24; // largest FFT grid

  static const Budget& standard() {
    static const Budget b{};
    return b;
  }
};

// ---------------------------------------------------------------------------
// Checked 64-bit integer arithmetic.  All window/coordinate math is exact;
// overflow is an input problem, never silent wraparound.

inline std::int64_t checked_add(std::int64_t a, std::int64_t b,
                                const char* what = "integer addition") {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw SpecError(std::string("64-bit overflow in ") + what);
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b,
                                const char* what = "integer subtraction") {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw SpecError(std::string("64-bit overflow in ") + what);
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b,
                                const char* what = "integer multiplication") {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw SpecError(std::string("64-bit overflow in ") + what);
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
  return checked_sub(0, a, "integer negation");
}

// Exact n! for 0 <= n <= 20; 21! does not fit in 64 bits.
inline std::int64_t checked_factorial(std::int64_t n) {
  if (n < 0) throw SpecError("factorial of negative argument");
  if (n > 20) throw SpecError("factorial argument " + std::to_string(n) +
                              " exceeds 64-bit range (max 20)");
  std::int64_t r = 1;
  for (std::int64_t k = 2; k <= n; ++k) r *= k;
  return r;
}

inline std::int64_t checked_pow(std::int64_t base, std::int64_t exp) {
  if (exp < 0) throw SpecError("negative exponent in integer power");
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < exp; ++i) r = checked_mul(r, base, "integer power");
  return r;
}

// Floor division / remainder (round toward -inf), defined for b != 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  if (b == 0) throw SpecError("division by zero");
  std::int64_t q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

// ---------------------------------------------------------------------------
// Exact rationals on int64 with 128-bit intermediates.  Used for the exact
// normalization identities (counting vs density) and for eta values before
// any float conversion.

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1; // > 0 after reduce()

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw SpecError("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce first so products of reduced fractions stay in range
    std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    __int128 n = static_cast<__int128>(a.num / g1) * (b.num / g2);
    __int128 d = static_cast<__int128>(a.den / g2) * (b.den / g1);
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw SpecError("rational overflow in multiplication");
    return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
};

// ---------------------------------------------------------------------------
// Exact decimal rendering of a dyadic rational scaled/2^k.  Dyadic points are
// serialized exactly (never through binary floating point).

inline std::string dyadic_to_decimal(std::int64_t scaled, int k) {
  if (k < 0 || k > 25)
    throw SpecError("dyadic scale 2^" + std::to_string(k) + " outside printable range");
  if (scaled == INT64_MIN) throw SpecError("dyadic numerator out of range");
  if (scaled < 0) return "-" + dyadic_to_decimal(-scaled, k);
  if (k == 0) return std::to_string(scaled);
  const std::int64_t den = std::int64_t{1} << k;
  const std::int64_t q = scaled >> k;
  const std::int64_t r = scaled - q * den; // in [0, den)
  if (r == 0) return std::to_string(q);
  // fractional digits: r/2^k = r*5^k / 10^k, zero-padded to k digits
  __int128 five = 1;
  for (int i = 0; i < k; ++i) five *= 5;
  __int128 digits = five * r;
  std::string frac(static_cast<std::size_t>(k), '0');
  for (int i = k - 1; i >= 0; --i) {
    frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(digits % 10));
    digits /= 10;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return std::to_string(q) + "." + frac;
}

// ---------------------------------------------------------------------------
// Deterministic float formatting: shortest-faithful is not needed, 17
// significant digits round-trip and are byte-stable across runs.

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Intervals on the line.  Endpoints are doubles; every integer-lattice
// consumer goes through the checked ceil/floor below, which refuse endpoints
// beyond the contiguous-integer range of a double.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool valid() const { return lo <= hi && std::isfinite(lo) && std::isfinite(hi); }
};

inline constexpr double kMaxExactDouble = 9.0e15; // < 2^53, all integers exact

inline std::int64_t interval_ceil_lo(const Interval& w) {
  if (!w.valid()) throw SpecError("invalid interval");
  if (std::fabs(w.lo) > kMaxExactDouble)
    throw SpecError("interval endpoint too large for exact integer bounds");
  return static_cast<std::int64_t>(std::ceil(w.lo));
}

inline std::int64_t interval_floor_hi(const Interval& w) {
  if (!w.valid()) throw SpecError("invalid interval");
  if (std::fabs(w.hi) > kMaxExactDouble)
    throw SpecError("interval endpoint too large for exact integer bounds");
  return static_cast<std::int64_t>(std::floor(w.hi));
}

// ---------------------------------------------------------------------------
// Small parsing helpers shared by the spec-string grammars (generators,
// window families, CLI config).

namespace detail {

// Split on sep at parenthesis depth zero, so nested specs keep their commas.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) throw SpecError("unbalanced parentheses in '" + s + "'");
  parts.push_back(cur);
  return parts;
}

inline std::int64_t parse_i64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw SpecError("");
    return v;
  } catch (...) {
    throw SpecError(std::string("cannot parse integer ") + what + " from '" + s + "'");
  }
}

inline double parse_f64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw SpecError("");
    return v;
  } catch (...) {
    throw SpecError(std::string("cannot parse number ") + what + " from '" + s + "'");
  }
}

inline bool parse_bool(const std::string& s, const char* what) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw SpecError(std::string("cannot parse boolean ") + what + " from '" + s + "'");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Worker pool sizing.  DIFFRACT_THREADS caps the number of workers; default
// is the hardware concurrency.  All library operations are pure, so data
// parallelism is safe wherever it is used.

inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("DIFFRACT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) n = std::min<long>(v, 1024);
  }
  return std::max(1, n);
}

// Runs fn(i) for i in [0, count) across the worker pool.  Rethrows the first
// exception.  Degrades to a plain loop for small counts or a single worker.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex err_mtx;
  std::atomic<std::size_t> next{0};
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mtx);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace diffract
