#pragma once

// Point sets on the line and the generators that produce them.  A PointSet
// is a finite, strictly increasing list of coordinates in one of three
// modes: Integer (exact int64), Dyadic (exact num/2^k at a shared scale) or
// Real (double).  Optional per-point weights turn a set into a weighted
// comb.  All generators are pure: same spec + window => identical output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "diffract/core.hpp"
#include "diffract/primes.hpp"

namespace diffract {

enum class CoordMode { Integer, Dyadic, Real };

class PointSet {
public:
  PointSet() = default;

  static PointSet from_integers(std::vector<std::int64_t> pts,
                                std::vector<double> weights = {}) {
    PointSet s;
    s.mode_ = CoordMode::Integer;
    s.scale_log2_ = 0;
    s.scaled_ = std::move(pts);
    s.weights_ = std::move(weights);
    s.finalize_exact();
    return s;
  }

  static PointSet from_dyadic(std::vector<std::int64_t> scaled, int scale_log2,
                              std::vector<double> weights = {}) {
    if (scale_log2 < 0 || scale_log2 > 40)
      throw SpecError("dyadic scale out of range");
    PointSet s;
    s.mode_ = scale_log2 == 0 ? CoordMode::Integer : CoordMode::Dyadic;
    s.scale_log2_ = scale_log2;
    s.scaled_ = std::move(scaled);
    s.weights_ = std::move(weights);
    s.finalize_exact();
    return s;
  }

  static PointSet from_reals(std::vector<double> pts,
                             std::vector<double> weights = {}) {
    PointSet s;
    s.mode_ = CoordMode::Real;
    s.reals_ = std::move(pts);
    s.weights_ = std::move(weights);
    if (!s.weights_.empty() && s.weights_.size() != s.reals_.size())
      throw SpecError("weight vector length mismatch");
    std::vector<std::size_t> idx(s.reals_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return s.reals_[a] < s.reals_[b]; });
    std::vector<double> p2(s.reals_.size());
    std::vector<double> w2(s.weights_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      p2[i] = s.reals_[idx[i]];
      if (!s.weights_.empty()) w2[i] = s.weights_[idx[i]];
      if (!std::isfinite(p2[i])) throw SpecError("non-finite coordinate");
      if (i > 0 && p2[i] == p2[i - 1]) throw SpecError("duplicate coordinate in real point set");
    }
    s.reals_ = std::move(p2);
    s.weights_ = std::move(w2);
    return s;
  }

  std::size_t size() const {
    return mode_ == CoordMode::Real ? reals_.size() : scaled_.size();
  }
  bool empty() const { return size() == 0; }
  CoordMode mode() const { return mode_; }
  int scale_log2() const { return scale_log2_; }
  bool weighted() const { return !weights_.empty(); }

  const std::vector<std::int64_t>& scaled() const { return scaled_; }
  const std::vector<double>& reals() const { return reals_; }
  const std::vector<double>& weights() const { return weights_; }

  double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }

  double coord_double(std::size_t i) const {
    if (mode_ == CoordMode::Real) return reals_[i];
    return static_cast<double>(scaled_[i]) / static_cast<double>(std::int64_t{1} << scale_log2_);
  }

  // Exact text form: integers plain, dyadics as terminating decimals,
  // reals with 17 significant digits.
  std::string coord_string(std::size_t i) const {
    if (mode_ == CoordMode::Real) return fmt_g17(reals_[i]);
    return dyadic_to_decimal(scaled_[i], scale_log2_);
  }

  double total_abs_weight() const {
    if (weights_.empty()) return static_cast<double>(size());
    double s = 0;
    for (double w : weights_) s += std::fabs(w);
    return s;
  }

  // Subset with coordinates inside [w.lo, w.hi] (inclusive).
  PointSet restrict(const Interval& w) const {
    if (!w.valid()) throw SpecError("invalid interval");
    PointSet s;
    s.mode_ = mode_;
    s.scale_log2_ = scale_log2_;
    for (std::size_t i = 0; i < size(); ++i) {
      double x = coord_double(i);
      if (x < w.lo || x > w.hi) continue;
      if (mode_ == CoordMode::Real) s.reals_.push_back(reals_[i]);
      else s.scaled_.push_back(scaled_[i]);
      if (!weights_.empty()) s.weights_.push_back(weights_[i]);
    }
    return s;
  }

  // Rescale exact coordinates to a finer shared denominator 2^k.
  PointSet rescaled(int k) const {
    if (mode_ == CoordMode::Real) throw SpecError("cannot rescale a real-mode set");
    if (k < scale_log2_) throw SpecError("rescale must not lose precision");
    PointSet s = *this;
    if (k == scale_log2_) return s;
    const int shift = k - scale_log2_;
    for (auto& v : s.scaled_) v = checked_mul(v, std::int64_t{1} << shift, "rescale");
    s.scale_log2_ = k;
    s.mode_ = k == 0 ? CoordMode::Integer : CoordMode::Dyadic;
    return s;
  }

private:
  void finalize_exact() {
    if (!weights_.empty() && weights_.size() != scaled_.size())
      throw SpecError("weight vector length mismatch");
    for (double w : weights_)
      if (!std::isfinite(w)) throw SpecError("non-finite weight");
    if (weights_.empty()) {
      std::sort(scaled_.begin(), scaled_.end());
      scaled_.erase(std::unique(scaled_.begin(), scaled_.end()), scaled_.end());
    } else {
      std::vector<std::size_t> idx(scaled_.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scaled_[a] < scaled_[b];
      });
      std::vector<std::int64_t> p2(scaled_.size());
      std::vector<double> w2(weights_.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        p2[i] = scaled_[idx[i]];
        w2[i] = weights_[idx[i]];
        if (i > 0 && p2[i] == p2[i - 1])
          throw SpecError("duplicate coordinate in weighted point set");
      }
      scaled_ = std::move(p2);
      weights_ = std::move(w2);
    }
  }

  CoordMode mode_ = CoordMode::Integer;
  int scale_log2_ = 0;
  std::vector<std::int64_t> scaled_;
  std::vector<double> reals_;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Substitution sequences.  Thue-Morse over {a, b} (a -> ab, b -> ba, fixed
// point starting with a): symbol at n is 'a' iff popcount(n) is even.
// Rudin-Shapiro: value at n is +1 iff the number of '11' bit pairs in n is
// even; by convention the letter 'a' labels the +1 positions.

enum class SubstSystem { ThueMorse, RudinShapiro };

inline bool thue_morse_is_a(std::int64_t n) {
  return (__builtin_popcountll(static_cast<unsigned long long>(n)) & 1) == 0;
}

inline bool rudin_shapiro_is_a(std::int64_t n) {
  unsigned long long u = static_cast<unsigned long long>(n);
  return (__builtin_popcountll(u & (u >> 1)) & 1) == 0;
}

inline bool substitution_symbol_is(SubstSystem sys, char letter, std::int64_t n) {
  if (letter != 'a' && letter != 'b') throw SpecError("substitution letter must be 'a' or 'b'");
  bool is_a = sys == SubstSystem::ThueMorse ? thue_morse_is_a(n) : rudin_shapiro_is_a(n);
  return letter == 'a' ? is_a : !is_a;
}

// Positions of `letter` among the first prefix_length symbols (0-based).
inline std::vector<std::int64_t>
substitution_positions(SubstSystem sys, char letter, std::int64_t prefix_length,
                       const Budget& budget = Budget::standard()) {
  if (prefix_length < 0) throw SpecError("prefix length must be >= 0");
  if (prefix_length > budget.max_points)
    throw BudgetError("substitution prefix exceeds max_points=" +
                      std::to_string(budget.max_points));
  std::vector<std::int64_t> out;
  for (std::int64_t n = 0; n < prefix_length; ++n)
    if (substitution_symbol_is(sys, letter, n)) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// Generator specifications.  Text grammar (CLI `--set` and config values):
//
//   integers | arithmetic:step=S | primes[:signed=BOOL] | prime-powers
//   twin:d=D | factorials | fibonacci | geometric:a=A
//   shift-union:base=(SPEC),k=K | embed-factorial:base=(SPEC),max=M
//   thue-morse:letter=L | rudin-shapiro:letter=L
//   dyadic:m=M (m omitted = auto) | harmonic
//
// Nested specs are parenthesized so their parameter commas do not split the
// outer parameter list.

struct GeneratorSpec {
  enum class Kind {
    Integers,
    Arithmetic,
    Primes,
    PrimePowers,
    TwinPrimes,
    Factorials,
    Fibonacci,
    Geometric,
    ShiftUnion,
    EmbedFactorial,
    Substitution,
    DyadicPathological,
    WeightedHarmonicComb,
  };

  Kind kind = Kind::Integers;
  bool signed_points = true;        // Primes / PrimePowers / TwinPrimes
  std::int64_t d = 2;               // TwinPrimes distance
  std::int64_t step = 1;            // Arithmetic
  double ratio = 2.0;               // Geometric
  std::int64_t shift = 1;           // ShiftUnion
  int max_block = 20;               // EmbedFactorial (blocks 3..max_block)
  int max_level = 0;                // DyadicPathological (0 = auto from window)
  SubstSystem system = SubstSystem::ThueMorse;
  char letter = 'a';
  std::shared_ptr<GeneratorSpec> base; // ShiftUnion / EmbedFactorial

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
};

PointSet generate(const GeneratorSpec& spec, const Interval& window,
                  const Budget& budget = Budget::standard());

inline GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  std::string name = text;
  std::string params;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    name = text.substr(0, pos);
    params = text.substr(pos + 1);
  }
  auto norm = name;
  std::replace(norm.begin(), norm.end(), '_', '-');

  GeneratorSpec s;
  if (norm == "integers") s.kind = Kind::Integers;
  else if (norm == "arithmetic") s.kind = Kind::Arithmetic;
  else if (norm == "primes") s.kind = Kind::Primes;
  else if (norm == "prime-powers") s.kind = Kind::PrimePowers;
  else if (norm == "twin" || norm == "twin-primes") s.kind = Kind::TwinPrimes;
  else if (norm == "factorials") s.kind = Kind::Factorials;
  else if (norm == "fibonacci") s.kind = Kind::Fibonacci;
  else if (norm == "geometric") s.kind = Kind::Geometric;
  else if (norm == "shift-union") s.kind = Kind::ShiftUnion;
  else if (norm == "embed-factorial") s.kind = Kind::EmbedFactorial;
  else if (norm == "thue-morse") { s.kind = Kind::Substitution; s.system = SubstSystem::ThueMorse; }
  else if (norm == "rudin-shapiro") { s.kind = Kind::Substitution; s.system = SubstSystem::RudinShapiro; }
  else if (norm == "dyadic" || norm == "dyadic-pathological") s.kind = Kind::DyadicPathological;
  else if (norm == "harmonic" || norm == "weighted-harmonic" || norm == "weighted-harmonic-comb")
    s.kind = Kind::WeightedHarmonicComb;
  else throw SpecError("unknown generator '" + name + "'");

  bool saw_base = false;
  if (!params.empty()) {
    for (const auto& kv : detail::split_top_level(params, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw SpecError("generator parameter '" + kv + "' is not key=value");
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "signed") s.signed_points = detail::parse_bool(val, "signed");
      else if (key == "d") s.d = detail::parse_i64(val, "d");
      else if (key == "step") s.step = detail::parse_i64(val, "step");
      else if (key == "a") s.ratio = detail::parse_f64(val, "a");
      else if (key == "k") s.shift = detail::parse_i64(val, "k");
      else if (key == "max") s.max_block = static_cast<int>(detail::parse_i64(val, "max"));
      else if (key == "m") s.max_level = static_cast<int>(detail::parse_i64(val, "m"));
      else if (key == "letter") {
        if (val.size() != 1) throw SpecError("letter must be a single character");
        s.letter = val[0];
      } else if (key == "base") {
        std::string inner = val;
        if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')')
          inner = inner.substr(1, inner.size() - 2);
        s.base = std::make_shared<GeneratorSpec>(GeneratorSpec::parse(inner));
        saw_base = true;
      } else {
        throw SpecError("unknown generator parameter '" + key + "'");
      }
    }
  }

  // validation
  switch (s.kind) {
    case Kind::Arithmetic:
      if (s.step < 1) throw SpecError("arithmetic step must be >= 1");
      break;
    case Kind::TwinPrimes:
      if (s.d < 1) throw SpecError("twin distance d must be >= 1");
      break;
    case Kind::Geometric:
      if (!(s.ratio > 1.0)) throw SpecError("geometric ratio must be > 1");
      break;
    case Kind::ShiftUnion:
      if (!saw_base) throw SpecError("shift-union requires base=(...)");
      if (s.shift == 0) throw SpecError("shift-union requires k != 0");
      break;
    case Kind::EmbedFactorial:
      if (!saw_base) throw SpecError("embed-factorial requires base=(...)");
      if (s.max_block < 3 || s.max_block > 20)
        throw SpecError("embed-factorial max block must be in [3, 20]");
      break;
    case Kind::Substitution:
      if (s.letter != 'a' && s.letter != 'b')
        throw SpecError("substitution letter must be 'a' or 'b'");
      break;
    case Kind::DyadicPathological:
      if (s.max_level < 0 || s.max_level > 16)
        throw SpecError("dyadic level m must be in [0, 16] (0 = auto)");
      break;
    default:
      break;
  }
  return s;
}

inline std::string GeneratorSpec::to_string() const {
  switch (kind) {
    case Kind::Integers: return "integers";
    case Kind::Arithmetic: return "arithmetic:step=" + std::to_string(step);
    case Kind::Primes:
      return signed_points ? "primes" : "primes:signed=false";
    case Kind::PrimePowers:
      return signed_points ? "prime-powers" : "prime-powers:signed=false";
    case Kind::TwinPrimes: {
      std::string t = "twin:d=" + std::to_string(d);
      if (!signed_points) t += ",signed=false";
      return t;
    }
    case Kind::Factorials: return "factorials";
    case Kind::Fibonacci: return "fibonacci";
    case Kind::Geometric: return "geometric:a=" + fmt_g17(ratio);
    case Kind::ShiftUnion:
      return "shift-union:base=(" + base->to_string() + "),k=" + std::to_string(shift);
    case Kind::EmbedFactorial:
      return "embed-factorial:base=(" + base->to_string() + "),max=" + std::to_string(max_block);
    case Kind::Substitution:
      return std::string(system == SubstSystem::ThueMorse ? "thue-morse" : "rudin-shapiro") +
             ":letter=" + std::string(1, letter);
    case Kind::DyadicPathological:
      return max_level == 0 ? "dyadic" : "dyadic:m=" + std::to_string(max_level);
    case Kind::WeightedHarmonicComb: return "harmonic";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Generators.

namespace detail {

inline void check_point_budget(std::int64_t count, const Budget& budget, const char* who) {
  if (count > budget.max_points)
    throw BudgetError(std::string(who) + " would enumerate " + std::to_string(count) +
                      " points, exceeding max_points=" + std::to_string(budget.max_points));
}

// signed mirror: out = sorted(neg(pos_of(-window)) ++ pos_of(window))
inline std::vector<std::int64_t>
mirror_signed(std::vector<std::int64_t> pos, std::vector<std::int64_t> neg_source) {
  std::vector<std::int64_t> out;
  out.reserve(pos.size() + neg_source.size());
  for (auto it = neg_source.rbegin(); it != neg_source.rend(); ++it)
    out.push_back(-*it);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

inline PointSet gen_integers(std::int64_t step, const Interval& w, const Budget& budget) {
  const std::int64_t ilo = interval_ceil_lo(w), ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pts;
  if (ilo <= ihi) {
    const std::int64_t klo = ceil_div(ilo, step), khi = floor_div(ihi, step);
    if (klo <= khi) {
      check_point_budget(khi - klo + 1, budget, "integer lattice");
      pts.reserve(static_cast<std::size_t>(khi - klo + 1));
      for (std::int64_t k = klo; k <= khi; ++k) pts.push_back(k * step);
    }
  }
  return PointSet::from_integers(std::move(pts));
}

inline PointSet gen_primes(bool signed_points, const Interval& w, const Budget& budget) {
  const std::int64_t ilo = interval_ceil_lo(w), ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pos, neg;
  if (ihi >= 2) pos = primes::primes_in(std::max<std::int64_t>(ilo, 2), ihi, budget);
  if (signed_points && ilo <= -2)
    neg = primes::primes_in(std::max<std::int64_t>(2, -ihi), -ilo, budget);
  return PointSet::from_integers(mirror_signed(std::move(pos), std::move(neg)));
}

inline PointSet gen_prime_powers(bool signed_points, const Interval& w, const Budget& budget) {
  const std::int64_t ilo = interval_ceil_lo(w), ihi = interval_floor_hi(w);
  auto powers_in = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    if (hi < 2) return out;
    lo = std::max<std::int64_t>(lo, 2);
    auto ps = primes::primes_in(2, hi, budget);
    for (std::int64_t p : ps) {
      std::int64_t v = p;
      while (v <= hi) {
        if (v >= lo) {
          check_point_budget(static_cast<std::int64_t>(out.size()) + 1, budget, "prime powers");
          out.push_back(v);
        }
        if (v > hi / p) break;
        v *= p;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::int64_t> pos = powers_in(ilo, ihi);
  std::vector<std::int64_t> neg;
  if (signed_points && ilo <= -2) neg = powers_in(std::max<std::int64_t>(2, -ihi), -ilo);
  return PointSet::from_integers(mirror_signed(std::move(pos), std::move(neg)));
}

inline PointSet gen_twin(std::int64_t d, bool signed_points, const Interval& w,
                         const Budget& budget) {
  const std::int64_t ilo = interval_ceil_lo(w), ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pos, neg;
  if (ihi >= 2) pos = primes::twin_members(d, std::max<std::int64_t>(ilo, 2), ihi, budget);
  if (signed_points && ilo <= -2)
    neg = primes::twin_members(d, std::max<std::int64_t>(2, -ihi), -ilo, budget);
  return PointSet::from_integers(mirror_signed(std::move(pos), std::move(neg)));
}

inline PointSet gen_factorials(const Interval& w, const Budget& budget) {
  const std::int64_t ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pts;
  std::int64_t v = 1;
  for (std::int64_t k = 1; k <= 20 && v <= ihi; ++k) {
    v = checked_factorial(k);
    if (v > ihi) break;
    if (static_cast<double>(v) >= w.lo) pts.push_back(v);
  }
  check_point_budget(static_cast<std::int64_t>(pts.size()), budget, "factorials");
  return PointSet::from_integers(std::move(pts));
}

inline PointSet gen_fibonacci(const Interval& w, const Budget&) {
  const std::int64_t ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pts;
  std::int64_t a = 1, b = 1;
  while (a <= ihi) {
    if (static_cast<double>(a) >= w.lo && (pts.empty() || pts.back() != a)) pts.push_back(a);
    std::int64_t next = a + b; // f_k <= 9e15 + 9e15, no overflow possible here
    a = b;
    b = next;
    if (a > ihi) break;
  }
  return PointSet::from_integers(std::move(pts));
}

inline PointSet gen_geometric(double ratio, const Interval& w, const Budget& budget) {
  const bool integral = ratio == std::floor(ratio) && ratio >= 2.0 && ratio <= 1e9;
  if (integral) {
    const std::int64_t a = static_cast<std::int64_t>(ratio);
    const std::int64_t ihi = interval_floor_hi(w);
    std::vector<std::int64_t> pts;
    std::int64_t v = a;
    while (v <= ihi) {
      if (static_cast<double>(v) >= w.lo) pts.push_back(v);
      if (v > ihi / a) break;
      v *= a;
    }
    check_point_budget(static_cast<std::int64_t>(pts.size()), budget, "geometric");
    return PointSet::from_integers(std::move(pts));
  }
  std::vector<double> pts;
  double v = ratio;
  while (v <= w.hi && std::isfinite(v)) {
    if (v >= w.lo) {
      check_point_budget(static_cast<std::int64_t>(pts.size()) + 1, budget, "geometric");
      pts.push_back(v);
    }
    v *= ratio;
  }
  return PointSet::from_reals(std::move(pts));
}

inline PointSet gen_substitution(SubstSystem sys, char letter, const Interval& w,
                                 const Budget& budget) {
  const std::int64_t ilo = std::max<std::int64_t>(interval_ceil_lo(w), 0);
  const std::int64_t ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pts;
  if (ilo <= ihi) {
    check_point_budget(ihi - ilo + 1, budget, "substitution positions");
    for (std::int64_t n = ilo; n <= ihi; ++n)
      if (substitution_symbol_is(sys, letter, n)) pts.push_back(n);
  }
  return PointSet::from_integers(std::move(pts));
}

inline PointSet gen_dyadic(int max_level, const Interval& w, const Budget& budget) {
  int m_max = max_level;
  if (m_max == 0) {
    // auto: include every block whose ambient scale 4^m fits below the window top
    m_max = 1;
    while (m_max < 12 && std::pow(4.0, m_max + 1) - 0.5 <= w.hi) ++m_max;
  }
  if (m_max > 16) throw SpecError("dyadic level m must be <= 16");
  const int scale = m_max + 1;
  const std::int64_t den = std::int64_t{1} << scale;
  std::vector<std::int64_t> pts;
  check_point_budget(std::int64_t{2} << m_max, budget, "dyadic blocks");
  for (int m = 1; m <= m_max; ++m) {
    const std::int64_t block_base = checked_mul(checked_pow(4, m), den); // 4^m at shared scale
    const std::int64_t sub = std::int64_t{1} << (scale - (m + 1));       // 1/2^{m+1} at scale
    for (std::int64_t j = std::int64_t{1} << m; j >= 1; --j) {
      const std::int64_t v = block_base - j * sub;
      const double x = static_cast<double>(v) / static_cast<double>(den);
      if (x >= w.lo && x <= w.hi) pts.push_back(v);
    }
  }
  return PointSet::from_dyadic(std::move(pts), scale);
}

inline PointSet gen_harmonic(const Interval& w, const Budget& budget) {
  const std::int64_t ilo = std::max<std::int64_t>(interval_ceil_lo(w), 1);
  const std::int64_t ihi = interval_floor_hi(w);
  std::vector<std::int64_t> pts;
  std::vector<double> ws;
  if (ilo <= ihi) {
    check_point_budget(ihi - ilo + 1, budget, "harmonic comb");
    for (std::int64_t n = ilo; n <= ihi; ++n) {
      pts.push_back(n);
      ws.push_back(1.0 / static_cast<double>(n));
    }
  }
  return PointSet::from_integers(std::move(pts), std::move(ws));
}

inline PointSet gen_shift_union(const GeneratorSpec& spec, const Interval& w,
                                const Budget& budget) {
  const GeneratorSpec& b = *spec.base;
  PointSet part1 = generate(b, w, budget);
  if (part1.weighted()) throw SpecError("shift-union base must be unweighted");
  const double k = static_cast<double>(spec.shift);
  PointSet part2_src = generate(b, Interval{w.lo - k, w.hi - k}, budget);
  if (part1.mode() == CoordMode::Real || part2_src.mode() == CoordMode::Real) {
    std::vector<double> pts = part1.mode() == CoordMode::Real
                                  ? part1.reals()
                                  : std::vector<double>{};
    if (part1.mode() != CoordMode::Real)
      for (std::size_t i = 0; i < part1.size(); ++i) pts.push_back(part1.coord_double(i));
    for (std::size_t i = 0; i < part2_src.size(); ++i)
      pts.push_back(part2_src.coord_double(i) + k);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return PointSet::from_reals(std::move(pts));
  }
  const int scale = std::max(part1.scale_log2(), part2_src.scale_log2());
  PointSet a = part1.rescaled(scale);
  PointSet c = part2_src.rescaled(scale);
  const std::int64_t ks = checked_mul(spec.shift, std::int64_t{1} << scale, "shift scale");
  std::vector<std::int64_t> pts = a.scaled();
  for (std::int64_t v : c.scaled()) pts.push_back(checked_add(v, ks, "shifted point"));
  check_point_budget(static_cast<std::int64_t>(pts.size()), budget, "shift-union");
  return PointSet::from_dyadic(std::move(pts), scale);
}

inline PointSet gen_embed_factorial(const GeneratorSpec& spec, const Interval& w,
                                    const Budget& budget) {
  const GeneratorSpec& b = *spec.base;
  std::vector<std::int64_t> pts;
  for (int n = 3; n <= spec.max_block; ++n) {
    const std::int64_t fn = checked_factorial(n);
    if (static_cast<double>(fn - n) > w.hi) break;
    if (static_cast<double>(fn + n) < w.lo) continue;
    PointSet block = generate(b, Interval{-double(n), double(n)}, budget);
    if (block.mode() != CoordMode::Integer)
      throw SpecError("embed-factorial base must be integer-supported");
    if (block.weighted()) throw SpecError("embed-factorial base must be unweighted");
    for (std::int64_t x : block.scaled()) {
      const std::int64_t v = checked_add(fn, x, "embedded block point");
      if (static_cast<double>(v) >= w.lo && static_cast<double>(v) <= w.hi) {
        check_point_budget(static_cast<std::int64_t>(pts.size()) + 1, budget,
                           "embed-factorial");
        pts.push_back(v);
      }
    }
  }
  return PointSet::from_integers(std::move(pts));
}

} // namespace detail

inline PointSet generate(const GeneratorSpec& spec, const Interval& window,
                         const Budget& budget) {
  if (!window.valid()) throw SpecError("invalid window interval");
  using K = GeneratorSpec::Kind;
  switch (spec.kind) {
    case K::Integers: return detail::gen_integers(1, window, budget);
    case K::Arithmetic: return detail::gen_integers(spec.step, window, budget);
    case K::Primes: return detail::gen_primes(spec.signed_points, window, budget);
    case K::PrimePowers: return detail::gen_prime_powers(spec.signed_points, window, budget);
    case K::TwinPrimes: return detail::gen_twin(spec.d, spec.signed_points, window, budget);
    case K::Factorials: return detail::gen_factorials(window, budget);
    case K::Fibonacci: return detail::gen_fibonacci(window, budget);
    case K::Geometric: return detail::gen_geometric(spec.ratio, window, budget);
    case K::ShiftUnion: return detail::gen_shift_union(spec, window, budget);
    case K::EmbedFactorial: return detail::gen_embed_factorial(spec, window, budget);
    case K::Substitution:
      return detail::gen_substitution(spec.system, spec.letter, window, budget);
    case K::DyadicPathological: return detail::gen_dyadic(spec.max_level, window, budget);
    case K::WeightedHarmonicComb: return detail::gen_harmonic(window, budget);
  }
  throw SpecError("unhandled generator kind");
}

// Convenience: the d-twin members (p with p+d prime, both in the window) as
// a signed sample, matching generate() with a twin spec.
inline PointSet twin_set(std::int64_t d, const Interval& window,
                         const Budget& budget = Budget::standard()) {
  return detail::gen_twin(d, true, window, budget);
}

} // namespace diffract
