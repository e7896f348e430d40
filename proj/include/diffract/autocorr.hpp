#pragma once

// Finite-sample autocorrelation machinery.  The central object is the
// DiracComb: a finitely supported symmetric measure on displacement space,
// stored sparsely and keyed by exact (scaled-integer) displacement for the
// exact coordinate modes, or by tolerance bins for real coordinates.
// Counting normalization divides raw ordered-pair counts by card(F);
// density normalization divides by the window volume; None keeps raw counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diffract/core.hpp"
#include "diffract/pointsets.hpp"
#include "diffract/primes.hpp"
#include "diffract/windows.hpp"

namespace diffract {

enum class Normalization { Counting, Density, None };

inline constexpr double kRealBinTolerance = 1e-9; // displacement bin width, real mode
inline constexpr double kEpsPositiveDefinite = 1e-9; // relative PD slack for spectra

struct DiracComb {
  CoordMode mode = CoordMode::Integer;
  int scale_log2 = 0;                   // exact displacement = key / 2^scale_log2
  Normalization norm = Normalization::Counting;
  double real_tol = kRealBinTolerance;  // bin width when mode == Real

  std::map<std::int64_t, double> weights;      // key -> normalized weight
  std::map<std::int64_t, std::int64_t> counts; // key -> exact ordered-pair count
                                               // (only for unweighted exact samples)
  std::int64_t card = 0;                // sample size the comb was built from
  double denom = 1.0;                   // denominator applied to raw masses
  std::optional<std::int64_t> denom_int; // exact denominator when integral

  bool exact() const { return !counts.empty(); }

  double entry(std::int64_t key) const {
    auto it = weights.find(key);
    return it == weights.end() ? 0.0 : it->second;
  }

  // Entry at an integer displacement t (convenience; exact modes only).
  double entry_at(std::int64_t t) const {
    if (mode == CoordMode::Real)
      throw SpecError("entry_at(integer) is not defined for real-binned combs");
    return entry(checked_mul(t, std::int64_t{1} << scale_log2, "displacement scale"));
  }

  std::optional<Rational> entry_exact(std::int64_t key) const {
    if (!exact() || !denom_int) return std::nullopt;
    auto it = counts.find(key);
    const std::int64_t c = it == counts.end() ? 0 : it->second;
    return Rational(c, *denom_int);
  }

  double displacement_value(std::int64_t key) const {
    if (mode == CoordMode::Real) return static_cast<double>(key) * real_tol;
    return static_cast<double>(key) / static_cast<double>(std::int64_t{1} << scale_log2);
  }

  std::string displacement_string(std::int64_t key) const {
    if (mode == CoordMode::Real) return fmt_g17(displacement_value(key));
    return dyadic_to_decimal(key, scale_log2);
  }

  double total_mass() const {
    double s = 0;
    for (const auto& [k, v] : weights) s += v;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Two-pointer shifted-intersection count: #{x in pts : x + t in pts}.
// pts must be strictly increasing.  O(card).

inline std::int64_t shifted_intersection_count(const std::vector<std::int64_t>& pts,
                                               std::int64_t t) {
  if (pts.empty()) return 0;
  if (t > 0 && pts.back() > INT64_MAX - t)
    throw SpecError("displacement overflows coordinate range");
  if (t < 0 && pts.front() < INT64_MIN - t)
    throw SpecError("displacement overflows coordinate range");
  std::int64_t cnt = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::int64_t target = pts[i] + t;
    while (j < pts.size() && pts[j] < target) ++j;
    if (j == pts.size()) break;
    if (pts[j] == target) ++cnt;
  }
  return cnt;
}

// Real-mode variant with absolute tolerance; assumes point spacing > 2*tol.
inline std::int64_t shifted_intersection_count_real(const std::vector<double>& pts,
                                                    double t, double tol) {
  std::int64_t cnt = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double target = pts[i] + t;
    while (j < pts.size() && pts[j] < target - tol) ++j;
    if (j == pts.size()) break;
    if (std::fabs(pts[j] - target) <= tol) ++cnt;
  }
  return cnt;
}

// ---------------------------------------------------------------------------
// finite_autocorr: the full autocorrelation comb of a finite sample,
// gamma = (1/denom) * sum_{x,y in F} w(x) w(y) delta_{x-y}.
// The empty sample yields the zero comb.  Pair enumeration is budgeted.

namespace detail {

inline void apply_normalization(DiracComb& c, Normalization norm, double window_width,
                                double abs_mass) {
  c.norm = norm;
  switch (norm) {
    case Normalization::Counting:
      c.denom = abs_mass;
      break;
    case Normalization::Density:
      // gamma_dens = (mass/vol) * gamma_count, i.e. raw masses over the volume
      if (!(window_width > 0))
        throw SpecError("density normalization requires a positive window width");
      c.denom = window_width;
      break;
    case Normalization::None:
      c.denom = 1.0;
      break;
  }
}

} // namespace detail

inline DiracComb finite_autocorr(const PointSet& F, Normalization norm,
                                 double window_width = 0.0,
                                 const Budget& budget = Budget::standard()) {
  DiracComb c;
  c.mode = F.mode();
  c.scale_log2 = F.scale_log2();
  c.norm = norm;
  c.card = static_cast<std::int64_t>(F.size());
  if (F.empty()) {
    // empty sample: the zero comb (no entries), denominator 1
    c.denom = 1.0;
    return c;
  }

  const std::int64_t k = c.card;
  const std::int64_t pair_ops = k * (k - 1) / 2;
  if (pair_ops > budget.max_pairs)
    throw BudgetError("finite_autocorr needs " + std::to_string(pair_ops) +
                      " pair visits, exceeding max_pairs=" + std::to_string(budget.max_pairs));

  if (!F.weighted() && F.mode() != CoordMode::Real) {
    const auto& pts = F.scaled();
    std::unordered_map<std::int64_t, std::int64_t> acc;
    acc.reserve(static_cast<std::size_t>(std::min<std::int64_t>(pair_ops + 1, 1 << 20)));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) ++acc[pts[j] - pts[i]];
    c.counts[0] = k;
    for (const auto& [d, cnt] : acc) {
      c.counts[d] = cnt;
      c.counts[-d] = cnt;
    }
    const double mass = static_cast<double>(k);
    detail::apply_normalization(c, norm, window_width, mass);
    if (norm == Normalization::Counting) c.denom_int = k;
    else if (norm == Normalization::None) c.denom_int = 1;
    else if (window_width == std::floor(window_width) && std::fabs(window_width) < 9e15)
      c.denom_int = static_cast<std::int64_t>(window_width);
    for (const auto& [d, cnt] : c.counts)
      c.weights[d] = static_cast<double>(cnt) / c.denom;
    return c;
  }

  if (F.mode() != CoordMode::Real) {
    // weighted exact coordinates
    const auto& pts = F.scaled();
    std::unordered_map<std::int64_t, double> acc;
    double diag = 0.0, abs_mass = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double wi = F.weight(i);
      diag += wi * wi;
      abs_mass += std::fabs(wi);
    }
    if (abs_mass == 0.0) throw SpecError("weighted sample with zero total mass");
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        acc[pts[j] - pts[i]] += F.weight(i) * F.weight(j);
    detail::apply_normalization(c, norm, window_width, abs_mass);
    c.weights[0] = diag / c.denom;
    for (const auto& [d, v] : acc) {
      c.weights[d] = v / c.denom;
      c.weights[-d] = v / c.denom;
    }
    return c;
  }

  // real coordinates: tolerance-binned displacements
  const auto& pts = F.reals();
  std::unordered_map<std::int64_t, double> acc;
  double diag = 0.0, abs_mass = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double wi = F.weight(i);
    diag += wi * wi;
    abs_mass += std::fabs(wi);
  }
  if (abs_mass == 0.0) throw SpecError("weighted sample with zero total mass");
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = pts[j] - pts[i];
      const std::int64_t key = static_cast<std::int64_t>(std::llround(d / c.real_tol));
      acc[key] += F.weight(i) * F.weight(j);
    }
  detail::apply_normalization(c, norm, window_width, abs_mass);
  c.weights[0] = diag / c.denom;
  for (const auto& [d, v] : acc) {
    c.weights[d] += v / c.denom;
    c.weights[-d] += v / c.denom;
  }
  return c;
}

// Truncated comb: entries only for integer displacements |t| <= t_max,
// computed by the two-pointer merge per displacement.  O((2 t_max + 1) card),
// suitable for large samples where the full comb would blow the pair budget.

inline DiracComb finite_autocorr_truncated(const PointSet& F, std::int64_t t_max,
                                           Normalization norm, double window_width = 0.0,
                                           const Budget& budget = Budget::standard()) {
  if (t_max < 0) throw SpecError("t_max must be >= 0");
  if (F.weighted())
    throw SpecError("truncated autocorrelation expects an unweighted sample");
  if (F.mode() == CoordMode::Real)
    throw SpecError("truncated autocorrelation expects exact coordinates");
  DiracComb c;
  c.mode = F.mode();
  c.scale_log2 = F.scale_log2();
  c.norm = norm;
  c.card = static_cast<std::int64_t>(F.size());
  if (F.empty()) {
    c.denom = 1.0;
    return c;
  }
  const std::int64_t ops = (2 * t_max + 1) * c.card;
  if (ops > budget.max_pairs)
    throw BudgetError("truncated autocorrelation needs " + std::to_string(ops) +
                      " merge steps, exceeding max_pairs=" + std::to_string(budget.max_pairs));
  const std::int64_t scale = std::int64_t{1} << c.scale_log2;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const std::int64_t ts = checked_mul(t, scale, "displacement scale");
    const std::int64_t cnt = shifted_intersection_count(F.scaled(), ts);
    if (cnt > 0) {
      c.counts[ts] = cnt;
      c.counts[-ts] = cnt;
    }
  }
  c.counts[0] = c.card;
  detail::apply_normalization(c, norm, window_width, static_cast<double>(c.card));
  if (norm == Normalization::Counting) c.denom_int = c.card;
  else if (norm == Normalization::None) c.denom_int = 1;
  else if (window_width == std::floor(window_width) && std::fabs(window_width) < 9e15)
    c.denom_int = static_cast<std::int64_t>(window_width);
  for (const auto& [d, cnt] : c.counts)
    c.weights[d] = static_cast<double>(cnt) / c.denom;
  return c;
}

// ---------------------------------------------------------------------------
// Weighted mass ratio at zero: gamma({0}) = sum w^2 / sum |w|.

inline double weighted_autocorr_at_zero(const PointSet& F) {
  if (F.empty()) throw SpecError("autocorrelation at zero of an empty sample");
  double sq = 0.0, abs = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = F.weight(i);
    sq += w * w;
    abs += std::fabs(w);
  }
  if (abs == 0.0) throw SpecError("weighted sample with zero total mass");
  return sq / abs;
}

// ---------------------------------------------------------------------------
// Eta series: the counting-autocorrelation entry at a fixed integer
// displacement t across a window family.  eta_count is exact
// (intersection_count / card); eta_dens rescales by card/volume.  For signed
// prime samples over windows containing 0, the explicit finite-scale bound
// (2 pi_{|t|}(b*) + |t|) / pi(b*) with b* = max(|a|, b) is attached.

struct EtaRow {
  std::int64_t n = 0;
  std::int64_t card = 0;
  std::int64_t intersection_count = 0;
  Rational eta_count_exact{0, 1};
  double eta_count = 0.0;
  double eta_dens = 0.0;
  std::optional<double> eta_bound;
};

struct EtaSeries {
  std::string set_spec;
  std::string family;
  std::int64_t t = 0;
  std::vector<EtaRow> rows;
};

inline EtaRow eta_row_from_sample(const PointSet& F, const Interval& w, std::int64_t n,
                                  std::int64_t t) {
  if (F.weighted()) throw SpecError("eta series expects an unweighted sample");
  EtaRow row;
  row.n = n;
  row.card = static_cast<std::int64_t>(F.size());
  if (F.mode() == CoordMode::Real) {
    row.intersection_count = shifted_intersection_count_real(
        F.reals(), static_cast<double>(t), kRealBinTolerance);
  } else {
    const std::int64_t ts =
        checked_mul(t, std::int64_t{1} << F.scale_log2(), "displacement scale");
    row.intersection_count = shifted_intersection_count(F.scaled(), ts);
  }
  if (row.card > 0) {
    row.eta_count_exact = Rational(row.intersection_count, row.card);
    row.eta_count = row.eta_count_exact.value();
    row.eta_dens = static_cast<double>(row.intersection_count) / w.width();
  }
  return row;
}

inline EtaSeries eta_series(const GeneratorSpec& spec, const WindowFamily& fam,
                            const std::vector<std::int64_t>& n_list, std::int64_t t,
                            const Budget& budget = Budget::standard()) {
  if (n_list.empty()) throw SpecError("eta series needs a nonempty n_list");
  EtaSeries s;
  s.set_spec = spec.to_string();
  s.family = fam.name;
  s.t = t;
  s.rows.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    const Interval w = fam.window(n);
    const PointSet F = generate(spec, w, budget);
    EtaRow row = eta_row_from_sample(F, w, n, t);
    if (spec.kind == GeneratorSpec::Kind::Primes && spec.signed_points &&
        w.lo <= 0.0 && 0.0 <= w.hi) {
      const std::int64_t bstar = std::max<std::int64_t>(
          static_cast<std::int64_t>(-w.lo), static_cast<std::int64_t>(w.hi));
      if (bstar >= 2) {
        auto rb = primes::eta_bound(bstar, t, budget);
        row.eta_bound = rb.value;
      }
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shift-union probe: for Gamma = base U (k + base) with sparse base, the
// counting autocorrelation converges to delta_0 + (delta_k + delta_-k)/2.
// Returns the eta series at t in {0, k, -k}.

struct ShiftUnionCheck {
  EtaSeries at_zero, at_plus_k, at_minus_k;
};

inline ShiftUnionCheck shift_union_autocorr_check(const GeneratorSpec& base,
                                                  std::int64_t k,
                                                  const WindowFamily& fam,
                                                  const std::vector<std::int64_t>& n_list,
                                                  const Budget& budget = Budget::standard()) {
  if (k == 0) throw SpecError("shift-union check requires k != 0");
  GeneratorSpec u;
  u.kind = GeneratorSpec::Kind::ShiftUnion;
  u.shift = k;
  u.base = std::make_shared<GeneratorSpec>(base);
  ShiftUnionCheck out;
  out.at_zero = eta_series(u, fam, n_list, 0, budget);
  out.at_plus_k = eta_series(u, fam, n_list, k, budget);
  out.at_minus_k = eta_series(u, fam, n_list, -k, budget);
  return out;
}

// ---------------------------------------------------------------------------
// Subset stability: Lambda_n must be contained in Gamma_n for every window;
// reports the cardinality ratio and the sup over |t| <= t_max of the
// difference between the two counting-autocorrelation entries.

using Sampler = std::function<PointSet(const Interval&)>;

struct SubsetStabilityRow {
  std::int64_t n = 0;
  std::int64_t card_sub = 0, card_super = 0;
  double card_ratio = 0.0;
  double sup_eta_diff = 0.0;
};

inline std::vector<SubsetStabilityRow>
subset_stability_check(const Sampler& lambda, const Sampler& gamma,
                       const WindowFamily& fam, const std::vector<std::int64_t>& n_list,
                       std::int64_t t_max, const Budget& = Budget::standard()) {
  std::vector<SubsetStabilityRow> rows;
  for (std::int64_t n : n_list) {
    const Interval w = fam.window(n);
    PointSet sub = lambda(w);
    PointSet super = gamma(w);
    if (sub.weighted() || super.weighted())
      throw SpecError("subset stability expects unweighted samples");
    if (sub.mode() == CoordMode::Real || super.mode() == CoordMode::Real)
      throw SpecError("subset stability expects exact coordinates");
    const int scale = std::max(sub.scale_log2(), super.scale_log2());
    PointSet a = sub.rescaled(scale);
    PointSet b = super.rescaled(scale);
    // containment walk
    std::size_t j = 0;
    for (std::int64_t x : a.scaled()) {
      while (j < b.scaled().size() && b.scaled()[j] < x) ++j;
      if (j == b.scaled().size() || b.scaled()[j] != x)
        throw SpecError("subset violation at window n=" + std::to_string(n) +
                        ": point " + dyadic_to_decimal(x, scale) +
                        " of the subset is missing from the superset");
    }
    SubsetStabilityRow row;
    row.n = n;
    row.card_sub = static_cast<std::int64_t>(a.size());
    row.card_super = static_cast<std::int64_t>(b.size());
    row.card_ratio = row.card_super == 0
                         ? 1.0
                         : static_cast<double>(row.card_sub) / static_cast<double>(row.card_super);
    double sup = 0.0;
    const std::int64_t step = std::int64_t{1} << scale;
    for (std::int64_t t = -t_max; t <= t_max; ++t) {
      const double ea =
          a.empty() ? 0.0
                    : static_cast<double>(shifted_intersection_count(a.scaled(), t * step)) /
                          static_cast<double>(a.size());
      const double eb =
          b.empty() ? 0.0
                    : static_cast<double>(shifted_intersection_count(b.scaled(), t * step)) /
                          static_cast<double>(b.size());
      sup = std::max(sup, std::fabs(ea - eb));
    }
    row.sup_eta_diff = sup;
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<SubsetStabilityRow>
subset_stability_check(const GeneratorSpec& lambda, const GeneratorSpec& gamma,
                       const WindowFamily& fam, const std::vector<std::int64_t>& n_list,
                       std::int64_t t_max, const Budget& budget = Budget::standard()) {
  return subset_stability_check(
      [&](const Interval& w) { return generate(lambda, w, budget); },
      [&](const Interval& w) { return generate(gamma, w, budget); }, fam, n_list, t_max,
      budget);
}

// ---------------------------------------------------------------------------
// Product embedding Lambda x {0} in the plane: the 2D autocorrelation comb.
// Equals the tensor product (1D comb) x delta_0 entrywise, which the test
// suite asserts; computed here genuinely from planar ordered pairs.

struct Comb2D {
  int scale_log2 = 0;
  Normalization norm = Normalization::Counting;
  std::map<std::pair<std::int64_t, std::int64_t>, double> weights;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts;
  std::int64_t card = 0;
  double denom = 1.0;
};

inline Comb2D product_embed_autocorr(const PointSet& lambda,
                                     Normalization norm = Normalization::Counting,
                                     Interval b_window = Interval{-1.0, 1.0},
                                     const Budget& budget = Budget::standard()) {
  if (!b_window.valid() || !b_window.contains(0.0))
    throw SpecError("product embedding needs a second-axis window containing 0");
  if (lambda.weighted()) throw SpecError("product embedding expects an unweighted sample");
  if (lambda.mode() == CoordMode::Real)
    throw SpecError("product embedding expects exact coordinates");
  Comb2D c;
  c.scale_log2 = lambda.scale_log2();
  c.norm = norm;
  c.card = static_cast<std::int64_t>(lambda.size());
  if (c.card == 0) {
    c.denom = 1.0;
    return c;
  }
  const std::int64_t pair_ops = c.card * (c.card - 1) / 2;
  if (pair_ops > budget.max_pairs)
    throw BudgetError("product embedding needs " + std::to_string(pair_ops) +
                      " pair visits, exceeding max_pairs=" + std::to_string(budget.max_pairs));
  // planar points (x_i, 0); second coordinate differences are identically 0
  const auto& pts = lambda.scaled();
  c.counts[{0, 0}] = c.card;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const std::int64_t d = pts[j] - pts[i];
      ++c.counts[{d, 0}];
      ++c.counts[{-d, 0}];
    }
  c.denom = norm == Normalization::Counting ? static_cast<double>(c.card) : 1.0;
  for (const auto& [k, v] : c.counts)
    c.weights[k] = static_cast<double>(v) / c.denom;
  return c;
}

// ---------------------------------------------------------------------------
// Divergence witness: the dyadic block construction evaluated against the
// tent function f(x) = max(0, 1 - |x|).  The pairing (1/card F) sum f(x - y)
// is computed exactly in scaled integers; row m reports the sample in
// [-4^m, 4^m] and the lower bound sqrt(4^m)/8 = 2^(m-3) it must exceed,
// witnessing that no subsequence of density normalizations can converge.

struct DivergenceRow {
  int m = 0;
  std::int64_t n = 0;     // window parameter 4^m
  std::int64_t card = 0;
  std::int64_t tent_num = 0; // exact numerator at scale 2^(m+1)
  int scale_log2 = 0;
  double value = 0.0;     // (1/card) sum f(x-y)
  double bound = 0.0;     // 2^(m-3)
  bool meets_bound = false;
};

inline std::vector<DivergenceRow>
divergence_witness(int max_m, const Budget& budget = Budget::standard()) {
  if (max_m < 0) throw SpecError("divergence witness level must be nonnegative");
  if (max_m > 12)
    throw BudgetError("divergence witness level capped at 12 (card grows as 2^m)");
  std::vector<DivergenceRow> rows;
  if (max_m == 0) return rows; // empty prefix: nothing to witness
  for (int m = 1; m <= max_m; ++m) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::DyadicPathological;
    spec.max_level = m;
    const std::int64_t n = checked_pow(4, m);
    PointSet F = generate(spec, Interval{-static_cast<double>(n), static_cast<double>(n)},
                          budget);
    DivergenceRow row;
    row.m = m;
    row.n = n;
    row.card = static_cast<std::int64_t>(F.size());
    row.scale_log2 = F.scale_log2();
    const std::int64_t one = std::int64_t{1} << row.scale_log2; // tent radius, scaled
    const auto& pts = F.scaled();
    // near-pair visits are bounded by the within-block pair totals
    std::int64_t near_pairs = 0;
    for (int j = 1; j <= m; ++j) {
      const std::int64_t bj = std::int64_t{1} << j;
      near_pairs += bj * (bj - 1) / 2;
    }
    if (near_pairs > budget.max_pairs)
      throw BudgetError("divergence witness at m=" + std::to_string(m) + " needs " +
                        std::to_string(near_pairs) + " pair visits, exceeding max_pairs=" +
                        std::to_string(budget.max_pairs));
    // ordered pairs within tent support via a sliding window
    std::int64_t num = row.card * one; // diagonal pairs contribute f(0) = 1 each
    std::size_t lo = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (lo < i && pts[i] - pts[lo] >= one) ++lo;
      for (std::size_t j = lo; j < i; ++j)
        num += 2 * (one - (pts[i] - pts[j])); // both orders
    }
    row.tent_num = num;
    row.value = static_cast<double>(num) /
                (static_cast<double>(one) * static_cast<double>(row.card));
    row.bound = std::ldexp(1.0, m - 3); // 2^(m-3)
    // exact comparison: num / (one * card) >= 2^(m-3)
    // <=> num >= 2^(2m-2) * card  (one = 2^(m+1))
    const __int128 rhs = static_cast<__int128>(row.card) << (2 * m - 2);
    row.meets_bound = static_cast<__int128>(num) >= rhs;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Besicovitch-style density rows: card(F_n) / vol(A_n) along a family, with
// running extremes so tests can assert trends.

struct DensityRow {
  std::int64_t n = 0;
  std::int64_t card = 0;
  double volume = 0.0;
  double density = 0.0;
  double running_sup = 0.0;
  double running_inf = 0.0;
};

inline std::vector<DensityRow>
besicovitch_density(const GeneratorSpec& spec, const WindowFamily& fam,
                    const std::vector<std::int64_t>& n_list,
                    const Budget& budget = Budget::standard()) {
  std::vector<DensityRow> rows;
  double sup = 0.0, inf = 1e300;
  for (std::int64_t n : n_list) {
    const Interval w = fam.window(n);
    const PointSet F = generate(spec, w, budget);
    DensityRow r;
    r.n = n;
    r.card = static_cast<std::int64_t>(F.size());
    r.volume = w.width();
    if (!(r.volume > 0)) throw SpecError("degenerate window volume at n=" + std::to_string(n));
    r.density = static_cast<double>(r.card) / r.volume;
    sup = std::max(sup, r.density);
    inf = std::min(inf, r.density);
    r.running_sup = sup;
    r.running_inf = inf;
    rows.push_back(r);
  }
  return rows;
}

} // namespace diffract
