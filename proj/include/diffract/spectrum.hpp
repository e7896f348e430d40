#pragma once

// Diffraction spectra of finite samples.  The intensity at frequency y is
//   I_F(y) = (1/mass) |sum_x w(x) e^{2 pi i x y}|^2,  mass = sum |w(x)|,
// evaluated either directly (any frequency list) or on the torus grid
// y = j/M via an FFT after reducing integer coordinates mod M; for torus
// frequencies the reduction is an exact identity, so the two paths agree to
// rounding.  comb_fourier transforms an autocorrelation comb instead, using
// the reflection symmetry gamma(-t) = gamma(t); for the counting comb of F
// it reproduces I_F pointwise.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "diffract/autocorr.hpp"
#include "diffract/core.hpp"
#include "diffract/pointsets.hpp"
#include "diffract/windows.hpp"

namespace diffract {

struct SpectrumGrid {
  std::vector<double> freqs;
  std::vector<double> intensity; // I(y), already divided by mass
  double mass = 0.0;             // sum of |weights| (card when unweighted)
  std::int64_t card = 0;

  double per_point(std::size_t i) const {
    return mass > 0 ? intensity[i] / mass : 0.0;
  }
  double min_intensity() const {
    double m = 0.0;
    bool first = true;
    for (double v : intensity) {
      if (first || v < m) m = v;
      first = false;
    }
    return m;
  }
  double max_intensity() const {
    double m = 0.0;
    for (double v : intensity) m = std::max(m, v);
    return m;
  }
  double sum_intensity() const {
    double s = 0.0;
    for (double v : intensity) s += v;
    return s;
  }
};

inline std::vector<double> torus_freqs(std::int64_t m) {
  if (m < 1) throw SpecError("torus grid needs M >= 1");
  std::vector<double> f(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < m; ++j)
    f[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(m);
  return f;
}

namespace detail {

// cos/sin of 2 pi frac(prod) with the range reduction done in long double;
// prod magnitudes up to ~2^62 stay exact because x is an exact integer scaled
// coordinate and long double carries a 64-bit mantissa.
inline std::complex<double> unit_phase(long double prod) {
  long double f = std::fmod(prod, 1.0L);
  if (f < 0) f += 1.0L;
  const long double ang = 2.0L * 3.14159265358979323846264338327950288L * f;
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

inline bool is_pow2(std::int64_t m) { return m > 0 && (m & (m - 1)) == 0; }

// Iterative radix-2 FFT, e^{-2 pi i jm/M} convention; |output| is all the
// spectrum code consumes, so the sign convention never leaks.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // single root table, indexed with stride n/len per stage
  std::vector<std::complex<double>> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    roots[k] = unit_phase(-static_cast<long double>(k) / static_cast<long double>(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * roots[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Direct evaluation at an arbitrary frequency list.  O(card * #freqs).

inline SpectrumGrid patterson_direct(const PointSet& F, const std::vector<double>& freqs,
                                     const Budget& budget = Budget::standard()) {
  const std::int64_t ops =
      static_cast<std::int64_t>(F.size()) * static_cast<std::int64_t>(freqs.size());
  if (ops > budget.max_pairs)
    throw BudgetError("direct spectrum needs " + std::to_string(ops) +
                      " phase evaluations, exceeding max_pairs=" +
                      std::to_string(budget.max_pairs));
  SpectrumGrid g;
  g.freqs = freqs;
  g.intensity.assign(freqs.size(), 0.0);
  g.card = static_cast<std::int64_t>(F.size());
  g.mass = F.weighted() ? F.total_abs_weight() : static_cast<double>(F.size());
  if (F.empty()) {
    g.mass = 0.0;
    return g;
  }
  if (!(g.mass > 0)) throw SpecError("spectrum of a sample with zero total mass");
  const bool exact = F.mode() != CoordMode::Real;
  const long double inv_scale =
      exact ? 1.0L / static_cast<long double>(std::int64_t{1} << F.scale_log2()) : 1.0L;
  parallel_for(freqs.size(), [&](std::size_t fi) {
    const long double y = static_cast<long double>(freqs[fi]);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < F.size(); ++i) {
      const long double x = exact
                                ? static_cast<long double>(F.scaled()[i]) * inv_scale
                                : static_cast<long double>(F.reals()[i]);
      std::complex<double> ph = detail::unit_phase(x * y);
      if (F.weighted()) ph *= F.weight(i);
      s += ph;
    }
    g.intensity[fi] = std::norm(s) / g.mass;
  });
  return g;
}

inline SpectrumGrid patterson_direct(const PointSet& F, double y,
                                     const Budget& budget = Budget::standard()) {
  return patterson_direct(F, std::vector<double>{y}, budget);
}

// ---------------------------------------------------------------------------
// FFT evaluation on the torus grid y = j/M.  Integer coordinates only: the
// identity e^{2 pi i x j/M} = e^{2 pi i (x mod M) j/M} makes the mod-M
// binning exact for every frequency on the grid.

inline SpectrumGrid patterson_fft(const PointSet& F, std::int64_t m,
                                  const Budget& budget = Budget::standard()) {
  if (!detail::is_pow2(m))
    throw SpecError("FFT grid size M must be a power of two, got " + std::to_string(m));
  if (m > budget.max_fft)
    throw BudgetError("FFT grid size " + std::to_string(m) + " exceeds max_fft=" +
                      std::to_string(budget.max_fft));
  if (F.mode() == CoordMode::Real)
    throw SpecError("FFT spectrum path expects exact coordinates; use patterson_direct");
  if (F.scale_log2() != 0)
    throw SpecError("FFT spectrum path expects integer coordinates (scale 1)");
  SpectrumGrid g;
  g.freqs = torus_freqs(m);
  g.card = static_cast<std::int64_t>(F.size());
  g.mass = F.weighted() ? F.total_abs_weight() : static_cast<double>(F.size());
  if (F.empty()) {
    g.intensity.assign(static_cast<std::size_t>(m), 0.0);
    g.mass = 0.0;
    return g;
  }
  if (!(g.mass > 0)) throw SpecError("spectrum of a sample with zero total mass");
  std::vector<std::complex<double>> bins(static_cast<std::size_t>(m), {0.0, 0.0});
  for (std::size_t i = 0; i < F.size(); ++i) {
    const std::int64_t r = floor_div(F.scaled()[i], m) * m;
    const std::size_t slot = static_cast<std::size_t>(F.scaled()[i] - r);
    bins[slot] += F.weighted() ? F.weight(i) : 1.0;
  }
  detail::fft_radix2(bins);
  g.intensity.resize(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < bins.size(); ++j)
    g.intensity[j] = std::norm(bins[j]) / g.mass;
  return g;
}

// ---------------------------------------------------------------------------
// Fourier transform of a symmetric comb:
//   gamma_hat(y) = w(0) + 2 sum_{t>0} w(t) cos(2 pi t y),
// optionally Fejer-damped by (1 - |t|/T).  Raw truncations may legitimately
// go negative (Dirichlet kernel); callers assert nonnegativity only where
// the comb is a complete autocorrelation.

inline SpectrumGrid comb_fourier(const DiracComb& comb, const std::vector<double>& freqs,
                                 bool fejer = false, double fejer_T = 0.0,
                                 const Budget& budget = Budget::standard()) {
  if (fejer && !(fejer_T > 0)) throw SpecError("Fejer damping needs T > 0");
  // reflection symmetry check
  for (const auto& [k, w] : comb.weights) {
    if (k <= 0) continue;
    auto it = comb.weights.find(-k);
    const double wm = it == comb.weights.end() ? 0.0 : it->second;
    if (std::fabs(w - wm) > 1e-12 * std::max(1.0, std::fabs(w)))
      throw SpecError("comb is not reflection-symmetric at displacement " +
                      comb.displacement_string(k));
  }
  const std::int64_t ops = static_cast<std::int64_t>(comb.weights.size()) *
                           static_cast<std::int64_t>(freqs.size());
  if (ops > budget.max_pairs)
    throw BudgetError("comb transform needs " + std::to_string(ops) +
                      " cosine evaluations, exceeding max_pairs=" +
                      std::to_string(budget.max_pairs));
  // positive-displacement entries once, as (t, weight, damping)
  std::vector<std::pair<double, double>> pos;
  pos.reserve(comb.weights.size() / 2 + 1);
  double w0 = comb.entry(0);
  for (const auto& [k, w] : comb.weights) {
    if (k <= 0) continue;
    const double t = comb.displacement_value(k);
    double g = 1.0;
    if (fejer) {
      if (std::fabs(t) >= fejer_T) continue;
      g = 1.0 - std::fabs(t) / fejer_T;
    }
    pos.emplace_back(t, w * g);
  }
  SpectrumGrid g;
  g.freqs = freqs;
  g.intensity.assign(freqs.size(), 0.0);
  g.card = comb.card;
  g.mass = static_cast<double>(comb.card);
  parallel_for(freqs.size(), [&](std::size_t fi) {
    const long double y = static_cast<long double>(freqs[fi]);
    double acc = w0;
    for (const auto& [t, w] : pos) {
      const std::complex<double> ph = detail::unit_phase(static_cast<long double>(t) * y);
      acc += 2.0 * w * ph.real();
    }
    g.intensity[fi] = acc;
  });
  return g;
}

// Clamp tiny negative intensities (|v| <= eps * max(1, max intensity)) to 0,
// returning how many entries were touched; larger negatives are left alone
// so callers can see them.
inline std::int64_t clamp_nonnegative(SpectrumGrid& g, double eps = kEpsPositiveDefinite) {
  const double tol = eps * std::max(1.0, g.max_intensity());
  std::int64_t n = 0;
  for (double& v : g.intensity)
    if (v < 0 && -v <= tol) {
      v = 0.0;
      ++n;
    }
  return n;
}

// ---------------------------------------------------------------------------
// Bragg scan: the normalized per-point intensity I_F(y)/card along a window
// family.  Heuristic verdict: Bragg-like when the per-point values over the
// second half of the scan never drop more than 5% step to step and the final
// value clears theta.  A finite-size probe, not a proof.

struct BraggRow {
  std::int64_t n = 0;
  std::int64_t card = 0;
  double intensity = 0.0; // I_F(y)
  double per_point = 0.0; // I_F(y) / card
};

struct BraggScanResult {
  double y = 0.0;
  double theta = 0.01;
  std::vector<BraggRow> rows;
  bool bragg_like = false;
  std::string note;
};

inline constexpr double kBraggTheta = 0.01;
inline constexpr double kBraggStepTolerance = 0.05;

namespace detail {

inline void bragg_verdict(BraggScanResult& out) {
  const std::size_t half = out.rows.size() / 2;
  bool monotone = true;
  for (std::size_t i = half; i + 1 < out.rows.size(); ++i)
    if (out.rows[i + 1].per_point <
        out.rows[i].per_point * (1.0 - kBraggStepTolerance)) {
      monotone = false;
      break;
    }
  const double final_pp = out.rows.back().per_point;
  out.bragg_like = monotone && final_pp >= out.theta;
  if (out.bragg_like)
    out.note = "per-point intensity holds up over the scan tail and ends at " +
               fmt_g17(final_pp) + " >= theta";
  else if (!monotone)
    out.note = "per-point intensity decays along the scan tail";
  else
    out.note = "per-point intensity ends at " + fmt_g17(final_pp) + " < theta";
}

} // namespace detail

// Each window's sample is generated once and probed at all candidate
// frequencies; one verdict per frequency.
inline std::vector<BraggScanResult>
bragg_scan(const GeneratorSpec& spec, const WindowFamily& fam,
           const std::vector<std::int64_t>& n_list, const std::vector<double>& ys,
           const Budget& budget = Budget::standard()) {
  if (n_list.size() < 2) throw SpecError("bragg scan needs at least two windows");
  if (ys.empty()) throw SpecError("bragg scan needs at least one candidate frequency");
  std::vector<BraggScanResult> scans(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    scans[k].y = ys[k];
    scans[k].theta = kBraggTheta;
  }
  for (std::int64_t n : n_list) {
    const Interval w = fam.window(n);
    const PointSet F = generate(spec, w, budget);
    BraggRow row;
    row.n = n;
    row.card = static_cast<std::int64_t>(F.size());
    if (row.card > 0) {
      const SpectrumGrid g = patterson_direct(F, ys, budget);
      for (std::size_t k = 0; k < ys.size(); ++k) {
        row.intensity = g.intensity[k];
        row.per_point = g.per_point(k);
        scans[k].rows.push_back(row);
      }
    } else {
      row.intensity = 0.0;
      row.per_point = 0.0;
      for (auto& s : scans) s.rows.push_back(row);
    }
  }
  for (auto& s : scans) detail::bragg_verdict(s);
  return scans;
}

inline BraggScanResult bragg_scan(const GeneratorSpec& spec, const WindowFamily& fam,
                                  const std::vector<std::int64_t>& n_list, double y,
                                  const Budget& budget = Budget::standard()) {
  return bragg_scan(spec, fam, n_list, std::vector<double>{y}, budget).front();
}

} // namespace diffract
