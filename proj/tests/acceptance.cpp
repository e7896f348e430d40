// Acceptance gate: each criterion prints exactly one line
//   criterion N: PASS - detail
//   criterion N: FAIL - detail
// and the process exits nonzero if any requested criterion fails.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "diffract/diffract.hpp"

namespace {

using namespace diffract;

// Pinned tolerances and bands.
constexpr double kSpectrumRelTol = 1e-9;   // criterion 3
constexpr double kEtaTwoLo = 0.09;         // criterion 5
constexpr double kEtaTwoHi = 0.12;         // criterion 5
constexpr std::int64_t kSparseCardFloor = 30;   // criterion 7
constexpr double kShiftUnionSlack = 0.06;  // criterion 8
constexpr double kEmbedDensityCap = 1e-4;  // criterion 9
constexpr double kEmbedEtaFloor = 0.9;     // criterion 9
constexpr double kTwinLo = 0.50;           // criterion 10
constexpr double kTwinHi = 0.51;           // criterion 10
constexpr double kSubsetRatioFloor = 0.99; // criterion 11
constexpr double kSubsetEtaSlack = 0.02;   // criterion 11
constexpr double kWeightedZeroCap = 0.12;  // criterion 15

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

PointSet random_integer_set(std::mt19937_64& rng, std::size_t max_card,
                            std::int64_t coord_span) {
  std::uniform_int_distribution<std::int64_t> coord(-coord_span, coord_span);
  const std::size_t n = 2 + static_cast<std::size_t>(rng() % (max_card - 1));
  std::vector<std::int64_t> pts(n);
  for (auto& p : pts) p = coord(rng);
  return PointSet::from_integers(std::move(pts));
}

// 1. The pair-difference comb equals an all-pairs brute-force histogram,
//    entrywise exactly, on 200 random integer sets of up to 500 points.
Outcome criterion_1() {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const PointSet F = random_integer_set(rng, 500, 2000);
    const DiracComb comb = finite_autocorr(F, Normalization::Counting);
    const auto& xs = F.scaled();
    std::unordered_map<std::int64_t, std::int64_t> oracle;
    oracle.reserve(xs.size() * xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) ++oracle[xs[j] - xs[i]];
    if (comb.counts.size() != oracle.size())
      return {false, "support size mismatch on set " + std::to_string(rep)};
    for (const auto& [d, c] : comb.counts) {
      auto it = oracle.find(d);
      if (it == oracle.end() || it->second != c)
        return {false, "count mismatch at displacement " + std::to_string(d)};
    }
    if (!comb.denom_int || *comb.denom_int != static_cast<std::int64_t>(F.size()))
      return {false, "counting denominator is not the cardinality"};
  }
  return {true, "200 random sets up to 500 points match the all-pairs histogram exactly"};
}

// 2. Density comb = (card/width) * counting comb, exactly in rational arithmetic,
//    on 100 random cases.
Outcome criterion_2() {
  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t width = 50 + static_cast<std::int64_t>(rng() % 4951);
    std::uniform_int_distribution<std::int64_t> coord(0, width);
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 299);
    std::vector<std::int64_t> pts(n);
    for (auto& p : pts) p = coord(rng);
    const PointSet F = PointSet::from_integers(std::move(pts));
    const std::int64_t card = static_cast<std::int64_t>(F.size());
    const DiracComb count = finite_autocorr(F, Normalization::Counting);
    const DiracComb dens =
        finite_autocorr(F, Normalization::Density, static_cast<double>(width));
    if (!dens.denom_int || *dens.denom_int != width)
      return {false, "density denominator is not the window width"};
    if (count.counts != dens.counts) return {false, "support mismatch between modes"};
    const Rational scale(card, width);
    for (const auto& [d, c] : count.counts) {
      (void)c;
      const auto a = count.entry_exact(d);
      const auto b = dens.entry_exact(d);
      if (!a || !b || !(*b == *a * scale))
        return {false, "mass-ratio identity fails at displacement " + std::to_string(d)};
    }
  }
  return {true, "density = (card/width) * counting holds exactly on 100 random cases"};
}

// 3. comb_fourier(finite_autocorr(F)) matches patterson_direct within 1e-9
//    relative at 64 random frequencies for 50 random sets up to 2048 points,
//    and the FFT path matches the direct path within 1e-9.
Outcome criterion_3() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> freq(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const PointSet F = random_integer_set(rng, 2048, 4000);
    std::vector<double> ys(64);
    for (auto& y : ys) y = freq(rng);
    const DiracComb comb = finite_autocorr(F, Normalization::Counting);
    const SpectrumGrid via_comb = comb_fourier(comb, ys);
    const SpectrumGrid direct = patterson_direct(F, ys);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double dev = std::fabs(via_comb.intensity[i] - direct.intensity[i]) /
                         std::max({1.0, std::fabs(direct.intensity[i])});
      worst = std::max(worst, dev);
      if (!rel_close(via_comb.intensity[i], direct.intensity[i], kSpectrumRelTol))
        return {false, "comb transform deviates by " + fmt_g17(dev) + " at y = " +
                           fmt_g17(ys[i])};
    }
    const std::int64_t m = 1024;
    const SpectrumGrid fast = patterson_fft(F, m);
    const SpectrumGrid slow = patterson_direct(F, torus_freqs(m));
    for (std::size_t j = 0; j < fast.intensity.size(); ++j) {
      const double dev = std::fabs(fast.intensity[j] - slow.intensity[j]) /
                         std::max({1.0, std::fabs(slow.intensity[j])});
      worst = std::max(worst, dev);
      if (!rel_close(fast.intensity[j], slow.intensity[j], kSpectrumRelTol))
        return {false, "FFT path deviates by " + fmt_g17(dev) + " at grid bin " +
                           std::to_string(j)};
    }
  }
  return {true, "50 sets, 64 frequencies each plus 1024-bin grids; max relative "
                "deviation " +
                    fmt_g17(worst)};
}

// 4. Every nonempty sample comb has entry(0) = 1 exactly, across the
//    generator-by-window test matrix (weighted combs are a separate statement;
//    see criterion 15).
Outcome criterion_4() {
  const std::vector<std::string> specs{
      "integers",
      "arithmetic:step=3",
      "primes",
      "primes:signed=false",
      "prime-powers",
      "twin:d=2",
      "factorials",
      "fibonacci",
      "geometric:a=2",
      "shift-union:base=(factorials),k=1",
      "embed-factorial:base=(integers),max=8",
      "thue-morse",
      "rudin-shapiro",
      "dyadic",
  };
  const std::vector<std::pair<std::string, std::int64_t>> windows{
      {"symmetric", 300},
      {"ratio:L=2", 200},
      {"anchored:d=3", 240},
      {"custom:a=0-2*n,b=n", 150},
      {"factorial-gap", 4},
  };
  int checked = 0;
  std::set<std::string> covered;
  for (const auto& spec_text : specs) {
    const GeneratorSpec spec = GeneratorSpec::parse(spec_text);
    for (const auto& [fam_text, n] : windows) {
      const WindowFamily fam = parse_window(fam_text);
      const PointSet F = generate(spec, fam.window(n), Budget::standard());
      if (F.empty()) continue;
      const DiracComb comb = finite_autocorr(F, Normalization::Counting);
      const auto g0 = comb.entry_exact(0);
      if (!g0 || !(*g0 == Rational(1, 1)))
        return {false, "entry(0) != 1 for " + spec_text + " on " + fam_text};
      ++checked;
      covered.insert(spec_text);
    }
  }
  if (covered.size() != specs.size())
    return {false, "a generator produced no nonempty sample in the matrix"};
  if (checked < 40)
    return {false, "matrix too sparse: only " + std::to_string(checked) + " samples"};
  return {true, "entry(0) = 1 exactly on " + std::to_string(checked) +
                    " nonempty samples (14 generators x 5 window families)"};
}

// 5. Signed primes over symmetric windows n in {1e4, 1e5, 1e6}: for every
//    1 <= |t| <= 50 the counting eta obeys (2 pi_|t|(n) + |t|)/pi(n) exactly,
//    and eta(2) at n = 1e6 lies in [0.09, 0.12].
Outcome criterion_5() {
  const GeneratorSpec spec = GeneratorSpec::parse("primes");
  const WindowFamily fam = symmetric_family();
  const Budget budget = Budget::standard();
  int checks = 0;
  double eta2_at_1e6 = -1.0;
  for (std::int64_t n : {10000, 100000, 1000000}) {
    const PointSet F = generate(spec, fam.window(n), budget);
    const std::int64_t card = static_cast<std::int64_t>(F.size());
    const DiracComb comb =
        finite_autocorr_truncated(F, 50, Normalization::Counting, 0.0, budget);
    for (std::int64_t t = 1; t <= 50; ++t) {
      const auto cnt_it = comb.counts.find(t);
      const std::int64_t cnt = cnt_it == comb.counts.end() ? 0 : cnt_it->second;
      const Rational eta(cnt, card);
      const auto bound = primes::eta_bound(n, t, budget);
      if (!(eta <= bound.exact))
        return {false, "eta(" + std::to_string(t) + ") exceeds the bound at n = " +
                           std::to_string(n)};
      ++checks;
      if (n == 1000000 && t == 2)
        eta2_at_1e6 = static_cast<double>(cnt) / static_cast<double>(card);
    }
  }
  if (!(kEtaTwoLo <= eta2_at_1e6 && eta2_at_1e6 <= kEtaTwoHi))
    return {false, "eta(2) at n = 1e6 is " + fmt_g17(eta2_at_1e6) +
                       ", outside [0.09, 0.12]"};
  return {true, std::to_string(checks) + " exact bound checks hold; eta(2) at n = 1e6 "
                "is " +
                    fmt_g17(eta2_at_1e6)};
}

// 6. card(P intersect [n!, n!+n]) <= 1 for 3 <= n <= 18, exactly.
Outcome criterion_6() {
  std::string hits;
  for (std::int64_t n = 3; n <= 18; ++n) {
    const std::int64_t lo = checked_factorial(n);
    const std::int64_t hi = checked_add(lo, n, "factorial window");
    const auto ps = primes::primes_in(lo, hi, Budget::standard());
    if (ps.size() > 1)
      return {false, "window [" + std::to_string(n) + "!, " + std::to_string(n) +
                         "!+" + std::to_string(n) + "] holds " +
                         std::to_string(ps.size()) + " primes"};
    if (ps.size() == 1) {
      if (!hits.empty()) hits += ", ";
      hits += std::to_string(n);
    }
  }
  return {true, "at most one prime in every [n!, n!+n], 3 <= n <= 18 (hit at n = " +
                    hits + ")"};
}

// 7. Sparse sets on [-1e12, 1e12]: factorials, fibonacci, geometric(a = 2);
//    every off-zero comb entry <= 2/card and card >= 30.
Outcome criterion_7() {
  const WindowFamily fam = symmetric_family();
  const Interval w = fam.window(1000000000000);
  bool pass = true;
  std::string detail;
  for (const char* name : {"factorials", "fibonacci", "geometric:a=2"}) {
    const GeneratorSpec spec = GeneratorSpec::parse(name);
    const PointSet F = generate(spec, w, Budget::standard());
    const std::int64_t card = static_cast<std::int64_t>(F.size());
    const DiracComb comb = finite_autocorr(F, Normalization::Counting);
    std::int64_t worst = 0;
    for (const auto& [d, c] : comb.counts)
      if (d != 0) worst = std::max(worst, c);
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " card " + std::to_string(card) + ", max off-zero "
              "count " +
              std::to_string(worst);
    if (worst > 2) {
      pass = false;
      detail += " (> 2)";
    }
    if (card < kSparseCardFloor) {
      pass = false;
      detail += " (< 30)";
    }
  }
  return {pass, detail};
}

// 8. Factorials union (1 + factorials): at windows where card >= 25,
//    eta(1) is within 0.06 of 1/2 and eta(0) = 1 exactly.
Outcome criterion_8() {
  const GeneratorSpec spec = GeneratorSpec::parse("shift-union:base=(factorials),k=1");
  const WindowFamily fam = symmetric_family();
  const Budget budget = Budget::standard();
  int qualifying = 0;
  std::string detail;
  for (std::int64_t n : {std::int64_t{100000000}, std::int64_t{1000000000},
                         std::int64_t{10000000000}}) {
    const PointSet F = generate(spec, fam.window(n), budget);
    const std::int64_t card = static_cast<std::int64_t>(F.size());
    if (card < 25) continue;
    ++qualifying;
    const DiracComb comb =
        finite_autocorr_truncated(F, 1, Normalization::Counting, 0.0, budget);
    const auto g0 = comb.entry_exact(0);
    if (!g0 || !(*g0 == Rational(1, 1)))
      return {false, "eta(0) != 1 at n = " + std::to_string(n)};
    const double eta1 = comb.entry_at(1);
    if (std::fabs(eta1 - 0.5) > kShiftUnionSlack)
      return {false, "eta(1) = " + fmt_g17(eta1) + " strays more than 0.06 from 1/2"};
    detail = "card " + std::to_string(card) + ", eta(1) = " + fmt_g17(eta1) +
             ", eta(0) = 1 exactly";
  }
  if (qualifying == 0) return {false, "no window reached card >= 25"};
  return {true, detail};
}

// 9. Integer blocks embedded at factorials up to 10!, window [-1e7, 1e7]:
//    density <= 1e-4, eta(1) >= 0.9, and eta(1) trends up across sub-windows.
Outcome criterion_9() {
  const GeneratorSpec spec =
      GeneratorSpec::parse("embed-factorial:base=(integers),max=10");
  const WindowFamily fam = symmetric_family();
  const Budget budget = Budget::standard();
  const std::vector<std::int64_t> n_list{10000, 100000, 1000000, 10000000};
  const auto dens = besicovitch_density(spec, fam, n_list, budget);
  if (dens.back().density > kEmbedDensityCap)
    return {false, "density " + fmt_g17(dens.back().density) + " exceeds 1e-4"};
  std::vector<double> etas;
  for (std::int64_t n : n_list) {
    const PointSet F = generate(spec, fam.window(n), budget);
    const DiracComb comb =
        finite_autocorr_truncated(F, 1, Normalization::Counting, 0.0, budget);
    etas.push_back(comb.entry_at(1));
  }
  for (std::size_t i = 1; i < etas.size(); ++i)
    if (!(etas[i] > etas[i - 1]))
      return {false, "eta(1) fails to increase from n = " +
                         std::to_string(n_list[i - 1]) + " to n = " +
                         std::to_string(n_list[i])};
  if (etas.back() < kEmbedEtaFloor)
    return {false, "eta(1) = " + fmt_g17(etas.back()) + " below 0.9"};
  return {true, "density " + fmt_g17(dens.back().density) + ", eta(1) rises " +
                    fmt_g17(etas.front()) + " -> " + fmt_g17(etas.back())};
}

// 10. Twin primes (d = 2) on symmetric windows: entry(2) >= 1/2 exactly at
//     every tested n >= 100, and entry(2) at n = 1e6 lies in [0.5, 0.51].
Outcome criterion_10() {
  const GeneratorSpec spec = GeneratorSpec::parse("twin:d=2");
  const WindowFamily fam = symmetric_family();
  const Budget budget = Budget::standard();
  double at_1e6 = -1.0;
  for (std::int64_t n : {100, 1000, 10000, 100000, 1000000}) {
    const PointSet F = generate(spec, fam.window(n), budget);
    const std::int64_t card = static_cast<std::int64_t>(F.size());
    const DiracComb comb =
        finite_autocorr_truncated(F, 2, Normalization::Counting, 0.0, budget);
    const auto e2 = comb.entry_exact(2);
    if (!e2) return {false, "no exact entry at displacement 2, n = " + std::to_string(n)};
    if (*e2 < Rational(1, 2))
      return {false, "entry(2) < 1/2 at n = " + std::to_string(n)};
    if (n == 1000000) {
      const auto it = comb.counts.find(2);
      at_1e6 = static_cast<double>(it == comb.counts.end() ? 0 : it->second) /
               static_cast<double>(card);
    }
  }
  if (!(kTwinLo <= at_1e6 && at_1e6 <= kTwinHi))
    return {false, "entry(2) at n = 1e6 is " + fmt_g17(at_1e6) +
                       ", outside [0.5, 0.51]"};
  return {true, "entry(2) >= 1/2 exactly at n = 1e2..1e6; value at 1e6 is " +
                    fmt_g17(at_1e6)};
}

// 11. Primes inside prime powers at n = 1e6: cardinality ratio >= 0.99 and
//     sup over |t| <= 20 of the eta difference <= 0.02.
Outcome criterion_11() {
  const GeneratorSpec sub = GeneratorSpec::parse("primes");
  const GeneratorSpec super = GeneratorSpec::parse("prime-powers");
  const auto rows = subset_stability_check(sub, super, symmetric_family(),
                                           {1000000}, 20, Budget::standard());
  const auto& r = rows.front();
  if (r.card_ratio < kSubsetRatioFloor)
    return {false, "card ratio " + fmt_g17(r.card_ratio) + " below 0.99"};
  if (r.sup_eta_diff > kSubsetEtaSlack)
    return {false, "sup |eta difference| " + fmt_g17(r.sup_eta_diff) + " above 0.02"};
  return {true, "card ratio " + fmt_g17(r.card_ratio) + ", sup |eta difference| " +
                    fmt_g17(r.sup_eta_diff)};
}

// 12. Dyadic divergence witness: the tent-kernel value meets the (1/8) sqrt(n)
//     bound for n = 4^3 .. 4^7, by exact integer comparison.
Outcome criterion_12() {
  const auto rows = divergence_witness(7, Budget::standard());
  std::string last;
  for (const auto& row : rows) {
    if (row.m < 3) continue;
    const std::int64_t expect_n = std::int64_t{1} << (2 * row.m);
    if (row.n != expect_n)
      return {false, "row m = " + std::to_string(row.m) + " has n = " +
                         std::to_string(row.n)};
    if (!row.meets_bound || !(row.value >= row.bound))
      return {false, "value " + fmt_g17(row.value) + " misses bound " +
                         fmt_g17(row.bound) + " at n = " + std::to_string(row.n)};
    last = "value " + fmt_g17(row.value) + " >= bound " + fmt_g17(row.bound) +
           " at n = 4^7";
  }
  return {true, "exact bound holds for n = 4^3 .. 4^7; " + last};
}

// 13. The 2D comb of F x {0} equals the 1D comb tensored with a point mass at
//     zero, exactly, for 20 random sets up to 200 points.
Outcome criterion_13() {
  std::mt19937_64 rng(1313);
  for (int rep = 0; rep < 20; ++rep) {
    const PointSet F = random_integer_set(rng, 200, 100000);
    const DiracComb comb = finite_autocorr(F, Normalization::Counting);
    const Comb2D plane = product_embed_autocorr(F);
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> expect;
    for (const auto& [d, c] : comb.counts) expect[{d, 0}] = c;
    if (plane.counts != expect) return {false, "2D support differs from the tensor"};
    if (plane.denom != comb.denom) return {false, "normalizations differ"};
  }
  return {true, "20 random sets embed with exactly the tensored comb"};
}

// 14. Brun-Titchmarsh: pi(m+n) - pi(m) <= 2 pi(n), exhaustively for
//     m <= 200, 2 <= n <= 200, plus 1e4 random pairs in [2, 1e4].
Outcome criterion_14() {
  const Budget budget = Budget::standard();
  int checks = 0;
  for (std::int64_t m = 1; m <= 200; ++m)
    for (std::int64_t n = 2; n <= 200; ++n) {
      const auto c = primes::brun_titchmarsh_check(m, n, budget);
      if (c.asserted && !c.holds)
        return {false, "violated at m = " + std::to_string(m) + ", n = " +
                           std::to_string(n)};
      ++checks;
    }
  std::mt19937_64 rng(1414);
  std::uniform_int_distribution<std::int64_t> pick(2, 10000);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::int64_t m = pick(rng), n = pick(rng);
    const auto c = primes::brun_titchmarsh_check(m, n, budget);
    if (!c.holds)
      return {false, "violated at random m = " + std::to_string(m) + ", n = " +
                         std::to_string(n)};
    ++checks;
  }
  return {true, std::to_string(checks) + " checks hold (exhaustive 200x199 grid "
                "plus 1e4 random pairs)"};
}

// 15. Harmonic weights: gamma({0}) = H2_N / H_N decreases strictly for
//     N = 10 .. 1e6 and ends below 0.12, cross-checked against the library.
Outcome criterion_15() {
  const GeneratorSpec spec = GeneratorSpec::parse("harmonic");
  const Budget budget = Budget::standard();
  long double h = 0.0L, h2 = 0.0L;
  double prev = 0.0, last = 0.0;
  for (std::int64_t k = 1; k <= 1000000; ++k) {
    const long double x = 1.0L / static_cast<long double>(k);
    h += x;
    h2 += x * x;
    const double ratio = static_cast<double>(h2 / h);
    if (k > 10 && !(ratio < prev))
      return {false, "ratio fails to decrease at N = " + std::to_string(k)};
    if (k >= 10) prev = ratio;
    if (k == 10 || k == 100 || k == 10000 || k == 1000000) {
      const PointSet F =
          generate(spec, Interval{1.0, static_cast<double>(k)}, budget);
      const double lib = weighted_autocorr_at_zero(F);
      if (!rel_close(lib, ratio, 1e-12))
        return {false, "library value " + fmt_g17(lib) + " differs from direct "
                       "summation " +
                           fmt_g17(ratio) + " at N = " + std::to_string(k)};
    }
    last = ratio;
  }
  if (!(last < kWeightedZeroCap))
    return {false, "final ratio " + fmt_g17(last) + " not below 0.12"};
  return {true, "ratio decreases strictly from N = 10 and ends at " + fmt_g17(last)};
}

using CriterionFn = Outcome (*)();

constexpr CriterionFn kCriteria[15] = {
    criterion_1,  criterion_2,  criterion_3,  criterion_4,  criterion_5,
    criterion_6,  criterion_7,  criterion_8,  criterion_9,  criterion_10,
    criterion_11, criterion_12, criterion_13, criterion_14, criterion_15,
};

} // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long v = std::strtol(argv[i], &end, 10);
    if (end == argv[i] || *end != '\0' || v < 1 || v > 15) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1..15]\n", argv[0]);
      return 2;
    }
    which.push_back(static_cast<int>(v));
  }
  if (which.empty())
    for (int i = 1; i <= 15; ++i) which.push_back(i);

  bool all_pass = true;
  for (int i : which) {
    Outcome o;
    try {
      o = kCriteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s - %s\n", i, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
