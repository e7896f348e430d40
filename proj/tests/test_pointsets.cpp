// Generator grammar, point-set containers and every generator kind, checked
// against brute-force enumeration oracles.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diffract/pointsets.hpp"

using namespace diffract;

namespace {

std::vector<std::int64_t> ints(const PointSet& s) {
  REQUIRE(s.mode() == CoordMode::Integer);
  return s.scaled();
}

std::vector<double> coords(const PointSet& s) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.coord_double(i));
  return out;
}

PointSet gen(const std::string& spec, double lo, double hi) {
  return generate(GeneratorSpec::parse(spec), Interval{lo, hi});
}

bool trial_prime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

// substitution expansion oracle: iterate the morphism from the seed letter
std::string expand(const std::string& seed,
                   const std::vector<std::pair<char, std::string>>& rules, int iters) {
  std::string w = seed;
  for (int i = 0; i < iters; ++i) {
    std::string next;
    for (char c : w)
      for (const auto& [from, to] : rules)
        if (c == from) next += to;
    w = std::move(next);
  }
  return w;
}

} // namespace

TEST_CASE("generator grammar round-trips through parse and to_string", "[pointsets]") {
  for (const char* text :
       {"integers", "arithmetic:step=3", "primes", "primes:signed=false",
        "prime-powers", "twin:d=2", "twin:d=6,signed=false", "factorials", "fibonacci",
        "geometric:a=2", "shift-union:base=(factorials),k=1",
        "embed-factorial:base=(integers),max=10", "thue-morse:letter=a",
        "rudin-shapiro:letter=b", "dyadic", "dyadic:m=3", "harmonic"}) {
    const GeneratorSpec s = GeneratorSpec::parse(text);
    REQUIRE(s.to_string() == text);
    // reparse is stable
    REQUIRE(GeneratorSpec::parse(s.to_string()).to_string() == s.to_string());
  }
  // nested specs keep their parameter commas
  const auto nested =
      GeneratorSpec::parse("shift-union:base=(twin:d=2,signed=false),k=4");
  REQUIRE(nested.base->kind == GeneratorSpec::Kind::TwinPrimes);
  REQUIRE(nested.base->d == 2);
  REQUIRE(!nested.base->signed_points);
  REQUIRE(nested.shift == 4);
}

TEST_CASE("generator grammar rejects malformed specs", "[pointsets]") {
  REQUIRE_THROWS_AS(GeneratorSpec::parse("lattice"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("arithmetic:step=0"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("twin:d=0"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("geometric:a=1"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("geometric:a=0.5"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("shift-union:k=1"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("shift-union:base=(integers),k=0"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("embed-factorial:base=(integers),max=2"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("embed-factorial:base=(integers),max=21"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("thue-morse:letter=c"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("thue-morse:letter=ab"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("dyadic:m=17"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("primes:bogus=1"), SpecError);
  REQUIRE_THROWS_AS(GeneratorSpec::parse("primes:signed"), SpecError);
}

TEST_CASE("point sets sort, dedup and validate their inputs", "[pointsets]") {
  const PointSet s = PointSet::from_integers({5, 1, 3, 1, 5});
  REQUIRE(ints(s) == std::vector<std::int64_t>{1, 3, 5});
  REQUIRE(s.size() == 3);
  REQUIRE(!s.weighted());
  REQUIRE(s.weight(0) == 1.0);
  REQUIRE(s.total_abs_weight() == 3.0);

  // weighted sets keep weights aligned under sorting and refuse duplicates
  const PointSet w = PointSet::from_integers({3, 1}, {0.25, 0.75});
  REQUIRE(ints(w) == std::vector<std::int64_t>{1, 3});
  REQUIRE(w.weights() == std::vector<double>{0.75, 0.25});
  REQUIRE(w.total_abs_weight() == 1.0);
  REQUIRE_THROWS_AS(PointSet::from_integers({1, 1}, {0.5, 0.5}), SpecError);
  REQUIRE_THROWS_AS(PointSet::from_integers({1, 2}, {0.5}), SpecError);

  const PointSet r = PointSet::from_reals({2.5, -1.5});
  REQUIRE(r.mode() == CoordMode::Real);
  REQUIRE(r.reals() == std::vector<double>{-1.5, 2.5});
  REQUIRE_THROWS_AS(PointSet::from_reals({1.0, 1.0}), SpecError);

  REQUIRE_THROWS_AS(PointSet::from_dyadic({1}, 41), SpecError);
}

TEST_CASE("restrict keeps inclusive endpoints, rescale keeps values", "[pointsets]") {
  const PointSet s = PointSet::from_integers({-3, -1, 0, 2, 5});
  REQUIRE(ints(s.restrict(Interval{-1.0, 2.0})) == std::vector<std::int64_t>{-1, 0, 2});
  REQUIRE(ints(s.restrict(Interval{-3.0, 5.0})) == ints(s));
  REQUIRE(s.restrict(Interval{6.0, 7.0}).empty());

  const PointSet d = PointSet::from_dyadic({7, -7}, 1); // {-3.5, 3.5}
  REQUIRE(d.mode() == CoordMode::Dyadic);
  REQUIRE(d.coord_string(0) == "-3.5");
  REQUIRE(d.coord_string(1) == "3.5");
  const PointSet d3 = d.rescaled(3);
  REQUIRE(d3.scaled() == std::vector<std::int64_t>{-28, 28});
  REQUIRE(coords(d3) == coords(d));
  REQUIRE_THROWS_AS(d.rescaled(0), SpecError); // would lose precision
}

TEST_CASE("integer and arithmetic lattices enumerate exactly", "[pointsets]") {
  REQUIRE(ints(gen("integers", 0, 10)) ==
          std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  REQUIRE(ints(gen("integers", -2.5, 2.5)) == std::vector<std::int64_t>{-2, -1, 0, 1, 2});
  REQUIRE(ints(gen("arithmetic:step=2", -5, 5)) ==
          std::vector<std::int64_t>{-4, -2, 0, 2, 4});
  REQUIRE(ints(gen("arithmetic:step=3", 1, 10)) == std::vector<std::int64_t>{3, 6, 9});
  REQUIRE(gen("integers", 0.2, 0.8).empty());

  // oracle: all multiples of step inside the window
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ends(-300.0, 300.0);
  for (int rep = 0; rep < 200; ++rep) {
    double a = ends(rng), b = ends(rng);
    if (a > b) std::swap(a, b);
    const std::int64_t step = 1 + static_cast<std::int64_t>(rng() % 7);
    std::vector<std::int64_t> expect;
    for (std::int64_t x = -400; x <= 400; ++x)
      if (x % step == 0 && static_cast<double>(x) >= a && static_cast<double>(x) <= b)
        expect.push_back(x);
    REQUIRE(ints(gen("arithmetic:step=" + std::to_string(step), a, b)) == expect);
  }
}

TEST_CASE("prime generators mirror and window correctly", "[pointsets]") {
  REQUIRE(ints(gen("primes", -10, 10)) ==
          std::vector<std::int64_t>{-7, -5, -3, -2, 2, 3, 5, 7});
  REQUIRE(ints(gen("primes:signed=false", -10, 10)) ==
          std::vector<std::int64_t>{2, 3, 5, 7});
  REQUIRE(ints(gen("primes", 0, 10)) == std::vector<std::int64_t>{2, 3, 5, 7});
  REQUIRE(gen("primes", -1.5, 1.5).empty());

  // signed symmetry: P cap [-n, n] is exactly -(P cap [-n, n])
  const auto sym = ints(gen("primes", -500, 500));
  for (std::size_t i = 0; i < sym.size(); ++i)
    REQUIRE(sym[i] == -sym[sym.size() - 1 - i]);

  REQUIRE(ints(gen("twin:d=2", 0, 20)) ==
          std::vector<std::int64_t>{3, 5, 7, 11, 13, 17, 19});
  REQUIRE(ints(gen("twin:d=2", -8, 0)) == std::vector<std::int64_t>{-7, -5, -3});
  REQUIRE(ints(twin_set(2, Interval{0, 20})) ==
          std::vector<std::int64_t>{3, 5, 7, 11, 13, 17, 19});
  REQUIRE(ints(twin_set(1, Interval{0, 10})) == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("prime powers match the brute-force enumeration", "[pointsets]") {
  REQUIRE(ints(gen("prime-powers:signed=false", 0, 20)) ==
          std::vector<std::int64_t>{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19});

  std::vector<std::int64_t> expect;
  const std::int64_t hi = 3000;
  for (std::int64_t p = 2; p <= hi; ++p) {
    if (!trial_prime(p)) continue;
    for (std::int64_t v = p; v <= hi; v *= p) {
      expect.push_back(v);
      if (v > hi / p) break;
    }
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(ints(gen("prime-powers:signed=false", 0, double(hi))) == expect);

  // signed version is the mirror union
  const auto sp = ints(gen("prime-powers", -100, 100));
  for (std::size_t i = 0; i < sp.size(); ++i)
    REQUIRE(sp[i] == -sp[sp.size() - 1 - i]);
}

TEST_CASE("sparse sequence generators list their terms in order", "[pointsets]") {
  REQUIRE(ints(gen("factorials", 0, 30)) == std::vector<std::int64_t>{1, 2, 6, 24});
  REQUIRE(gen("factorials", 0.1, 0.2).empty());
  REQUIRE(ints(gen("factorials", 3, 30)) == std::vector<std::int64_t>{6, 24});
  REQUIRE(gen("factorials", -100, 0).empty());
  // 14! = 87178291200 is the largest factorial below 1e12
  const auto f = ints(gen("factorials", -1e12, 1e12));
  REQUIRE(f.size() == 14);
  REQUIRE(f.front() == 1);
  REQUIRE(f.back() == 87178291200LL);

  REQUIRE(ints(gen("fibonacci", 0, 100)) ==
          std::vector<std::int64_t>{1, 2, 3, 5, 8, 13, 21, 34, 55, 89});
  REQUIRE(ints(gen("fibonacci", 0, 1)) == std::vector<std::int64_t>{1}); // deduped 1, 1

  REQUIRE(ints(gen("geometric:a=2", 1, 100)) ==
          std::vector<std::int64_t>{2, 4, 8, 16, 32, 64});
  REQUIRE(ints(gen("geometric:a=3", 1, 100)) == std::vector<std::int64_t>{3, 9, 27, 81});
  REQUIRE(ints(gen("geometric:a=2", -1e12, 1e12)).size() == 39);

  // non-integer ratio falls back to real coordinates
  const PointSet g = gen("geometric:a=1.5", 1, 10);
  REQUIRE(g.mode() == CoordMode::Real);
  REQUIRE(g.reals() == std::vector<double>{1.5, 2.25, 3.375, 5.0625, 7.59375});

  // gaps of factorial / fibonacci / geometric terms never shrink
  for (const char* spec : {"factorials", "fibonacci", "geometric:a=2"}) {
    const auto v = ints(gen(spec, 0, 1e15));
    for (std::size_t i = 2; i < v.size(); ++i)
      REQUIRE(v[i] - v[i - 1] >= v[i - 1] - v[i - 2]);
  }
}

TEST_CASE("shift union translates and merges the base set", "[pointsets]") {
  REQUIRE(ints(gen("shift-union:base=(factorials),k=1", 0, 30)) ==
          std::vector<std::int64_t>{1, 2, 3, 6, 7, 24, 25});
  // overlapping translates dedup: integers U (integers + 5)
  REQUIRE(ints(gen("shift-union:base=(integers),k=5", 0, 10)) ==
          ints(gen("integers", 0, 10)));
  // negative shift
  REQUIRE(ints(gen("shift-union:base=(factorials),k=-1", 0, 30)) ==
          std::vector<std::int64_t>{0, 1, 2, 5, 6, 23, 24});
  // window edge: shifted copy reaches into the window from outside
  REQUIRE(ints(gen("shift-union:base=(factorials),k=3", 25, 30)) ==
          std::vector<std::int64_t>{27});
}

TEST_CASE("factorial embedding copies windowed blocks around n!", "[pointsets]") {
  REQUIRE(ints(gen("embed-factorial:base=(integers),max=4", 0, 30)) ==
          std::vector<std::int64_t>{3, 4, 5, 6, 7, 8, 9, 20, 21, 22, 23, 24, 25, 26, 27, 28});
  REQUIRE(gen("embed-factorial:base=(integers),max=4", 10, 19).empty());
  // empty base window gives empty blocks
  REQUIRE(gen("embed-factorial:base=(factorials),max=3", 0, 5).empty());

  // blocks stay pairwise disjoint: gap between n! + n and (n+1)! - (n+1)
  for (int n = 3; n < 8; ++n) {
    const std::int64_t fn = checked_factorial(n), fn1 = checked_factorial(n + 1);
    REQUIRE(fn + n < fn1 - (n + 1));
  }
  // block around 3! with a sparse base: factorials cap [-3, 3] = {1, 2}
  REQUIRE(ints(gen("embed-factorial:base=(factorials),max=3", 0, 10)) ==
          std::vector<std::int64_t>{7, 8});
}

TEST_CASE("substitution generators agree with the expansion oracle", "[pointsets]") {
  REQUIRE(ints(gen("thue-morse:letter=a", 0, 7)) == std::vector<std::int64_t>{0, 3, 5, 6});
  REQUIRE(ints(gen("thue-morse:letter=b", 0, 7)) == std::vector<std::int64_t>{1, 2, 4, 7});
  REQUIRE(ints(gen("thue-morse:letter=a", 0, 0)) == std::vector<std::int64_t>{0});
  REQUIRE(ints(gen("rudin-shapiro:letter=a", 0, 7)) ==
          std::vector<std::int64_t>{0, 1, 2, 4, 5, 7});

  // Thue-Morse fixed point from a -> ab, b -> ba
  const std::string tm = expand("a", {{'a', "ab"}, {'b', "ba"}}, 10); // 1024 symbols
  std::vector<std::int64_t> tm_a;
  for (std::size_t i = 0; i < tm.size(); ++i)
    if (tm[i] == 'a') tm_a.push_back(static_cast<std::int64_t>(i));
  REQUIRE(ints(gen("thue-morse:letter=a", 0, 1023)) == tm_a);

  // Rudin-Shapiro from a -> ab, b -> ac, c -> db, d -> dc; a, b carry +1
  const std::string rs =
      expand("a", {{'a', "ab"}, {'b', "ac"}, {'c', "db"}, {'d', "dc"}}, 10);
  std::vector<std::int64_t> rs_plus;
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (rs[i] == 'a' || rs[i] == 'b') rs_plus.push_back(static_cast<std::int64_t>(i));
  REQUIRE(ints(gen("rudin-shapiro:letter=a", 0, 1023)) == rs_plus);

  // complementary letters partition the prefix
  const auto a_pos = ints(gen("rudin-shapiro:letter=a", 0, 255));
  const auto b_pos = ints(gen("rudin-shapiro:letter=b", 0, 255));
  REQUIRE(a_pos.size() + b_pos.size() == 256);

  // standalone prefix helper agrees with windowed generation
  REQUIRE(substitution_positions(SubstSystem::ThueMorse, 'a', 8) ==
          std::vector<std::int64_t>{0, 3, 5, 6});
  REQUIRE(substitution_positions(SubstSystem::ThueMorse, 'a', 1) ==
          std::vector<std::int64_t>{0});
  REQUIRE(substitution_positions(SubstSystem::ThueMorse, 'a', 0).empty());
}

TEST_CASE("dyadic pathological blocks sit left of powers of four", "[pointsets]") {
  const PointSet l1 = gen("dyadic:m=1", 0, 4);
  REQUIRE(l1.size() == 2);
  REQUIRE(l1.coord_string(0) == "3.5");
  REQUIRE(l1.coord_string(1) == "3.75");
  REQUIRE(gen("dyadic:m=1", 0, 1).empty());
  REQUIRE(gen("dyadic", 0, 1).empty());

  // level-m block alone has 2^m points packed in [4^m - 1/2, 4^m)
  for (int m = 1; m <= 6; ++m) {
    const double n = std::pow(4.0, m);
    const PointSet lm = gen("dyadic:m=" + std::to_string(m), n - 0.5, n);
    REQUIRE(lm.size() == std::size_t{1} << m);
    for (double x : coords(lm)) {
      REQUIRE(x >= n - 0.5);
      REQUIRE(x < n);
    }
  }

  // cumulative card over blocks 1..m is 2^{m+1} - 2
  const PointSet all3 = gen("dyadic:m=3", 0, 64);
  REQUIRE(all3.size() == 14);

  // auto level selection stops at blocks that fit the window
  REQUIRE(gen("dyadic", 0, 16.0).size() == 6);   // levels 1 and 2
  REQUIRE(gen("dyadic", 0, 4.0).size() == 2);    // level 1 only
}

TEST_CASE("harmonic comb weights points 1/n", "[pointsets]") {
  const PointSet h = gen("harmonic", 1, 4);
  REQUIRE(ints(h) == std::vector<std::int64_t>{1, 2, 3, 4});
  REQUIRE(h.weighted());
  REQUIRE(h.weights() == std::vector<double>{1.0, 0.5, 1.0 / 3.0, 0.25});
  REQUIRE(gen("harmonic", -5, 0).empty());

  // total mass is the harmonic number H_N
  const PointSet h100 = gen("harmonic", 1, 100);
  double hn = 0;
  for (int n = 1; n <= 100; ++n) hn += 1.0 / n;
  REQUIRE(h100.total_abs_weight() == Catch::Approx(hn).epsilon(1e-14));
}

TEST_CASE("generation is deterministic and idempotent under windowing", "[pointsets]") {
  for (const char* spec : {"primes", "factorials", "dyadic:m=4", "harmonic",
                           "embed-factorial:base=(integers),max=5"}) {
    const Interval w{-100.0, 200.0};
    const PointSet a = generate(GeneratorSpec::parse(spec), w);
    const PointSet b = generate(GeneratorSpec::parse(spec), w);
    REQUIRE(a.scaled() == b.scaled());
    REQUIRE(a.weights() == b.weights());
    const PointSet c = a.restrict(w);
    REQUIRE(c.scaled() == a.scaled());
    REQUIRE(c.weights() == a.weights());
  }
}

TEST_CASE("generators refuse to enumerate past their budget", "[pointsets]") {
  REQUIRE_THROWS_AS(gen("integers", -1e11, 1e11), BudgetError);
  Budget tiny;
  tiny.max_points = 5;
  REQUIRE_THROWS_AS(generate(GeneratorSpec::parse("integers"), Interval{0, 100}, tiny),
                    BudgetError);
  REQUIRE_THROWS_AS(generate(GeneratorSpec::parse("harmonic"), Interval{1, 100}, tiny),
                    BudgetError);
  REQUIRE_THROWS_AS(generate(GeneratorSpec::parse("thue-morse:letter=a"), Interval{0, 100}, tiny),
                    BudgetError);
  REQUIRE_THROWS_AS(generate(GeneratorSpec::parse("integers"), Interval{2, 1}),
                    SpecError); // invalid window
}
