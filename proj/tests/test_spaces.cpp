#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "twistlab/norms.hpp"

using namespace twistlab;

namespace {

KVec vec(SpacePtr s, std::vector<double> v) { return KVec(std::move(s), std::move(v)); }

KVec random_vec(const SpacePtr& s, std::mt19937_64& rng, double zero_rate = 0.2) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  KVec x = KVec::zero(s);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = u(rng) < zero_rate ? 0.0 : g(rng);
  return x;
}

/// Brute force over every subset A of 1..n with |A| <= min A.
double schreier_oracle(const KVec& x) {
  const std::size_t n = x.size();
  double best = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::size_t count = 0, min1 = n + 1;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) {
        ++count;
        min1 = std::min(min1, i + 1);
        s += std::fabs(x[i]);
      }
    if (count <= min1) best = std::max(best, s);
  }
  return best;
}

/// All admissible sets, for the exhaustive dual LP.
std::vector<std::vector<std::size_t>> all_admissible(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> a;
    std::size_t min1 = n + 1;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) {
        a.push_back(i);
        min1 = std::min(min1, i + 1);
      }
    if (a.size() <= min1) out.push_back(std::move(a));
  }
  return out;
}

double schreier_dual_oracle(const KVec& x) {
  const std::size_t n = x.size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = std::fabs(x[i]);
  std::vector<std::vector<double>> A;
  for (const auto& adm : all_admissible(n)) {
    std::vector<double> row(n, 0.0);
    for (std::size_t i : adm) row[i] = 1.0;
    A.push_back(std::move(row));
  }
  return detail::simplex_maximize(c, A, std::vector<double>(A.size(), 1.0)).value;
}

/// Recursive interval-decomposition oracle for the implicit norm; exponential,
/// for tiny supports only.
double schlumprecht_oracle(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double best = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) best = std::max(best, std::fabs(v[i]));
  const std::size_t len = hi - lo + 1;
  for (std::size_t parts = 2; parts <= len; ++parts) {
    // enumerate compositions of [lo..hi] into `parts` successive intervals
    std::vector<std::size_t> cuts(parts - 1);
    std::function<void(std::size_t, std::size_t, double)> rec =
        [&](std::size_t k, std::size_t start, double acc) {
          if (k == parts - 1) {
            const double total = acc + schlumprecht_oracle(v, start, hi);
            best = std::max(best, total / std::log2(static_cast<double>(parts) + 1.0));
            return;
          }
          for (std::size_t end = start; end + (parts - 2 - k) < hi; ++end)
            rec(k + 1, end + 1, acc + schlumprecht_oracle(v, start, end));
        };
    rec(0, lo, 0.0);
  }
  return best;
}

}  // namespace

TEST_CASE("lp norm hand values") {
  CHECK(LpNorm(2.0)(vec(AtomSpace::counting(2), {3, 4})) == Catch::Approx(5.0));
  CHECK(LpNorm(1.0)(vec(AtomSpace::uniform(2), {1, 1})) == Catch::Approx(1.0));
  CHECK(LpNorm(kInfExponent)(vec(AtomSpace::counting(3), {1, -7, 2})) == 7.0);
  CHECK_THROWS_AS(LpNorm(0.0), std::invalid_argument);
}

TEST_CASE("lp norming vectors certify the norm") {
  std::mt19937_64 rng(1);
  for (double p : {1.0, 1.5, 2.0, 4.0, kInfExponent}) {
    LpNorm norm(p);
    const double pp = p == 1.0 ? kInfExponent : (p == kInfExponent ? 1.0 : p / (p - 1.0));
    LpNorm dual(pp);
    auto s = AtomSpace::counting(8);
    for (int t = 0; t < 50; ++t) {
      KVec x = random_vec(s, rng);
      if (x.is_zero()) continue;
      auto y = norm.norming_vector(x);
      REQUIRE(y.has_value());
      CHECK(dot(x, *y) == Catch::Approx(norm(x)).epsilon(1e-10));
      CHECK(dual(*y) <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("lorentz collapses to lp at q=p and counts indicator atoms") {
  std::mt19937_64 rng(2);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    LorentzNorm lor(p, p);
    LpNorm lp(p);
    auto s = AtomSpace::counting(10);
    for (int t = 0; t < 100; ++t) {
      KVec x = random_vec(s, rng);
      CHECK(lor(x) == Catch::Approx(lp(x)).margin(1e-12));
    }
  }
  LorentzNorm l21(2.0, 1.0);
  auto s = AtomSpace::counting(9);
  for (std::size_t n : {1, 4, 9})
    CHECK(l21(KVec::indicator(s, 0, n)) ==
          Catch::Approx(std::pow(static_cast<double>(n), 0.5)).epsilon(1e-12));
  auto one = std::make_shared<AtomSpace>(std::vector<double>{1.0});
  CHECK(LorentzNorm(3.0, 2.0)(vec(one, {-2.5})) == Catch::Approx(2.5));
}

TEST_CASE("schreier norm matches the exhaustive admissible oracle") {
  std::mt19937_64 rng(3);
  SchreierNorm norm;
  for (std::size_t n : {2, 5, 8, 10}) {
    auto s = AtomSpace::counting(n);
    for (int t = 0; t < 100; ++t) {
      KVec x = random_vec(s, rng);
      CHECK(norm(x) == Catch::Approx(schreier_oracle(x)).margin(1e-12));
    }
  }
  auto s = AtomSpace::counting(8);
  CHECK(norm(KVec::unit(s, 0)) == 1.0);
  CHECK(norm(KVec::indicator(s, 3, 4)) == 4.0);  // atoms 4..7, size 4 <= min 4
  CHECK(norm(vec(AtomSpace::counting(2), {1, 1})) == 1.0);
  CHECK_THROWS_AS(norm(vec(AtomSpace::uniform(4), {1, 1, 1, 1})), std::invalid_argument);
}

TEST_CASE("schreier norming vector is feasible and sharp") {
  std::mt19937_64 rng(4);
  SchreierNorm norm;
  SchreierDualNorm dual(16);
  auto s = AtomSpace::counting(10);
  for (int t = 0; t < 50; ++t) {
    KVec x = random_vec(s, rng);
    if (x.is_zero()) continue;
    auto y = norm.norming_vector(x);
    REQUIRE(y.has_value());
    CHECK(dot(x, *y) == Catch::Approx(norm(x)).margin(1e-12));
    CHECK(dual(*y) <= 1.0 + 1e-9);
  }
}

TEST_CASE("schreier dual matches the full-enumeration LP") {
  std::mt19937_64 rng(5);
  SchreierDualNorm dual(16);
  for (std::size_t n : {2, 4, 7, 10}) {
    auto s = AtomSpace::counting(n);
    for (int t = 0; t < 30; ++t) {
      KVec x = random_vec(s, rng);
      CHECK(dual(x) == Catch::Approx(schreier_dual_oracle(x)).margin(1e-8));
    }
  }
  CHECK(dual(KVec::unit(AtomSpace::counting(4), 0)) == Catch::Approx(1.0));
  CHECK(dual(vec(AtomSpace::counting(2), {1, 1})) == Catch::Approx(2.0));
  CHECK(dual(vec(AtomSpace::counting(3), {1, 1, 1})) == Catch::Approx(2.0));
  CHECK(dual(KVec::zero(AtomSpace::counting(3))) == 0.0);
  CHECK_THROWS_AS(dual(KVec::zero(AtomSpace::counting(17))), std::invalid_argument);
}

TEST_CASE("schreier duality pairing bound on random pairs") {
  std::mt19937_64 rng(6);
  SchreierNorm norm;
  SchreierDualNorm dual(16);
  auto s = AtomSpace::counting(12);
  for (int t = 0; t < 200; ++t) {
    KVec x = random_vec(s, rng), y = random_vec(s, rng);
    CHECK(dot(x, y) <= norm(x) * dual(y) + 1e-9);
  }
}

TEST_CASE("schlumprecht norm matches the decomposition-tree oracle") {
  std::mt19937_64 rng(7);
  SchlumprechtNorm norm;
  auto s8 = AtomSpace::counting(8);
  for (int t = 0; t < 40; ++t) {
    KVec x = random_vec(s8, rng, 0.1);
    if (x.is_zero()) continue;
    std::vector<double> vals;
    for (std::size_t i = 0; i < 8; ++i)
      if (x[i] != 0.0) vals.push_back(std::fabs(x[i]));
    CHECK(norm(x) ==
          Catch::Approx(schlumprecht_oracle(vals, 0, vals.size() - 1)).margin(1e-8));
  }
  CHECK(norm(KVec::unit(s8, 3)) == Catch::Approx(1.0));
  CHECK(norm(vec(AtomSpace::counting(2), {1, 1})) == Catch::Approx(2.0 / std::log2(3.0)));
  // dominates the sup norm
  for (int t = 0; t < 40; ++t) {
    KVec x = random_vec(s8, rng);
    CHECK(norm(x) >= LpNorm(kInfExponent)(x) - 1e-12);
  }
  CHECK_THROWS_AS(norm(KVec::indicator(AtomSpace::counting(70), 0, 70)),
                  std::invalid_argument);
}

TEST_CASE("p-convexification specializations") {
  auto s = AtomSpace::counting(8);
  PConvexificationNorm conv(std::make_shared<LpNorm>(1.0), 2.0);
  LpNorm l2(2.0);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    KVec x = random_vec(s, rng);
    CHECK(conv(x) == Catch::Approx(l2(x)).margin(1e-12));
  }
  PConvexificationNorm sch2(std::make_shared<SchreierNorm>(), 2.0);
  CHECK(sch2(KVec::indicator(s, 3, 4)) == Catch::Approx(2.0));
  CHECK(sch2(KVec::unit(s, 5)) == Catch::Approx(1.0));
  CHECK_THROWS_AS(PConvexificationNorm(std::make_shared<LpNorm>(1.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("block norm collapses in the degenerate layouts") {
  auto s = AtomSpace::counting(6);
  std::mt19937_64 rng(9);
  LpSumL2BlocksNorm whole(1.7, {6});
  LpSumL2BlocksNorm singles(1.7, {1, 1, 1, 1, 1, 1});
  LpSumL2BlocksNorm two(2.0, {3, 3});
  LpNorm l2(2.0);
  LpNorm l17(1.7);
  for (int t = 0; t < 100; ++t) {
    KVec x = random_vec(s, rng);
    CHECK(whole(x) == Catch::Approx(l2(x)).margin(1e-12));
    CHECK(singles(x) == Catch::Approx(l17(x)).margin(1e-12));
    CHECK(two(x) == Catch::Approx(l2(x)).margin(1e-12));
  }
  CHECK_THROWS_AS(whole(KVec::zero(AtomSpace::counting(5))), std::invalid_argument);
}

TEST_CASE("norm axioms hold on seeded samples") {
  std::vector<std::pair<NormPtr, SpacePtr>> cases = {
      {std::make_shared<LpNorm>(0.5), AtomSpace::counting(8)},
      {std::make_shared<LpNorm>(2.0), AtomSpace::uniform(8)},
      {std::make_shared<LorentzNorm>(2.0, 1.0), AtomSpace::counting(8)},
      {std::make_shared<SchreierNorm>(), AtomSpace::counting(8)},
      {std::make_shared<SchreierDualNorm>(16), AtomSpace::counting(8)},
      {std::make_shared<SchlumprechtNorm>(), AtomSpace::counting(8)},
  };
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [norm, space] : cases) {
    const double C = norm->quasi_triangle_constant();
    for (int t = 0; t < 300; ++t) {
      KVec x = random_vec(space, rng), y = random_vec(space, rng);
      KVec shrunk = KVec::zero(space);
      for (std::size_t i = 0; i < 8; ++i) shrunk[i] = unit(rng) * x[i];
      const double nx = (*norm)(x);
      CHECK((*norm)(-2.0 * x) == Catch::Approx(2.0 * nx).margin(1e-9));
      CHECK((*norm)(shrunk) <= nx * (1.0 + 1e-9));
      CHECK((*norm)(x + y) <= C * (nx + (*norm)(y)) * (1.0 + 1e-9));
      CHECK((nx == 0.0) == x.is_zero());
    }
  }
}

TEST_CASE("descriptors round-trip through the factory") {
  std::vector<NormPtr> norms = {
      std::make_shared<LpNorm>(2.0),
      std::make_shared<LpNorm>(kInfExponent),
      std::make_shared<LorentzNorm>(2.0, 1.0),
      std::make_shared<SchreierNorm>(),
      std::make_shared<SchreierDualNorm>(12),
      std::make_shared<SchlumprechtNorm>(),
      std::make_shared<PConvexificationNorm>(std::make_shared<SchreierNorm>(), 2.0),
      std::make_shared<LpSumL2BlocksNorm>(1.5, std::vector<std::size_t>{4, 4}),
  };
  auto s = AtomSpace::counting(8);
  std::mt19937_64 rng(11);
  for (const auto& n : norms) {
    auto back = make_norm(n->descriptor());
    CHECK(back->kind() == n->kind());
    for (int t = 0; t < 20; ++t) {
      KVec x = random_vec(s, rng);
      CHECK((*back)(x) == Catch::Approx((*n)(x)).margin(1e-12));
    }
  }
}

TEST_CASE("shorthand parser covers every family") {
  auto s = AtomSpace::counting(8);
  KVec x = vec(s, {1, -2, 0, 3, 0, 0, 1, -1});
  CHECK(parse_space("lp:2")->kind() == "lp");
  CHECK((*parse_space("lp:inf"))(x) == 3.0);
  CHECK((*parse_space("lorentz:2,1"))(x) == Catch::Approx(LorentzNorm(2, 1)(x)));
  CHECK(parse_space("schreier")->kind() == "schreier");
  CHECK(parse_space("schreier_dual")->kind() == "schreier_dual");
  CHECK(parse_space("schlumprecht")->kind() == "schlumprecht");
  CHECK((*parse_space("pconv:lp:1:2"))(x) == Catch::Approx(LpNorm(2)(x)).margin(1e-12));
  CHECK((*parse_space("blocks:2:4,4"))(x) == Catch::Approx(LpNorm(2)(x)).margin(1e-12));
  CHECK_THROWS_AS(parse_space("nope:1"), std::invalid_argument);
}
