#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "twistlab/diagnostics.hpp"

using namespace twistlab;

namespace {

class ZeroCentralizer final : public Centralizer {
public:
  KVec operator()(const KVec& x) const override { return KVec::zero(x.space()); }
  std::string kind() const override { return "zero"; }
  nlohmann::json descriptor() const override { return {{"kind", "zero"}}; }
};

/// Pointwise multiplier; additive, so every deviation diagnostic vanishes.
class DiagonalCentralizer final : public Centralizer {
public:
  explicit DiagonalCentralizer(KVec d) : d_(std::move(d)) {}
  KVec operator()(const KVec& x) const override { return hadamard(d_, x); }
  std::string kind() const override { return "diagonal"; }
  nlohmann::json descriptor() const override { return {{"kind", "diagonal"}}; }

private:
  KVec d_;
};

DisjointFamily atom_family(const SpacePtr& s, std::size_t n) {
  std::vector<KVec> members;
  for (std::size_t i = 0; i < n; ++i) members.push_back(KVec::unit(s, i));
  return DisjointFamily(members, true);
}

DisjointFamily random_family(const SpacePtr& s, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const std::size_t chunk = s->size() / n;
  std::vector<KVec> members;
  for (std::size_t k = 0; k < n; ++k) {
    KVec v = KVec::zero(s);
    for (std::size_t i = k * chunk; i < (k + 1) * chunk; ++i)
      v[i] = g(rng) + (g(rng) > 0 ? 0.3 : -0.3);
    members.push_back(std::move(v));
  }
  return DisjointFamily(members, true);
}

}  // namespace

TEST_CASE("nabla identity for Kalton-Peck on l_2") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  KaltonPeckCentralizer kp(l2);
  for (std::size_t n : {2, 4, 8}) {
    auto fam = atom_family(s, n);
    const double expected =
        0.5 * std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n));
    auto res = nabla(kp, *l2, fam);
    CHECK(res.exact);
    CHECK(res.value == Catch::Approx(expected).margin(1e-10));
    for (double d : sign_deviations(kp, *l2, fam.members()))
      CHECK(d == Catch::Approx(expected).margin(1e-10));
  }
}

TEST_CASE("nabla vanishes for additive maps and singletons") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  ZeroCentralizer zero;
  KaltonPeckCentralizer kp(l2);
  auto fam = atom_family(s, 4);
  CHECK(nabla(zero, *l2, fam).value == 0.0);
  CHECK(nabla(kp, *l2, atom_family(s, 1)).value == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("nabla coefficient scaling drops zero members") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  KaltonPeckCentralizer kp(l2);
  auto fam = atom_family(s, 4);
  // zero coefficients reduce to the smaller family
  auto reduced = nabla(kp, *l2, fam, std::vector<double>{1, 0, 1, 0});
  auto direct = nabla(kp, *l2, atom_family(s, 2));
  CHECK(reduced.value == Catch::Approx(direct.value).margin(1e-12));
  CHECK_THROWS_AS(nabla(kp, *l2, fam, std::vector<double>{0, 0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(nabla(kp, *l2, fam, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("Monte-Carlo nabla agrees with exact enumeration") {
  auto s = AtomSpace::counting(12);
  auto l2 = std::make_shared<LpNorm>(2.0);
  KaltonPeckCentralizer kp(l2);
  std::mt19937_64 rng(31);
  auto fam = random_family(s, 6, rng);
  auto exact = nabla(kp, *l2, fam);
  NablaConfig cfg;
  cfg.exact_cap = 4;
  cfg.mc_samples = 4096;
  cfg.seed = 17;
  auto mc = nabla(kp, *l2, fam, std::nullopt, cfg);
  CHECK(exact.exact);
  CHECK_FALSE(mc.exact);
  CHECK(mc.samples == 4096);
  CHECK(std::fabs(mc.value - exact.value) <= 3.0 * mc.stderr_estimate + 1e-9);
}

TEST_CASE("quasi-linearity constants") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  SamplerConfig cfg{2000, 3};
  ZeroCentralizer zero;
  CHECK(quasi_linearity_constant(zero, *l2, s, cfg) == 0.0);
  KVec d = KVec::indicator(s, 0, 8);
  d[3] = -2.0;
  DiagonalCentralizer diag(d);
  CHECK(quasi_linearity_constant(diag, *l2, s, cfg) <= 1e-12);
  KaltonPeckCentralizer kp(l2);
  const double c = quasi_linearity_constant(kp, *l2, s, cfg);
  CHECK(c > 0.0);
  CHECK(c <= 4.0);
}

TEST_CASE("centralizer constants") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  SamplerConfig cfg{2000, 4};
  KaltonPeckCentralizer kp(l2);
  const double c = centralizer_constant(kp, *l2, s, cfg);
  CHECK(c > 0.0);
  CHECK(c <= 2.0 / std::exp(1.0) + 0.01);
  ZeroCentralizer zero;
  CHECK(centralizer_constant(zero, *l2, s, cfg) == 0.0);
}

TEST_CASE("l_p parameters are exactly n^{1/p}") {
  auto s = AtomSpace::counting(16);
  ParamStrategy strat;
  strat.random_families = 3;
  strat.local_steps = 60;
  for (double p : {1.0, 2.0}) {
    auto norm = std::make_shared<LpNorm>(p);
    double prevM = 0.0;
    for (std::size_t n : {1, 2, 4, 8, 16}) {
      const double target = std::pow(static_cast<double>(n), 1.0 / p);
      auto M = parameter_M(norm, s, n, strat);
      auto m = parameter_m(norm, s, n, strat);
      CHECK(M.value == Catch::Approx(target).margin(1e-10));
      CHECK(m.value == Catch::Approx(target).margin(1e-10));
      CHECK(m.value <= M.value + 1e-12);
      CHECK(M.value >= prevM - 1e-12);
      prevM = M.value;
      CHECK(M.family.size() == n);
    }
  }
  CHECK_THROWS_AS(parameter_M(std::make_shared<LpNorm>(2.0), s, 17, strat),
                  std::invalid_argument);
}

TEST_CASE("Schreier parameter M grows linearly") {
  auto s = AtomSpace::counting(20);
  auto norm = std::make_shared<SchreierNorm>();
  ParamStrategy strat;
  strat.random_families = 2;
  strat.local_steps = 40;
  double prev = 0.0;
  for (std::size_t n = 1; n <= 8; ++n) {
    auto M = parameter_M(norm, s, n, strat);
    CHECK(M.value == static_cast<double>(n));
    CHECK(M.value >= prev);
    prev = M.value;
  }
}

TEST_CASE("parameter table carries provenance") {
  auto s = AtomSpace::counting(16);
  ParamStrategy strat;
  strat.random_families = 2;
  strat.local_steps = 40;
  auto t = build_param_table(std::make_shared<LpNorm>(2.0), s, {1, 2, 4}, strat);
  REQUIRE(t.M.size() == 3);
  CHECK(t.m[2] <= t.M[2] + 1e-12);
  CHECK_FALSE(t.strategy_log[0].empty());
  CHECK_FALSE(t.successive);
  auto ts = build_param_table(std::make_shared<SchlumprechtNorm>(), AtomSpace::counting(8),
                              {1, 2}, strat);
  CHECK(ts.successive);
}

TEST_CASE("duality ratios") {
  auto s = AtomSpace::counting(12);
  ParamStrategy strat;
  strat.random_families = 2;
  strat.local_steps = 40;
  auto rep = duality_check(std::make_shared<LpNorm>(2.0), std::make_shared<LpNorm>(2.0), s,
                           4, strat);
  CHECK(rep.ratio == Catch::Approx(1.0).margin(1e-10));
  auto rep1 = duality_check(std::make_shared<LpNorm>(1.0),
                            std::make_shared<LpNorm>(kInfExponent), s, 6, strat);
  CHECK(rep1.ratio == Catch::Approx(1.0).margin(1e-10));
  auto reps = duality_check(std::make_shared<SchreierNorm>(),
                            std::make_shared<SchreierDualNorm>(16), s, 5, strat);
  CHECK(reps.ratio >= 1.0 - 1e-9);
}

TEST_CASE("triviality distance vanishes on additive restrictions") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  ZeroCentralizer zero;
  std::mt19937_64 rng(32);
  auto fam = random_family(s, 2, rng);
  auto est = triviality_distance(zero, l2, fam);
  CHECK(est.lower_probe <= 1e-10);
  CHECK(est.fitted_images.size() == 2);
}

TEST_CASE("triviality distance is invariant under positive member rescaling") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  KaltonPeckCentralizer kp(l2);
  std::mt19937_64 rng(33);
  auto fam = random_family(s, 2, rng);
  std::vector<KVec> scaled;
  const double cs[] = {0.25, 7.0};
  for (std::size_t k = 0; k < 2; ++k) scaled.push_back(cs[k] * fam[k]);
  TrivialityConfig cfg;
  cfg.rounds = 5;
  auto a = triviality_distance(kp, l2, fam, cfg);
  auto b = triviality_distance(kp, l2, DisjointFamily(scaled), cfg);
  CHECK(a.lower_probe == Catch::Approx(b.lower_probe).margin(1e-10));
}

TEST_CASE("fitted images respect supports") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  KaltonPeckCentralizer kp(l2);
  std::mt19937_64 rng(34);
  auto fam = random_family(s, 4, rng);
  TrivialityConfig cfg;
  cfg.rounds = 3;
  auto est = triviality_distance(kp, l2, fam, cfg);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 8; ++i)
      if (fam[k][i] == 0.0) CHECK(est.fitted_images[k][i] == 0.0);
  CHECK(est.lower_probe >= 0.0);
  CHECK(est.solver_trace.probes > 0);
}

TEST_CASE("psi closed-form tracks") {
  CHECK(psi_track_kalton_peck(2.0, 64) == Catch::Approx(std::log(64.0) - 6.0));
  const double p = 4.0, theta = 0.75;
  CHECK(psi_track_kalton_peck(p, 100) ==
        Catch::Approx(std::log(100.0) - 3.0 / std::min(theta, 1.0 - theta)));
  const double ln = std::log(1024.0);
  CHECK(psi_track_schreier(1024) == Catch::Approx(std::fabs(ln - std::log(ln)) - 6.0));
  CHECK(psi_track_pconv_schreier(2.0, 256) ==
        Catch::Approx(0.5 * std::sqrt(std::log(256.0)) - 3.0));
  ParamFn M0 = [](std::size_t n) { return static_cast<double>(n); };
  ParamFn M1 = [](std::size_t) { return 1.0; };
  ParamFn mid = [](std::size_t n) { return std::sqrt(static_cast<double>(n)); };
  CHECK(psi_lower_track(M0, M1, mid, mid, 0.5, 64) ==
        Catch::Approx(psi_track_kalton_peck(2.0, 64)).margin(1e-12));
  CHECK_THROWS_AS(psi_lower_track(M0, M1, mid, mid, 1.0, 4), std::invalid_argument);
}

TEST_CASE("psi upper scan") {
  auto s = AtomSpace::counting(16);
  auto l2 = std::make_shared<LpNorm>(2.0);
  ZeroCentralizer zero;
  TrivialityConfig cfg;
  cfg.rounds = 3;
  auto scan = psi_upper_scan(zero, l2, s, 4, 2, cfg);
  CHECK(scan.value <= 1e-10);
  CHECK(scan.witness.size() == 4);
  CHECK(scan.scanned_values.size() >= 3);
  KaltonPeckCentralizer kp(l2);
  CHECK_THROWS_AS(psi_upper_scan(kp, l2, s, 4, 0, cfg), std::invalid_argument);
}

TEST_CASE("estimate chain for the scaled log map on equal atoms") {
  auto s = AtomSpace::counting(8);
  auto l2 = std::make_shared<LpNorm>(2.0);
  // the (L_1, L_inf) interpolation map at theta = 1/2 is -2 times the log map
  KaltonPeckCentralizer omega(l2, -2.0);
  ParamFn M0 = [](std::size_t n) { return static_cast<double>(n); };
  ParamFn M1 = [](std::size_t) { return 1.0; };
  auto fam = atom_family(s, 8);
  ParamStrategy strat;
  strat.random_families = 2;
  strat.local_steps = 40;
  auto rep = estimate_chain_check(omega, l2, M0, M1, 0.5, fam, strat);
  CHECK(rep.lhs == Catch::Approx(0.0).margin(1e-9));
  CHECK(rep.rhs > 0.0);
  CHECK_FALSE(rep.violated);

  auto single = estimate_chain_check(omega, l2, M0, M1, 0.5, atom_family(s, 1), strat);
  CHECK(single.lhs == Catch::Approx(0.0).margin(1e-12));

  std::vector<KVec> big{2.0 * KVec::unit(s, 0)};
  CHECK_THROWS_AS(
      estimate_chain_check(omega, l2, M0, M1, 0.5, DisjointFamily(big), strat),
      std::invalid_argument);
}
