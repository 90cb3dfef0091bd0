#ifndef TWISTLAB_CENTRALIZERS_HPP
#define TWISTLAB_CENTRALIZERS_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twistlab/measure.hpp"
#include "twistlab/norms.hpp"

namespace twistlab {

/// A contractive homogeneous map KVec -> KVec: supp Omega(x) is contained in
/// supp x, and Omega(c x) = c Omega(x) for every real c. Omega(0) = 0 by fiat.
class Centralizer {
public:
  virtual ~Centralizer() = default;
  virtual KVec operator()(const KVec& x) const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json descriptor() const = 0;
};

using CentralizerPtr = std::shared_ptr<const Centralizer>;

// ---------------------------------------------------------------------------

/// Generalized Kalton-Peck map x log(|x|/||x||), with ||.|| the supplied norm
/// oracle; one code path covers every modeled space.
class KaltonPeckCentralizer final : public Centralizer {
public:
  explicit KaltonPeckCentralizer(NormPtr norm, double factor = 1.0)
      : norm_(std::move(norm)), factor_(factor) {
    if (!norm_) throw std::invalid_argument("KaltonPeckCentralizer: null norm");
  }

  KVec operator()(const KVec& x) const override {
    if (x.is_zero()) return KVec::zero(x.space());
    const double nx = (*norm_)(x);
    KVec denom(x.space(), std::vector<double>(x.size(), nx));
    KVec out = xlog_ratio(x, x.abs(), denom);
    if (factor_ != 1.0) out *= factor_;
    return out;
  }

  std::string kind() const override { return factor_ == 1.0 ? "kalton_peck" : "scaled_kp"; }
  nlohmann::json descriptor() const override {
    if (factor_ == 1.0)
      return {{"kind", "kalton_peck"}, {"params", {{"norm", norm_->descriptor()}}}};
    return {{"kind", "scaled_kp"},
            {"params", {{"norm", norm_->descriptor()}, {"factor", factor_}}}};
  }

  const NormPtr& norm() const { return norm_; }
  double factor() const { return factor_; }

private:
  NormPtr norm_;
  double factor_;
};

/// Kalton's map kappa(x) = x r_x with r_x the rank function.
class KappaCentralizer final : public Centralizer {
public:
  KVec operator()(const KVec& x) const override {
    return hadamard(x, rank_function(x));
  }
  std::string kind() const override { return "kappa"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "kappa"}, {"params", nlohmann::json::object()}};
  }
};

/// Derivation of the Lorentz couple (L_{p0,q0}, L_{p1,q1})_theta:
/// a linear combination of the Kalton-Peck map taken in L_{p,q} and kappa,
/// with p, q the harmonic mixes of the endpoint exponents.
class LorentzDerivation final : public Centralizer {
public:
  LorentzDerivation(double p0, double q0, double p1, double q1, double theta)
      : p0_(p0), q0_(q0), p1_(p1), q1_(q1), theta_(theta) {
    if (!(p0 > 0) || !(q0 > 0) || !(p1 > 0) || !(q1 > 0))
      throw std::invalid_argument("LorentzDerivation: exponents must be positive");
    if (!(theta > 0.0) || !(theta < 1.0))
      throw std::invalid_argument("LorentzDerivation: theta must lie in (0,1)");
    p_ = 1.0 / ((1.0 - theta) / p0 + theta / p1);
    q_ = 1.0 / ((1.0 - theta) / q0 + theta / q1);
    coeff_kp_ = q_ * (1.0 / q1 - 1.0 / q0);
    coeff_kappa_ = (q_ / p_) * (1.0 / q0 - 1.0 / q1) - (1.0 / p0 - 1.0 / p1);
  }

  double p() const { return p_; }
  double q() const { return q_; }
  double kp_coefficient() const { return coeff_kp_; }
  double kappa_coefficient() const { return coeff_kappa_; }

  KVec operator()(const KVec& x) const override {
    KVec out = KVec::zero(x.space());
    if (x.is_zero()) return out;
    if (coeff_kp_ != 0.0) {
      KaltonPeckCentralizer kp(std::make_shared<LorentzNorm>(p_, q_));
      out += coeff_kp_ * kp(x);
    }
    if (coeff_kappa_ != 0.0) {
      KappaCentralizer kappa;
      out += coeff_kappa_ * kappa(x);
    }
    return out;
  }

  std::string kind() const override { return "lorentz_derivation"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "lorentz_derivation"},
            {"params",
             {{"p0", p0_}, {"q0", q0_}, {"p1", p1_}, {"q1", q1_}, {"theta", theta_}}}};
  }

private:
  double p0_, q0_, p1_, q1_, theta_;
  double p_, q_;
  double coeff_kp_, coeff_kappa_;
};

/// Derivation of the couple (l_{p0}(sum l_2), l_{p1}(sum l_2))_theta:
/// blockwise (p/p1 - p/p0) log(||x^k||_2 / ||x||) x^k. Vanishes identically
/// on vectors supported in a single block.
class BlockDerivation final : public Centralizer {
public:
  BlockDerivation(double p0, double p1, double theta, std::vector<std::size_t> block_sizes)
      : p0_(p0), p1_(p1), theta_(theta),
        norm_(std::make_shared<LpSumL2BlocksNorm>(mixed_p(p0, p1, theta), block_sizes)),
        blocks_(std::move(block_sizes)) {}

  static double mixed_p(double p0, double p1, double theta) {
    const double inv0 = p0 == kInfExponent ? 0.0 : 1.0 / p0;
    const double inv1 = p1 == kInfExponent ? 0.0 : 1.0 / p1;
    const double inv = (1.0 - theta) * inv1 + theta * inv0;
    return inv == 0.0 ? kInfExponent : 1.0 / inv;
  }

  double p() const { return norm_->p(); }
  const NormPtr interpolated_norm() const { return norm_; }

  KVec operator()(const KVec& x) const override {
    KVec out = KVec::zero(x.space());
    if (x.is_zero()) return out;
    const double p = norm_->p();
    const double coeff = (p1_ == kInfExponent ? 0.0 : p / p1_) -
                         (p0_ == kInfExponent ? 0.0 : p / p0_);
    if (coeff == 0.0) return out;
    const double total = (*norm_)(x);
    auto s = norm_->block_norms(x);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (s[k] > 0.0) {
        const double factor = coeff * std::log(s[k] / total);
        for (std::size_t i = pos; i < pos + blocks_[k]; ++i) out[i] = factor * x[i];
      }
      pos += blocks_[k];
    }
    return out;
  }

  std::string kind() const override { return "block_derivation"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "block_derivation"},
            {"params",
             {{"p0", p0_ == kInfExponent ? nlohmann::json("inf") : nlohmann::json(p0_)},
              {"p1", p1_ == kInfExponent ? nlohmann::json("inf") : nlohmann::json(p1_)},
              {"theta", theta_},
              {"block_sizes", blocks_}}}};
  }

private:
  double p0_, p1_, theta_;
  std::shared_ptr<const LpSumL2BlocksNorm> norm_;
  std::vector<std::size_t> blocks_;
};

// ---------------------------------------------------------------------------
// Lozanovskii factorization

struct SolverConfig {
  double tol = 1e-8;        // objective-improvement stopping tolerance
  int max_iters = 200;      // coordinate sweeps
  double bracket = 40.0;    // per-coordinate search half-width for s
  double line_tol = 1e-12;  // golden-section bracket width
};

/// A pointwise splitting |x| = a0^{1-theta} a1^theta together with the value
/// ||a0||_0^{1-theta} ||a1||_1^theta it achieves.
struct Decomposition {
  KVec a0;
  KVec a1;
  double achieved_value = 0.0;
  KVec log_ratio;  // s with a0 = |x| e^{-theta s}, a1 = |x| e^{(1-theta) s}
  int sweeps = 0;
  double final_gap = 0.0;  // objective improvement over the last sweep
  bool converged = false;
  bool nonconvex_warning = false;  // endpoint norms without log-convexity guarantees
};

inline void to_json(nlohmann::json& j, const Decomposition& d) {
  j = nlohmann::json{{"a0", d.a0},
                     {"a1", d.a1},
                     {"achieved_value", d.achieved_value},
                     {"converged", d.converged},
                     {"sweeps", d.sweeps}};
}

namespace detail {

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, double tol) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline bool nonconvex_endpoint(const KotheNorm& n) {
  const std::string k = n.kind();
  return k == "schreier" || k == "schreier_dual" || k == "schlumprecht";
}

}  // namespace detail

/// Minimizes (1-theta) log||a0||_0 + theta log||a1||_1 over the exponential
/// parametrization a0 = |x| e^{-theta s}, a1 = |x| e^{(1-theta) s} with s free
/// on supp x, so the factorization constraint holds exactly at every iterate.
/// Coordinate-wise descent with golden-section line search; the final iterate
/// is balanced (||a0||_0 = ||a1||_1) by a shift along the invariant direction
/// s + c, which fixes the gauge freedom of optimal decompositions.
inline Decomposition lozanovskii_decompose(const NormPtr& norm0, const NormPtr& norm1,
                                           double theta, const KVec& x,
                                           const SolverConfig& cfg = {}) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("lozanovskii_decompose: theta must lie in (0,1)");
  if (x.is_zero())
    throw std::invalid_argument("lozanovskii_decompose: x must be nonzero");

  const auto supp = support(x);
  const KVec ax = x.abs();
  KVec s = KVec::zero(x.space());
  KVec a0 = ax, a1 = ax;

  auto set_coord = [&](std::size_t i, double si) {
    s[i] = si;
    a0[i] = ax[i] * std::exp(-theta * si);
    a1[i] = ax[i] * std::exp((1.0 - theta) * si);
  };
  auto objective = [&]() {
    return (1.0 - theta) * std::log((*norm0)(a0)) + theta * std::log((*norm1)(a1));
  };

  Decomposition dec{a0, a1, 0.0, s, 0, 0.0, false,
                    detail::nonconvex_endpoint(*norm0) || detail::nonconvex_endpoint(*norm1)};

  double prev = objective();
  for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    for (std::size_t i : supp) {
      const double center = s[i];
      double best = detail::golden_minimize(
          [&](double si) {
            set_coord(i, si);
            return objective();
          },
          center - cfg.bracket, center + cfg.bracket, cfg.line_tol);
      set_coord(i, best);
    }
    const double cur = objective();
    dec.sweeps = sweep;
    dec.final_gap = prev - cur;
    prev = cur;
    if (sweep >= 2 && dec.final_gap < cfg.tol) {
      dec.converged = true;
      break;
    }
  }

  // balance the factorization: shift s so that ||a0||_0 = ||a1||_1
  const double shift = std::log((*norm0)(a0) / (*norm1)(a1));
  for (std::size_t i : supp) set_coord(i, s[i] + shift);

  dec.a0 = a0;
  dec.a1 = a1;
  dec.log_ratio = s;
  dec.achieved_value =
      std::pow((*norm0)(a0), 1.0 - theta) * std::pow((*norm1)(a1), theta);
  return dec;
}

/// The interpolation derivation x log(|a1|/|a0|) read off a decomposition.
inline KVec derivation_from_decomposition(const Decomposition& dec, const KVec& x) {
  return xlog_ratio(x, dec.a1, dec.a0);
}

/// Centralizer induced by the numeric Lozanovskii factorization of a couple.
class LozanovskiiCentralizer final : public Centralizer {
public:
  LozanovskiiCentralizer(NormPtr norm0, NormPtr norm1, double theta,
                         SolverConfig cfg = {})
      : norm0_(std::move(norm0)), norm1_(std::move(norm1)), theta_(theta), cfg_(cfg) {
    if (!norm0_ || !norm1_) throw std::invalid_argument("LozanovskiiCentralizer: null norm");
  }

  KVec operator()(const KVec& x) const override {
    if (x.is_zero()) return KVec::zero(x.space());
    auto dec = lozanovskii_decompose(norm0_, norm1_, theta_, x, cfg_);
    return derivation_from_decomposition(dec, x);
  }

  Decomposition decompose(const KVec& x) const {
    return lozanovskii_decompose(norm0_, norm1_, theta_, x, cfg_);
  }

  std::string kind() const override { return "lozanovskii"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "lozanovskii"},
            {"params",
             {{"norm0", norm0_->descriptor()},
              {"norm1", norm1_->descriptor()},
              {"theta", theta_},
              {"solver", {{"tol", cfg_.tol}, {"max_iters", cfg_.max_iters}}}}}};
  }

  double theta() const { return theta_; }

private:
  NormPtr norm0_, norm1_;
  double theta_;
  SolverConfig cfg_;
};

// ---------------------------------------------------------------------------

/// Twisted-sum quasi-norm ||(w,x)|| = ||x|| + ||w - Omega x||.
inline double twisted_norm(const NormPtr& norm, const Centralizer& omega,
                           const KVec& w, const KVec& x) {
  return (*norm)(x) + (*norm)(w - omega(x));
}

inline CentralizerPtr make_centralizer(const nlohmann::json& desc) {
  const std::string kind = desc.at("kind").get<std::string>();
  const nlohmann::json params = desc.value("params", nlohmann::json::object());
  if (kind == "kalton_peck")
    return std::make_shared<KaltonPeckCentralizer>(make_norm(params.at("norm")));
  if (kind == "scaled_kp")
    return std::make_shared<KaltonPeckCentralizer>(make_norm(params.at("norm")),
                                                   params.at("factor").get<double>());
  if (kind == "kappa") return std::make_shared<KappaCentralizer>();
  if (kind == "lorentz_derivation")
    return std::make_shared<LorentzDerivation>(
        params.at("p0").get<double>(), params.at("q0").get<double>(),
        params.at("p1").get<double>(), params.at("q1").get<double>(),
        params.at("theta").get<double>());
  if (kind == "block_derivation")
    return std::make_shared<BlockDerivation>(
        exponent_from_json(params.at("p0")), exponent_from_json(params.at("p1")),
        params.at("theta").get<double>(),
        params.at("block_sizes").get<std::vector<std::size_t>>());
  if (kind == "lozanovskii") {
    SolverConfig cfg;
    if (params.contains("solver")) {
      cfg.tol = params["solver"].value("tol", cfg.tol);
      cfg.max_iters = params["solver"].value("max_iters", cfg.max_iters);
    }
    return std::make_shared<LozanovskiiCentralizer>(make_norm(params.at("norm0")),
                                                    make_norm(params.at("norm1")),
                                                    params.at("theta").get<double>(), cfg);
  }
  throw std::invalid_argument("make_centralizer: unknown kind '" + kind + "'");
}

/// CLI shorthand: "kp:<space>", "scaled_kp:<factor>:<space>", "kappa",
/// "lorentz_deriv:p0,q0,p1,q1,theta", "block:p0,p1,theta:4,4,4",
/// "loz:<theta>:<space0>;<space1>".
inline CentralizerPtr parse_centralizer(const std::string& text) {
  auto after = [&](std::size_t k) {  // text after the k-th ':'
    std::size_t pos = 0;
    for (std::size_t i = 0; i < k; ++i) pos = text.find(':', pos) + 1;
    return text.substr(pos);
  };
  auto csv = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
  };
  auto num = [](const std::string& s) {
    return s == "inf" ? kInfExponent : std::stod(s);
  };
  if (text == "kappa") return std::make_shared<KappaCentralizer>();
  if (text.rfind("kp:", 0) == 0)
    return std::make_shared<KaltonPeckCentralizer>(parse_space(after(1)));
  if (text.rfind("scaled_kp:", 0) == 0) {
    const std::string rest = after(1);
    const auto cut = rest.find(':');
    return std::make_shared<KaltonPeckCentralizer>(parse_space(rest.substr(cut + 1)),
                                                   std::stod(rest.substr(0, cut)));
  }
  if (text.rfind("lorentz_deriv:", 0) == 0) {
    auto v = csv(after(1));
    if (v.size() != 5) throw std::invalid_argument("parse_centralizer: lorentz_deriv needs 5 params");
    return std::make_shared<LorentzDerivation>(num(v[0]), num(v[1]), num(v[2]), num(v[3]),
                                               num(v[4]));
  }
  if (text.rfind("block:", 0) == 0) {
    const std::string rest = after(1);
    const auto cut = rest.find(':');
    auto v = csv(rest.substr(0, cut));
    if (v.size() != 3) throw std::invalid_argument("parse_centralizer: block needs p0,p1,theta");
    std::vector<std::size_t> blocks;
    for (const auto& t : csv(rest.substr(cut + 1)))
      blocks.push_back(static_cast<std::size_t>(std::stoul(t)));
    return std::make_shared<BlockDerivation>(num(v[0]), num(v[1]), num(v[2]), blocks);
  }
  if (text.rfind("loz:", 0) == 0) {
    const std::string rest = after(1);
    const auto cut = rest.find(':');
    const double theta = std::stod(rest.substr(0, cut));
    const std::string couple = rest.substr(cut + 1);
    const auto semi = couple.find(';');
    if (semi == std::string::npos)
      throw std::invalid_argument("parse_centralizer: loz needs two spaces separated by ';'");
    return std::make_shared<LozanovskiiCentralizer>(parse_space(couple.substr(0, semi)),
                                                    parse_space(couple.substr(semi + 1)), theta);
  }
  throw std::invalid_argument("parse_centralizer: cannot parse '" + text + "'");
}

}  // namespace twistlab

#endif  // TWISTLAB_CENTRALIZERS_HPP
