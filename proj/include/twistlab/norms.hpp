#ifndef TWISTLAB_NORMS_HPP
#define TWISTLAB_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistlab/detail/simplex.hpp"
#include "twistlab/measure.hpp"

namespace twistlab {

constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// A norm/quasi-norm oracle on KVecs with declared metadata. All axioms
/// (homogeneity, lattice monotonicity, quasi-triangle with the declared
/// constant) are checked empirically by the property battery.
class KotheNorm {
public:
  virtual ~KotheNorm() = default;

  virtual double operator()(const KVec& x) const = 0;

  virtual std::string kind() const = 0;
  virtual double quasi_triangle_constant() const { return 1.0; }
  virtual bool rearrangement_invariant() const { return false; }
  /// When set, M/m parameter searches should restrict to successive families.
  virtual bool successive_only_params() const { return false; }
  virtual nlohmann::json descriptor() const = 0;

  /// A vector y with dot(x, y) = norm(x) and dual_norm(y) <= 1, when this
  /// norm knows how to produce one. Used by the duality diagnostics.
  virtual std::optional<KVec> norming_vector(const KVec&) const { return std::nullopt; }
};

using NormPtr = std::shared_ptr<const KotheNorm>;

// ---------------------------------------------------------------------------
// L_p

class LpNorm final : public KotheNorm {
public:
  explicit LpNorm(double p) : p_(p) {
    if (!(p > 0.0)) throw std::invalid_argument("LpNorm: p must be positive");
  }

  double p() const { return p_; }

  double operator()(const KVec& x) const override {
    if (p_ == kInfExponent) {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i]));
      return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += x.weight(i) * std::pow(std::fabs(x[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  std::string kind() const override { return "lp"; }
  double quasi_triangle_constant() const override {
    return p_ >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / p_ - 1.0);
  }
  bool rearrangement_invariant() const override { return true; }

  nlohmann::json descriptor() const override {
    return {{"kind", "lp"}, {"params", {{"p", p_ == kInfExponent ? nlohmann::json("inf") : nlohmann::json(p_)}}}};
  }

  std::optional<KVec> norming_vector(const KVec& x) const override {
    if (x.is_zero()) return std::nullopt;
    const double nx = (*this)(x);
    KVec y = KVec::zero(x.space());
    if (p_ == kInfExponent) {
      // point mass at the max atom, scaled to unit L_1 norm
      std::size_t best = 0;
      for (std::size_t i = 1; i < x.size(); ++i)
        if (std::fabs(x[i]) > std::fabs(x[best])) best = i;
      y[best] = (x[best] >= 0.0 ? 1.0 : -1.0) / x.weight(best);
      return y;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) continue;
      double sgn = x[i] > 0.0 ? 1.0 : -1.0;
      y[i] = sgn * std::pow(std::fabs(x[i]) / nx, p_ - 1.0);
    }
    return y;
  }

private:
  double p_;
};

// ---------------------------------------------------------------------------
// Lorentz L_{p,q}

/// Quasi-norm convention: (sum_k (x*_k)^q (T_k^{q/p} - T_{k-1}^{q/p}))^{1/q},
/// i.e. the weight factor exactly integrates t^{q/p-1} dt. The indicator of n
/// unit atoms then has norm exactly n^{1/p}, and q = p collapses to L_p.
class LorentzNorm final : public KotheNorm {
public:
  LorentzNorm(double p, double q) : p_(p), q_(q) {
    if (!(p > 0.0) || !(q > 0.0))
      throw std::invalid_argument("LorentzNorm: p, q must be positive and finite");
  }

  double p() const { return p_; }
  double q() const { return q_; }

  double operator()(const KVec& x) const override {
    auto steps = decreasing_rearrangement(x);
    const double e = q_ / p_;
    double s = 0.0, prev = 0.0;
    for (const auto& st : steps) {
      const double tk = std::pow(st.cumulative_measure, e);
      if (st.value > 0.0) s += std::pow(st.value, q_) * (tk - prev);
      prev = tk;
    }
    return std::pow(s, 1.0 / q_);
  }

  std::string kind() const override { return "lorentz"; }
  double quasi_triangle_constant() const override {
    // dilation bound 2^{1/p} composed with the q-sum constant
    return std::pow(2.0, 1.0 / p_) * std::max(1.0, std::pow(2.0, 1.0 / q_ - 1.0));
  }
  bool rearrangement_invariant() const override { return true; }

  nlohmann::json descriptor() const override {
    return {{"kind", "lorentz"}, {"params", {{"p", p_}, {"q", q_}}}};
  }

private:
  double p_, q_;
};

// ---------------------------------------------------------------------------
// Schreier space

namespace detail {

/// Max over admissible sets A (|A| <= min A, 1-based) of sum_{i in A} vals_i,
/// assuming vals >= 0. Scans the start index m and takes the m largest values
/// with index >= m. Also reports a maximizing set.
struct AdmissibleBest {
  double value = 0.0;
  std::vector<std::size_t> atoms;  // 0-based
};

inline AdmissibleBest best_admissible(const std::vector<double>& vals) {
  const std::size_t n = vals.size();
  AdmissibleBest best;
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = m - 1; i < n; ++i) idx.push_back(i);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    if (idx.size() > m) idx.resize(m);
    double s = 0.0;
    std::vector<std::size_t> chosen;
    for (std::size_t i : idx) {
      if (vals[i] <= 0.0) continue;
      s += vals[i];
      chosen.push_back(i);
    }
    if (s > best.value) {
      best.value = s;
      std::sort(chosen.begin(), chosen.end());
      best.atoms = std::move(chosen);
    }
  }
  return best;
}

inline void require_unit_weights(const KVec& x, const char* who) {
  if (!x.space()->unit_weights())
    throw std::invalid_argument(std::string(who) + ": requires unit weights");
}

}  // namespace detail

class SchreierNorm final : public KotheNorm {
public:
  double operator()(const KVec& x) const override {
    detail::require_unit_weights(x, "SchreierNorm");
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::fabs(x[i]);
    return detail::best_admissible(a).value;
  }

  std::string kind() const override { return "schreier"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "schreier"}, {"params", nlohmann::json::object()}};
  }

  std::optional<KVec> norming_vector(const KVec& x) const override {
    detail::require_unit_weights(x, "SchreierNorm");
    if (x.is_zero()) return std::nullopt;
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::fabs(x[i]);
    auto best = detail::best_admissible(a);
    KVec y = KVec::zero(x.space());
    for (std::size_t i : best.atoms) y[i] = x[i] > 0.0 ? 1.0 : -1.0;
    return y;
  }
};

/// Dual Schreier norm computed as an LP over the Schreier unit ball, one
/// constraint per admissible set, generated lazily: solve, look for the most
/// violated admissible set, add it, re-solve. Exact at the configured cap.
class SchreierDualNorm final : public KotheNorm {
public:
  explicit SchreierDualNorm(std::size_t atom_cap = 16) : cap_(atom_cap) {}

  double operator()(const KVec& x) const override {
    detail::require_unit_weights(x, "SchreierDualNorm");
    if (x.size() > cap_)
      throw std::invalid_argument("SchreierDualNorm: atom count exceeds the configured cap");
    const std::size_t n = x.size();
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = std::fabs(x[i]);

    std::vector<std::vector<double>> rows;
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> r(n, 0.0);
      r[i] = 1.0;
      rows.push_back(std::move(r));
      seen.insert({i});
    }
    double value = 0.0;
    for (int round = 0; round < 4096; ++round) {
      auto lp = detail::simplex_maximize(c, rows, std::vector<double>(rows.size(), 1.0));
      value = lp.value;
      auto viol = detail::best_admissible(lp.y);
      if (viol.value <= 1.0 + 1e-9 || !seen.insert(viol.atoms).second) break;
      std::vector<double> r(n, 0.0);
      for (std::size_t i : viol.atoms) r[i] = 1.0;
      rows.push_back(std::move(r));
    }
    return value;
  }

  std::string kind() const override { return "schreier_dual"; }
  nlohmann::json descriptor() const override {
    return {{"kind", "schreier_dual"}, {"params", {{"atom_cap", cap_}}}};
  }

private:
  std::size_t cap_;
};

// ---------------------------------------------------------------------------
// Schlumprecht space

/// Implicit norm: ||x|| = max(||x||_inf, sup_{l>=2} (1/log2(l+1)) sum ||E_i x||)
/// over successive interval decompositions E_1 < ... < E_l. Computed on the
/// compressed nonzero values (gaps are immaterial) by iterating the defining
/// map on the table of all subintervals until it is stationary; intervals are
/// processed by increasing length, so the iteration settles fast.
class SchlumprechtNorm final : public KotheNorm {
public:
  explicit SchlumprechtNorm(std::size_t support_cap = 64, double tol = 1e-10,
                            int max_iters = 200)
      : cap_(support_cap), tol_(tol), max_iters_(max_iters) {}

  double operator()(const KVec& x) const override {
    detail::require_unit_weights(x, "SchlumprechtNorm");
    std::vector<double> vals;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) vals.push_back(std::fabs(x[i]));
    if (vals.empty()) return 0.0;
    if (vals.size() > cap_)
      throw std::invalid_argument("SchlumprechtNorm: support exceeds the configured cap");
    return solve(vals);
  }

  std::string kind() const override { return "schlumprecht"; }
  bool successive_only_params() const override { return true; }
  nlohmann::json descriptor() const override {
    return {{"kind", "schlumprecht"}, {"params", {{"support_cap", cap_}}}};
  }

private:
  double solve(const std::vector<double>& vals) const {
    const std::size_t n = vals.size();
    auto at = [n](std::size_t i, std::size_t j) { return i * n + j; };

    std::vector<double> maxval(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double m = 0.0;
      for (std::size_t j = i; j < n; ++j) {
        m = std::max(m, vals[j]);
        maxval[at(i, j)] = m;
      }
    }

    std::vector<double> F = maxval;  // f_0 = sup norm on every interval
    // S[l][i][j]: best sum of l interval norms partitioning [i..j]
    std::vector<std::vector<double>> S(n + 1, std::vector<double>(n * n, 0.0));

    for (int iter = 0; iter < max_iters_; ++iter) {
      double delta = 0.0;
      S[1] = F;
      for (std::size_t len = 2; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
          const std::size_t j = i + len - 1;
          double best = maxval[at(i, j)];
          for (std::size_t l = 2; l <= len; ++l) {
            double bs = -1.0;
            // last part is [m+1..j], first l-1 parts fill [i..m]
            for (std::size_t m = i + l - 2; m < j; ++m)
              bs = std::max(bs, S[l - 1][at(i, m)] + F[at(m + 1, j)]);
            S[l][at(i, j)] = bs;
            best = std::max(best, bs / std::log2(static_cast<double>(l) + 1.0));
          }
          delta = std::max(delta, std::fabs(best - F[at(i, j)]));
          F[at(i, j)] = best;
        }
      }
      if (delta < tol_) return F[at(0, n - 1)];
    }
    throw std::runtime_error("SchlumprechtNorm: iteration did not converge");
  }

  std::size_t cap_;
  double tol_;
  int max_iters_;
};

// ---------------------------------------------------------------------------
// p-convexification

class PConvexificationNorm final : public KotheNorm {
public:
  PConvexificationNorm(NormPtr base, double p) : base_(std::move(base)), p_(p) {
    if (!base_) throw std::invalid_argument("PConvexificationNorm: null base");
    if (!(p > 1.0)) throw std::invalid_argument("PConvexificationNorm: p must exceed 1");
  }

  double operator()(const KVec& x) const override {
    KVec y = KVec::zero(x.space());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = std::pow(std::fabs(x[i]), p_);
    return std::pow((*base_)(y), 1.0 / p_);
  }

  std::string kind() const override { return "pconvexification"; }
  double quasi_triangle_constant() const override {
    const double c = base_->quasi_triangle_constant();
    if (c <= 1.0) return 1.0;
    return std::pow(2.0, 1.0 - 1.0 / p_) * std::pow(c, 1.0 / p_);
  }
  bool rearrangement_invariant() const override { return base_->rearrangement_invariant(); }
  bool successive_only_params() const override { return base_->successive_only_params(); }
  nlohmann::json descriptor() const override {
    return {{"kind", "pconvexification"},
            {"params", {{"base", base_->descriptor()}, {"p", p_}}}};
  }

  const NormPtr& base() const { return base_; }
  double p() const { return p_; }

private:
  NormPtr base_;
  double p_;
};

// ---------------------------------------------------------------------------
// l_p sum of l_2 blocks

class LpSumL2BlocksNorm final : public KotheNorm {
public:
  LpSumL2BlocksNorm(double p, std::vector<std::size_t> block_sizes)
      : p_(p), blocks_(std::move(block_sizes)) {
    if (!(p > 0.0)) throw std::invalid_argument("LpSumL2BlocksNorm: p must be positive");
    if (blocks_.empty()) throw std::invalid_argument("LpSumL2BlocksNorm: empty partition");
    for (std::size_t b : blocks_)
      if (b == 0) throw std::invalid_argument("LpSumL2BlocksNorm: empty block");
  }

  std::vector<double> block_norms(const KVec& x) const {
    std::size_t total = 0;
    for (std::size_t b : blocks_) total += b;
    if (total != x.size())
      throw std::invalid_argument("LpSumL2BlocksNorm: partition does not match atom count");
    std::vector<double> s;
    s.reserve(blocks_.size());
    std::size_t pos = 0;
    for (std::size_t b : blocks_) {
      double acc = 0.0;
      for (std::size_t i = pos; i < pos + b; ++i) acc += x.weight(i) * x[i] * x[i];
      s.push_back(std::sqrt(acc));
      pos += b;
    }
    return s;
  }

  double operator()(const KVec& x) const override {
    auto s = block_norms(x);
    std::size_t nonzero = 0, last = 0;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] > 0.0) { ++nonzero; last = k; }
    if (nonzero == 0) return 0.0;
    if (nonzero == 1) return s[last];  // keeps one-block vectors exact
    if (p_ == kInfExponent) return *std::max_element(s.begin(), s.end());
    double acc = 0.0;
    for (double v : s) acc += std::pow(v, p_);
    return std::pow(acc, 1.0 / p_);
  }

  std::string kind() const override { return "lp_sum_l2_blocks"; }
  double quasi_triangle_constant() const override {
    return p_ >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / p_ - 1.0);
  }
  nlohmann::json descriptor() const override {
    return {{"kind", "lp_sum_l2_blocks"},
            {"params", {{"p", p_ == kInfExponent ? nlohmann::json("inf") : nlohmann::json(p_)},
                        {"block_sizes", blocks_}}}};
  }

  const std::vector<std::size_t>& block_sizes() const { return blocks_; }
  double p() const { return p_; }

private:
  double p_;
  std::vector<std::size_t> blocks_;
};

// ---------------------------------------------------------------------------
// Descriptor factory

inline double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfExponent;
    throw std::invalid_argument("norm descriptor: bad exponent string");
  }
  return j.get<double>();
}

inline NormPtr make_norm(const nlohmann::json& desc) {
  const std::string kind = desc.at("kind").get<std::string>();
  const nlohmann::json params = desc.value("params", nlohmann::json::object());
  if (kind == "lp") return std::make_shared<LpNorm>(exponent_from_json(params.at("p")));
  if (kind == "lorentz")
    return std::make_shared<LorentzNorm>(params.at("p").get<double>(),
                                         params.at("q").get<double>());
  if (kind == "schreier") return std::make_shared<SchreierNorm>();
  if (kind == "schreier_dual")
    return std::make_shared<SchreierDualNorm>(params.value("atom_cap", std::size_t{16}));
  if (kind == "schlumprecht")
    return std::make_shared<SchlumprechtNorm>(params.value("support_cap", std::size_t{64}));
  if (kind == "pconvexification")
    return std::make_shared<PConvexificationNorm>(make_norm(params.at("base")),
                                                  params.at("p").get<double>());
  if (kind == "lp_sum_l2_blocks")
    return std::make_shared<LpSumL2BlocksNorm>(
        exponent_from_json(params.at("p")),
        params.at("block_sizes").get<std::vector<std::size_t>>());
  throw std::invalid_argument("make_norm: unknown kind '" + kind + "'");
}

/// CLI shorthand: "lp:2", "lp:inf", "lorentz:2,1", "schreier", "schreier_dual",
/// "schlumprecht", "pconv:<base>:<p>", "blocks:<p>:4,4,4".
inline NormPtr parse_space(const std::string& text) {
  auto split = [](const std::string& s, char d) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, d)) out.push_back(tok);
    return out;
  };
  auto num = [](const std::string& s) {
    return s == "inf" ? kInfExponent : std::stod(s);
  };
  auto parts = split(text, ':');
  const std::string& head = parts.front();
  if (head == "lp" && parts.size() == 2) return std::make_shared<LpNorm>(num(parts[1]));
  if (head == "lorentz" && parts.size() == 2) {
    auto pq = split(parts[1], ',');
    if (pq.size() == 2) return std::make_shared<LorentzNorm>(num(pq[0]), num(pq[1]));
  }
  if (head == "schreier" && parts.size() == 1) return std::make_shared<SchreierNorm>();
  if (head == "schreier_dual") {
    return std::make_shared<SchreierDualNorm>(
        parts.size() > 1 ? static_cast<std::size_t>(std::stoul(parts[1])) : 16);
  }
  if (head == "schlumprecht") {
    return std::make_shared<SchlumprechtNorm>(
        parts.size() > 1 ? static_cast<std::size_t>(std::stoul(parts[1])) : 64);
  }
  if (head == "pconv" && parts.size() >= 3) {
    std::string base;
    for (std::size_t i = 1; i + 1 < parts.size(); ++i)
      base += (i > 1 ? ":" : "") + parts[i];
    return std::make_shared<PConvexificationNorm>(parse_space(base), num(parts.back()));
  }
  if (head == "blocks" && parts.size() == 3) {
    std::vector<std::size_t> blocks;
    for (const auto& t : split(parts[2], ','))
      blocks.push_back(static_cast<std::size_t>(std::stoul(t)));
    return std::make_shared<LpSumL2BlocksNorm>(num(parts[1]), blocks);
  }
  throw std::invalid_argument("parse_space: cannot parse '" + text + "'");
}

}  // namespace twistlab

#endif  // TWISTLAB_NORMS_HPP
