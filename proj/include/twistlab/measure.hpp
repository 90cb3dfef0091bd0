#ifndef TWISTLAB_MEASURE_HPP
#define TWISTLAB_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace twistlab {

/// A finite weighted atomic measure space. Atom i carries the strictly
/// positive weight mu({i}); atoms are totally ordered by their index.
class AtomSpace {
public:
  explicit AtomSpace(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty())
      throw std::invalid_argument("AtomSpace: need at least one atom");
    for (double w : weights_)
      if (!(w > 0.0))
        throw std::invalid_argument("AtomSpace: weights must be strictly positive");
  }

  /// Counting measure on n atoms (sequence-space convention).
  static std::shared_ptr<const AtomSpace> counting(std::size_t n) {
    return std::make_shared<AtomSpace>(std::vector<double>(n, 1.0));
  }

  /// Uniform probability weights 1/n on n atoms ([0,1] discretization).
  static std::shared_ptr<const AtomSpace> uniform(std::size_t n) {
    return std::make_shared<AtomSpace>(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  double total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  bool unit_weights() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [](double w) { return w == 1.0; });
  }

  friend bool operator==(const AtomSpace& a, const AtomSpace& b) {
    return a.weights_ == b.weights_;
  }

private:
  std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const AtomSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A real-valued function on an AtomSpace; the carrier for elements of
/// every modeled Koethe space and of L0.
class KVec {
public:
  KVec(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("KVec: null space");
    if (values_.size() != space_->size())
      throw std::invalid_argument("KVec: value count does not match atom count");
  }

  static KVec zero(SpacePtr space) {
    std::size_t n = space->size();
    return KVec(std::move(space), std::vector<double>(n, 0.0));
  }

  static KVec unit(SpacePtr space, std::size_t atom) {
    KVec v = zero(std::move(space));
    v.values_.at(atom) = 1.0;
    return v;
  }

  static KVec indicator(SpacePtr space, std::size_t first, std::size_t count) {
    KVec v = zero(std::move(space));
    if (first + count > v.size())
      throw std::invalid_argument("KVec::indicator: range out of bounds");
    for (std::size_t i = first; i < first + count; ++i) v.values_[i] = 1.0;
    return v;
  }

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double weight(std::size_t i) const { return space_->weight(i); }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0; });
  }

  KVec abs() const {
    KVec r = *this;
    for (double& v : r.values_) v = std::fabs(v);
    return r;
  }

  /// Keeps the listed atoms, zeroes the rest.
  KVec restricted(const std::vector<std::size_t>& atoms) const {
    KVec r = zero(space_);
    for (std::size_t i : atoms) r.values_[i] = values_[i];
    return r;
  }

  KVec& operator+=(const KVec& o) {
    check_space(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  KVec& operator-=(const KVec& o) {
    check_space(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  KVec& operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
  }

  friend KVec operator+(KVec a, const KVec& b) { return a += b; }
  friend KVec operator-(KVec a, const KVec& b) { return a -= b; }
  friend KVec operator*(double c, KVec a) { return a *= c; }
  friend KVec operator*(KVec a, double c) { return a *= c; }
  friend KVec operator-(KVec a) { return a *= -1.0; }

  /// Pointwise product.
  friend KVec hadamard(KVec a, const KVec& b) {
    a.check_space(b);
    for (std::size_t i = 0; i < a.size(); ++i) a.values_[i] *= b.values_[i];
    return a;
  }

  /// Measure-space pairing: sum of w_i x_i y_i.
  friend double dot(const KVec& a, const KVec& b) {
    a.check_space(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += a.weight(i) * a.values_[i] * b.values_[i];
    return s;
  }

  void check_space(const KVec& o) const {
    if (!same_space(space_, o.space_))
      throw std::invalid_argument("KVec: operands live on different atom spaces");
  }

private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Exact nonzero index set; no epsilon.
inline std::vector<std::size_t> support(const KVec& x) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(i);
  return s;
}

inline bool are_disjoint(const std::vector<KVec>& xs) {
  if (xs.empty()) return true;
  std::vector<bool> seen(xs.front().size(), false);
  for (const KVec& x : xs) {
    xs.front().check_space(x);
    for (std::size_t i : support(x)) {
      if (seen[i]) return false;
      seen[i] = true;
    }
  }
  return true;
}

/// One step of the decreasing rearrangement: |value| paired with the running
/// measure T_k of the atoms delivering it.
struct RearrangementStep {
  double value;                // |x| at this step, sorted descending
  double cumulative_measure;   // T_k
};

/// Decreasing rearrangement of |x| against the atom weights. Ties broken by
/// atom order.
inline std::vector<RearrangementStep> decreasing_rearrangement(const KVec& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(x[a]) > std::fabs(x[b]);
  });
  std::vector<RearrangementStep> out;
  out.reserve(x.size());
  double t = 0.0;
  for (std::size_t i : idx) {
    t += x.weight(i);
    out.push_back({std::fabs(x[i]), t});
  }
  return out;
}

/// Rank function r_x(t): measure of {s : |x(s)| > |x(t)|, or |x(s)| = |x(t)|
/// and s <= t}. Atom order is the tiebreak.
inline KVec rank_function(const KVec& x) {
  const std::size_t n = x.size();
  KVec r = KVec::zero(x.space());
  for (std::size_t t = 0; t < n; ++t) {
    const double vt = std::fabs(x[t]);
    double m = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double vs = std::fabs(x[s]);
      if (vs > vt || (vs == vt && s <= t)) m += x.weight(s);
    }
    r[t] = m;
  }
  return r;
}

/// Shared safe-evaluation kernel for x log(num/den): zero where x vanishes
/// (the 0*log convention, applied before any log), and a domain error if
/// num or den vanishes where x does not.
inline KVec xlog_ratio(const KVec& x, const KVec& num, const KVec& den) {
  x.check_space(num);
  x.check_space(den);
  KVec r = KVec::zero(x.space());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    if (num[i] <= 0.0 || den[i] <= 0.0)
      throw std::domain_error("xlog_ratio: ratio undefined on the support of x");
    r[i] = x[i] * std::log(num[i] / den[i]);
  }
  return r;
}

/// An ordered list of pairwise disjointly supported nonzero vectors over one
/// shared AtomSpace; the unit of all singularity diagnostics.
class DisjointFamily {
public:
  explicit DisjointFamily(std::vector<KVec> members, bool successive = false)
      : members_(std::move(members)), successive_(successive) {
    if (members_.empty())
      throw std::invalid_argument("DisjointFamily: empty family");
    for (const KVec& m : members_) {
      members_.front().check_space(m);
      if (m.is_zero())
        throw std::invalid_argument("DisjointFamily: zero member");
    }
    if (!are_disjoint(members_))
      throw std::invalid_argument("DisjointFamily: supports are not pairwise disjoint");
    if (successive_) {
      for (std::size_t k = 0; k + 1 < members_.size(); ++k) {
        auto a = support(members_[k]);
        auto b = support(members_[k + 1]);
        if (a.back() >= b.front())
          throw std::invalid_argument("DisjointFamily: members are not successive");
      }
    }
  }

  const std::vector<KVec>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const KVec& operator[](std::size_t i) const { return members_[i]; }
  bool successive() const { return successive_; }
  const SpacePtr& space() const { return members_.front().space(); }

  KVec sum() const {
    KVec s = members_.front();
    for (std::size_t i = 1; i < members_.size(); ++i) s += members_[i];
    return s;
  }

private:
  std::vector<KVec> members_;
  bool successive_ = false;
};

inline void to_json(nlohmann::json& j, const KVec& x) {
  j = nlohmann::json{{"weights", x.space()->weights()}, {"values", x.values()}};
}

inline KVec kvec_from_json(const nlohmann::json& j) {
  auto space = std::make_shared<AtomSpace>(j.at("weights").get<std::vector<double>>());
  return KVec(space, j.at("values").get<std::vector<double>>());
}

}  // namespace twistlab

#endif  // TWISTLAB_MEASURE_HPP
