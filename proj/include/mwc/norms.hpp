#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mwc/error.hpp"

namespace mwc {

/// Coordinate subset of [k], 0-based, sorted ascending.
using CoordinateSet = std::vector<int>;

/// Permutation of [k]: the reordered vector is y[j] = x[perm[j]].
using Ordering = std::vector<int>;

/// (sum |x_i|^p)^(1/p); p may be +infinity.
struct LpNorm {
  int k = 0;
  double p = 1.0;
};

/// (sum c_i |x_i|^p)^(1/p); for p = infinity, max c_i |x_i|.
struct WeightedLpNorm {
  double p = 1.0;
  std::vector<double> c;
};

/// sum over right vertices v of max_{i in N(v)} |x_i|.
struct NeighborhoodMaxNorm {
  int k = 0;
  std::vector<std::vector<int>> neighborhoods;  // 0-based coordinates, each non-empty
};

inline constexpr int kSubsetEnumerationCap = 24;
inline constexpr int kPermutationEnumerationCap = 8;

namespace detail {

inline double lp_eval(std::span<const double> x, std::span<const double> c, double p) {
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ci = c.empty() ? 1.0 : c[i];
    if (std::isinf(p))
      scale = std::max(scale, ci * std::abs(x[i]));
    else
      scale = std::max(scale, std::abs(x[i]));
  }
  if (std::isinf(p) || scale == 0.0 || std::isinf(scale)) return scale;
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (c.empty() ? 1.0 : c[i]) * std::abs(x[i]);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (c.empty() ? 1.0 : c[i]) * std::pow(std::abs(x[i]) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace detail

/// A monotonic norm on R^k with its optional oracles.
class NormSpec {
 public:
  using Variant = std::variant<LpNorm, WeightedLpNorm, NeighborhoodMaxNorm>;

  NormSpec(LpNorm n) : v_(n) {
    if (n.k < 1) throw std::invalid_argument("norm dimension must be positive");
    if (!(n.p >= 1.0)) throw std::invalid_argument("lp norm needs p >= 1");
  }

  NormSpec(WeightedLpNorm n) : v_(n) {
    if (n.c.empty()) throw std::invalid_argument("weighted norm needs at least one weight");
    if (!(n.p >= 1.0)) throw std::invalid_argument("lp norm needs p >= 1");
    for (double ci : n.c)
      if (!(ci > 0.0) || !std::isfinite(ci)) throw std::invalid_argument("norm weights must be positive and finite");
  }

  // Right vertices with empty neighborhoods contribute nothing and are dropped.
  NormSpec(NeighborhoodMaxNorm n) {
    if (n.k < 1) throw std::invalid_argument("norm dimension must be positive");
    NeighborhoodMaxNorm kept{n.k, {}};
    for (auto& nb : n.neighborhoods) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      for (int i : nb)
        if (i < 0 || i >= n.k) throw std::invalid_argument("neighborhood coordinate out of range");
      if (!nb.empty()) kept.neighborhoods.push_back(std::move(nb));
    }
    v_ = std::move(kept);
  }

  static NormSpec lp(int k, double p) { return NormSpec(LpNorm{k, p}); }
  static NormSpec weighted_lp(double p, std::vector<double> c) { return NormSpec(WeightedLpNorm{p, std::move(c)}); }
  static NormSpec neighborhood_max(int k, std::vector<std::vector<int>> nb) { return NormSpec(NeighborhoodMaxNorm{k, std::move(nb)}); }

  const Variant& variant() const noexcept { return v_; }

  int dimension() const {
    return std::visit(
        [](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, WeightedLpNorm>)
            return static_cast<int>(n.c.size());
          else
            return n.k;
        },
        v_);
  }

  double eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension())
      throw std::invalid_argument("vector of length " + std::to_string(x.size()) + " for a norm of dimension " + std::to_string(dimension()));
    return std::visit(
        [&](const auto& n) -> double {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LpNorm>) {
            return detail::lp_eval(x, {}, n.p);
          } else if constexpr (std::is_same_v<T, WeightedLpNorm>) {
            return detail::lp_eval(x, n.c, n.p);
          } else {
            double s = 0.0;
            for (const auto& nb : n.neighborhoods) {
              double m = 0.0;
              for (int i : nb) m = std::max(m, std::abs(x[static_cast<std::size_t>(i)]));
              s += m;
            }
            return s;
          }
        },
        v_);
  }

  double operator()(std::span<const double> x) const { return eval(x); }

  bool permutation_invariant() const { return std::holds_alternative<LpNorm>(v_); }

  bool has_minimization_oracle() const {
    return !std::holds_alternative<NeighborhoodMaxNorm>(v_) || dimension() <= kSubsetEnumerationCap;
  }

  bool has_ordering_oracle() const {
    return !std::holds_alternative<NeighborhoodMaxNorm>(v_) || dimension() <= kPermutationEnumerationCap;
  }

  /// ‖1_A‖.
  double indicator_norm(const CoordinateSet& a) const {
    std::vector<double> x(static_cast<std::size_t>(dimension()), 0.0);
    for (int i : a) {
      if (i < 0 || i >= dimension()) throw std::invalid_argument("coordinate out of range");
      x[static_cast<std::size_t>(i)] = 1.0;
    }
    return eval(x);
  }

  /// Lexicographically smallest A with |A| = size minimizing ‖1_A‖.
  CoordinateSet minimization_oracle(int size) const;

  /// Lexicographically smallest permutation minimizing the norm of the reordered vector.
  Ordering ordering_oracle(std::span<const double> x) const;

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LpNorm>) {
            os << "lp:" << (std::isinf(n.p) ? std::string("inf") : fmt(n.p));
          } else if constexpr (std::is_same_v<T, WeightedLpNorm>) {
            os << "wlp:" << (std::isinf(n.p) ? std::string("inf") : fmt(n.p)) << ':';
            for (std::size_t i = 0; i < n.c.size(); ++i) os << (i ? "," : "") << fmt(n.c[i]);
          } else {
            os << "nmax:k=" << n.k << ",r=" << n.neighborhoods.size();
          }
        },
        v_);
    return os.str();
  }

 private:
  static std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  Variant v_;
};

/// Apply an ordering: y[j] = x[perm[j]].
inline std::vector<double> apply_ordering(std::span<const double> x, const Ordering& perm) {
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < perm.size(); ++j) y[j] = x[static_cast<std::size_t>(perm[j])];
  return y;
}

/// Exhaustive minimization oracle: lexicographic combinations, first strict improvement kept.
inline CoordinateSet enumerate_minimization(const NormSpec& spec, int size) {
  const int k = spec.dimension();
  if (size < 0 || size > k) throw std::invalid_argument("subset size out of range");
  if (k > kSubsetEnumerationCap) throw BudgetExceeded("subset enumeration capped at k <= 24");
  CoordinateSet cur(static_cast<std::size_t>(size));
  std::iota(cur.begin(), cur.end(), 0);
  CoordinateSet best = cur;
  double best_val = spec.indicator_norm(cur);
  while (true) {
    int i = size - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - size + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    const double v = spec.indicator_norm(cur);
    if (v < best_val - 1e-9) {
      best_val = v;
      best = cur;
    }
  }
  return best;
}

/// Exhaustive ordering oracle: permutations in lexicographic order, first strict improvement kept.
inline Ordering enumerate_ordering(const NormSpec& spec, std::span<const double> x) {
  const int k = spec.dimension();
  if (static_cast<int>(x.size()) != k) throw std::invalid_argument("vector length does not match norm dimension");
  if (k > kPermutationEnumerationCap) throw BudgetExceeded("permutation enumeration capped at k <= 8");
  Ordering perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Ordering best = perm;
  double best_val = spec.eval(apply_ordering(x, perm));
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double v = spec.eval(apply_ordering(x, perm));
    if (v < best_val - 1e-9) {
      best_val = v;
      best = perm;
    }
  }
  return best;
}

namespace detail {

// Weighted lp value of assigning values to weights, both sorted to pair large values with small weights.
inline double rearranged(std::vector<double> values, std::vector<double> weights, double p) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::sort(weights.begin(), weights.end());
  return lp_eval(values, weights, p);
}

inline CoordinateSet weighted_minimization(const WeightedLpNorm& n, int size) {
  const int k = static_cast<int>(n.c.size());
  auto best_completion = [&](const CoordinateSet& chosen, int from) {
    std::vector<double> rest(n.c.begin() + from, n.c.end());
    std::sort(rest.begin(), rest.end());
    std::vector<double> w;
    for (int i : chosen) w.push_back(n.c[static_cast<std::size_t>(i)]);
    const std::size_t need = static_cast<std::size_t>(size) - chosen.size();
    if (rest.size() < need) return std::numeric_limits<double>::infinity();
    w.insert(w.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(need));
    std::vector<double> ones(w.size(), 1.0);
    return lp_eval(ones, w, n.p);
  };
  const double opt = best_completion({}, 0);
  CoordinateSet chosen;
  for (int j = 0; j < k && static_cast<int>(chosen.size()) < size; ++j) {
    chosen.push_back(j);
    if (!near(best_completion(chosen, j + 1), opt)) chosen.pop_back();
  }
  return chosen;
}

inline Ordering weighted_ordering(const WeightedLpNorm& n, std::span<const double> x) {
  const std::size_t k = n.c.size();
  std::vector<double> ax(k);
  for (std::size_t i = 0; i < k; ++i) ax[i] = std::abs(x[i]);
  const double opt = rearranged(ax, n.c, n.p);
  Ordering perm;
  std::vector<char> used(k, 0);
  // Fix positions left to right; each choice must admit an optimal completion.
  for (std::size_t pos = 0; pos < k; ++pos) {
    for (std::size_t idx = 0; idx < k; ++idx) {
      if (used[idx]) continue;
      std::vector<double> fixed_vals, fixed_w;
      for (std::size_t j = 0; j < pos; ++j) {
        fixed_vals.push_back(ax[static_cast<std::size_t>(perm[j])]);
        fixed_w.push_back(n.c[j]);
      }
      fixed_vals.push_back(ax[idx]);
      fixed_w.push_back(n.c[pos]);
      std::vector<double> rest_vals, rest_w(n.c.begin() + static_cast<std::ptrdiff_t>(pos) + 1, n.c.end());
      for (std::size_t j = 0; j < k; ++j)
        if (!used[j] && j != idx) rest_vals.push_back(ax[j]);
      std::sort(rest_vals.begin(), rest_vals.end(), std::greater<>());
      std::sort(rest_w.begin(), rest_w.end());
      fixed_vals.insert(fixed_vals.end(), rest_vals.begin(), rest_vals.end());
      fixed_w.insert(fixed_w.end(), rest_w.begin(), rest_w.end());
      if (near(lp_eval(fixed_vals, fixed_w, n.p), opt)) {
        perm.push_back(static_cast<int>(idx));
        used[idx] = 1;
        break;
      }
    }
    require(perm.size() == pos + 1, "weighted ordering oracle lost its optimal completion");
  }
  return perm;
}

}  // namespace detail

inline CoordinateSet NormSpec::minimization_oracle(int size) const {
  const int k = dimension();
  if (size < 0 || size > k) throw std::invalid_argument("subset size out of range");
  if (!has_minimization_oracle()) throw CapabilityError("norm has no minimization oracle at this dimension");
  if (const auto* lp = std::get_if<LpNorm>(&v_)) {
    (void)lp;
    CoordinateSet a(static_cast<std::size_t>(size));
    std::iota(a.begin(), a.end(), 0);
    return a;
  }
  if (const auto* w = std::get_if<WeightedLpNorm>(&v_)) return detail::weighted_minimization(*w, size);
  return enumerate_minimization(*this, size);
}

inline Ordering NormSpec::ordering_oracle(std::span<const double> x) const {
  const int k = dimension();
  if (static_cast<int>(x.size()) != k) throw std::invalid_argument("vector length does not match norm dimension");
  if (!has_ordering_oracle()) throw CapabilityError("norm has no ordering oracle at this dimension");
  if (std::holds_alternative<LpNorm>(v_)) {
    Ordering id(static_cast<std::size_t>(k));
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (const auto* w = std::get_if<WeightedLpNorm>(&v_)) return detail::weighted_ordering(*w, x);
  return enumerate_ordering(*this, x);
}

/// ⌊log2 k⌋ for k >= 1.
inline int floor_log2(int k) { return std::bit_width(static_cast<unsigned>(k)) - 1; }

/// I_0..I_L with L = ⌊log2 k⌋: I_i is the minimizing set of size 2^i for i < L,
/// and I_L the minimizing set of size k - 2^L (empty when k is a power of two).
inline std::vector<CoordinateSet> compute_index_sets(const NormSpec& spec) {
  const int k = spec.dimension();
  const int levels = floor_log2(k);
  std::vector<CoordinateSet> out;
  for (int i = 0; i < levels; ++i) out.push_back(spec.minimization_oracle(1 << i));
  out.push_back(spec.minimization_oracle(k - (1 << levels)));
  return out;
}

}  // namespace mwc
