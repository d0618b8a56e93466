#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bknn/errors.hpp"
#include "bknn/matrix.hpp"

namespace bknn {

/// Margin used when checking that a coordinate sits strictly inside an open
/// domain interval. Guards log/division underflow near the boundary.
inline constexpr double kDomainMargin = 1e-12;

/// Which side of the asymmetric divergence the query sits on:
/// Primal measures D(q || x), Dual measures D(x || q).
enum class Direction { Primal, Dual };

enum class RuleKind { SquaredEuclidean, GKL, ItakuraSaito, BhattacharyyaLike, Hybrid };

namespace detail {

inline double sqeuc_div(double a, double b) {
  const double t = a - b;
  return t * t;
}

inline double gkl_div(double a, double b) { return a * std::log(a / b) - a + b; }

inline double is_div(double a, double b) {
  const double r = a / b;
  return r - std::log(r) - 1.0;
}

inline double bhat_div(double a, double b) {
  if (a == b) return 0.0;
  const double sb = std::sqrt(b);
  return 0.5 * sb + 0.5 * a / sb - std::sqrt(a);
}

}  // namespace detail

/// One per-coordinate divergence rule together with its open domain interval.
/// Rules are small immutable values; Hybrid composes two children with a
/// convex weight and lives on the intersection of their domains.
class CoordinateRule {
 public:
  static CoordinateRule sqeuc() {
    return CoordinateRule(RuleKind::SquaredEuclidean, -std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity());
  }
  static CoordinateRule gkl() { return CoordinateRule(RuleKind::GKL, 0.0, std::numeric_limits<double>::infinity()); }
  static CoordinateRule itakura_saito() {
    return CoordinateRule(RuleKind::ItakuraSaito, 0.0, std::numeric_limits<double>::infinity());
  }
  static CoordinateRule bhattacharyya() {
    return CoordinateRule(RuleKind::BhattacharyyaLike, 0.0, std::numeric_limits<double>::infinity());
  }
  static CoordinateRule hybrid(double weight, CoordinateRule left, CoordinateRule right);

  RuleKind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double weight() const { return weight_; }
  const CoordinateRule& left() const { return *left_; }
  const CoordinateRule& right() const { return *right_; }

  /// True when v lies strictly inside the open interval with at least `margin`
  /// clearance from each finite endpoint.
  bool contains(double v, double margin = kDomainMargin) const {
    if (!std::isfinite(v)) return false;
    if (std::isfinite(lo_) && v - lo_ < margin) return false;
    if (std::isfinite(hi_) && hi_ - v < margin) return false;
    return true;
  }

  /// D_f(a||b) for this coordinate rule. Both arguments must lie in the domain.
  double operator()(double a, double b) const {
    switch (kind_) {
      case RuleKind::SquaredEuclidean:
        return detail::sqeuc_div(a, b);
      case RuleKind::GKL:
        return detail::gkl_div(a, b);
      case RuleKind::ItakuraSaito:
        return detail::is_div(a, b);
      case RuleKind::BhattacharyyaLike:
        return detail::bhat_div(a, b);
      case RuleKind::Hybrid:
        return weight_ * (*left_)(a, b) + (1.0 - weight_) * (*right_)(a, b);
    }
    return 0.0;  // unreachable
  }

 private:
  CoordinateRule(RuleKind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

  RuleKind kind_;
  double lo_, hi_;
  double weight_ = 0.0;
  std::shared_ptr<const CoordinateRule> left_, right_;
};

/// D_f(a||b) under `rule`. Throws DomainError when either argument is outside
/// the rule's open domain.
double coord_div(const CoordinateRule& rule, double a, double b);

/// A decomposable divergence: one coordinate rule per dimension. The domain is
/// the axis-aligned box formed by the product of the rule intervals.
class Divergence {
 public:
  Divergence(std::string name, std::vector<CoordinateRule> rules, bool requires_simplex = false);

  /// d copies of the same rule.
  static Divergence uniform(std::string name, const CoordinateRule& rule, std::size_t d,
                            bool requires_simplex = false);

  /// Resolve a divergence by its registry name: "sqeuc", "gkl", "kl" (gkl plus
  /// simplex validation), "is", "bhat", or "hybrid:<name1>:<name2>:<weight>".
  static Divergence from_name(std::string_view name, std::size_t d);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return rules_.size(); }
  const CoordinateRule& rule(std::size_t i) const { return rules_[i]; }
  const CoordinateRule* rules_data() const { return rules_.data(); }
  bool requires_simplex() const { return requires_simplex_; }

  /// When every dimension shares one plain (non-hybrid) rule kind, return it.
  std::optional<RuleKind> uniform_kind() const { return uniform_kind_; }

  /// D_F(x||y) = sum of per-coordinate divergences. Validates domains.
  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  std::string name_;
  std::vector<CoordinateRule> rules_;
  bool requires_simplex_;
  std::optional<RuleKind> uniform_kind_;
};

/// D_F(x||y). Throws ShapeError on dimension mismatch, DomainError on domain
/// violations.
double full_div(const Divergence& div, std::span<const double> x, std::span<const double> y);

/// Check that p lies strictly inside the divergence's box domain (margin
/// kDomainMargin per coordinate); for simplex-restricted divergences also
/// checks the row sums to 1. Throws DomainError / ShapeError.
void validate_domain(const Divergence& div, std::span<const double> p);

/// Validate every row of a point matrix against the divergence domain.
void validate_domain(const Divergence& div, const Matrix& points);

/// Clamp coordinates below `floor` up to `floor` and renormalize each row to
/// unit sum. Returns the number of rows modified. Used to make closed-simplex
/// data (softmax outputs with exact zeros) usable with the open-domain rules.
std::size_t clamp_simplex(Matrix& points, double floor = 1e-10);

}  // namespace bknn
