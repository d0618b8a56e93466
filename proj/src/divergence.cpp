#include "bknn/divergence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace bknn {

namespace {

// Row-sum slack accepted by the "kl" simplex check. Generated simplex data is
// exact to ~1e-12; CSV round-trips at 17 digits stay well inside this.
constexpr double kSimplexTol = 1e-8;

void check_in_domain(const CoordinateRule& rule, std::size_t dim, double v) {
  if (!rule.contains(v)) throw DomainError(dim, v, rule.lo(), rule.hi());
}

}  // namespace

CoordinateRule CoordinateRule::hybrid(double weight, CoordinateRule left, CoordinateRule right) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw ConfigError("hybrid weight must be in [0, 1]");
  const double lo = std::max(left.lo(), right.lo());
  const double hi = std::min(left.hi(), right.hi());
  if (!(lo < hi)) throw ConfigError("hybrid domain intersection is empty");
  CoordinateRule r(RuleKind::Hybrid, lo, hi);
  r.weight_ = weight;
  r.left_ = std::make_shared<const CoordinateRule>(std::move(left));
  r.right_ = std::make_shared<const CoordinateRule>(std::move(right));
  return r;
}

double coord_div(const CoordinateRule& rule, double a, double b) {
  check_in_domain(rule, 0, a);
  check_in_domain(rule, 0, b);
  return rule(a, b);
}

Divergence::Divergence(std::string name, std::vector<CoordinateRule> rules, bool requires_simplex)
    : name_(std::move(name)), rules_(std::move(rules)), requires_simplex_(requires_simplex) {
  if (rules_.empty()) throw ConfigError("divergence needs at least one coordinate rule");
  const RuleKind k = rules_.front().kind();
  if (k != RuleKind::Hybrid &&
      std::all_of(rules_.begin(), rules_.end(), [&](const CoordinateRule& r) { return r.kind() == k; }))
    uniform_kind_ = k;
}

Divergence Divergence::uniform(std::string name, const CoordinateRule& rule, std::size_t d,
                               bool requires_simplex) {
  if (d == 0) throw ConfigError("dimension must be >= 1");
  return Divergence(std::move(name), std::vector<CoordinateRule>(d, rule), requires_simplex);
}

Divergence Divergence::from_name(std::string_view name, std::size_t d) {
  if (name == "sqeuc") return uniform("sqeuc", CoordinateRule::sqeuc(), d);
  if (name == "gkl") return uniform("gkl", CoordinateRule::gkl(), d);
  if (name == "kl") return uniform("kl", CoordinateRule::gkl(), d, /*requires_simplex=*/true);
  if (name == "is") return uniform("is", CoordinateRule::itakura_saito(), d);
  if (name == "bhat") return uniform("bhat", CoordinateRule::bhattacharyya(), d);
  if (name.starts_with("hybrid:")) {
    // hybrid:<name1>:<name2>:<weight>, weight applied to <name1>.
    std::string_view rest = name.substr(7);
    const auto c1 = rest.find(':');
    const auto c2 = rest.rfind(':');
    if (c1 == std::string_view::npos || c2 == c1)
      throw ConfigError("hybrid divergence needs the form hybrid:<name1>:<name2>:<weight>");
    const std::string_view n1 = rest.substr(0, c1);
    const std::string_view n2 = rest.substr(c1 + 1, c2 - c1 - 1);
    const std::string_view ws = rest.substr(c2 + 1);
    double w = 0.0;
    const auto [p, ec] = std::from_chars(ws.data(), ws.data() + ws.size(), w);
    if (ec != std::errc() || p != ws.data() + ws.size())
      throw ConfigError("cannot parse hybrid weight '" + std::string(ws) + "'");
    const Divergence left = from_name(n1, 1);
    const Divergence right = from_name(n2, 1);
    return uniform(std::string(name), CoordinateRule::hybrid(w, left.rule(0), right.rule(0)), d,
                   left.requires_simplex() || right.requires_simplex());
  }
  throw ConfigError("unknown divergence '" + std::string(name) +
                    "' (expected sqeuc, gkl, kl, is, bhat, or hybrid:<a>:<b>:<w>)");
}

double Divergence::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw ShapeError("point dimension does not match divergence");
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const CoordinateRule& r = rules_[i];
    if (!r.contains(x[i])) throw DomainError(i, x[i], r.lo(), r.hi());
    if (!r.contains(y[i])) throw DomainError(i, y[i], r.lo(), r.hi());
    s += r(x[i], y[i]);
  }
  return s;
}

double full_div(const Divergence& div, std::span<const double> x, std::span<const double> y) {
  return div(x, y);
}

void validate_domain(const Divergence& div, std::span<const double> p) {
  if (p.size() != div.dim()) throw ShapeError("point dimension does not match divergence");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const CoordinateRule& r = div.rule(i);
    if (!r.contains(p[i])) throw DomainError(i, p[i], r.lo(), r.hi());
    sum += p[i];
  }
  if (div.requires_simplex() && std::abs(sum - 1.0) > kSimplexTol)
    throw DomainError(0, sum, "point is not on the unit simplex (row sum " + std::to_string(sum) + ")");
}

void validate_domain(const Divergence& div, const Matrix& points) {
  if (points.d != div.dim()) throw ShapeError("matrix dimension does not match divergence");
  for (std::size_t i = 0; i < points.n; ++i) {
    try {
      validate_domain(div, points.row(i));
    } catch (const DomainError& e) {
      throw DomainError(e.dim(), e.value(),
                        "row " + std::to_string(i) + ": " + std::string(e.what()));
    }
  }
}

std::size_t clamp_simplex(Matrix& points, double floor) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < points.n; ++i) {
    auto row = points.row(i);
    bool touched = false;
    for (double& v : row)
      if (v < floor) {
        v = floor;
        touched = true;
      }
    if (!touched) continue;
    double sum = 0.0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
    ++changed;
  }
  return changed;
}

}  // namespace bknn
