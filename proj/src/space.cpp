#include "fibplan/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace fibplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
// Probability with which point samplers return a special point.
constexpr double kSpecialPointRate = 1.0 / 16.0;
// Pair samplers: diagonal share, then antipodal share.
constexpr double kDiagonalRate = 0.25;
constexpr double kAntipodalRate = 0.25;

bool coin(Rng& rng) { return (rng() >> 63) != 0; }

Point gaussian(std::size_t dim, Rng& rng) {
  Point g{std::vector<double>(dim)};
  for (auto& c : g.coords) c = standard_normal(rng);
  return g;
}

}  // namespace

std::string_view to_string(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::euclidean_region: return "euclidean-region";
    case SpaceKind::embedded: return "embedded";
    case SpaceKind::product: return "product";
    case SpaceKind::quotient: return "quotient";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Space

Space::Space(std::string id, std::size_t ambient_dim, SpaceKind kind)
    : id_(std::move(id)), ambient_dim_(ambient_dim), kind_(kind) {}

bool Space::contains(const Point& p, double eps) const { return membership_defect(p) <= eps; }

void Space::require_member(const Point& p, double eps) const {
  const double defect = membership_defect(p);
  if (!(defect <= eps)) {
    std::ostringstream msg;
    msg << "point " << format_point(p) << " is not in " << id_ << " (defect " << defect << ")";
    throw Error(ErrorKind::domain, msg.str());
  }
}

double Space::distance(const Point& p, const Point& q) const {
  require_member(p);
  require_member(q);
  return raw_distance(p, q);
}

PointPair Space::sample_pair(Rng& rng) const {
  Point x = sample(rng);
  Point y = sample(rng);
  return {std::move(x), std::move(y)};
}

PointPair Space::perturb_pair(const PointPair& pair, double delta, Rng& rng) const {
  const double d = delta / std::sqrt(2.0);
  Point x = perturb(pair.x, d, rng);
  Point y = perturb(pair.y, d, rng);
  return {std::move(x), std::move(y)};
}

PathEvaluator Space::geodesic_evaluator(const Point&, const Point&,
                                        const std::optional<Point>&) const {
  throw Error(ErrorKind::unsupported, "no geodesics on " + id_);
}

// ---------------------------------------------------------------------------
// Sphere

Sphere::Sphere(int n) : Space("S" + std::to_string(n), static_cast<std::size_t>(n) + 1, SpaceKind::embedded), n_(n) {
  if (n < 1) throw Error(ErrorKind::unsupported, "sphere dimension must be >= 1");
}

double Sphere::membership_defect(const Point& p) const {
  if (p.dim() != ambient_dim()) return kInf;
  return std::abs(norm(p) - 1.0);
}

double Sphere::raw_distance(const Point& p, const Point& q) const {
  // stable over the whole range [0, pi]
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    diff += (p[i] - q[i]) * (p[i] - q[i]);
    sum += (p[i] + q[i]) * (p[i] + q[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

Point Sphere::sample(Rng& rng) const {
  if (uniform01(rng) < kSpecialPointRate) {
    Point axis(std::vector<double>(ambient_dim(), 0.0));
    const auto k = static_cast<std::size_t>(rng() % ambient_dim());
    axis[k] = coin(rng) ? 1.0 : -1.0;
    return axis;
  }
  Point g = gaussian(ambient_dim(), rng);
  double len = norm(g);
  while (len < 1e-6) {
    g = gaussian(ambient_dim(), rng);
    len = norm(g);
  }
  return scale(g, 1.0 / len);
}

PointPair Sphere::sample_pair(Rng& rng) const {
  const double u = uniform01(rng);
  Point x = sample(rng);
  if (u < kDiagonalRate) return {x, x};
  if (u < kDiagonalRate + kAntipodalRate) return {x, negate(x)};
  return {std::move(x), sample(rng)};
}

Point Sphere::perturb(const Point& p, double delta, Rng& rng) const {
  Point dir = gaussian(ambient_dim(), rng);
  dir = lincomb(dir, 1.0, p, -dot(dir, p));
  double len = norm(dir);
  while (len < 1e-6) {
    dir = gaussian(ambient_dim(), rng);
    dir = lincomb(dir, 1.0, p, -dot(dir, p));
    len = norm(dir);
  }
  return project(lincomb(p, std::cos(delta), dir, std::sin(delta) / len));
}

PointPair Sphere::perturb_pair(const PointPair& pair, double delta, Rng& rng) const {
  const double d = delta / std::sqrt(2.0);
  if (raw_distance(pair.x, pair.y) <= kSpaceTol && coin(rng)) {
    Point x = perturb(pair.x, d, rng);
    return {x, x};
  }
  if (antipodal(pair.x, pair.y) && coin(rng)) {
    Point x = perturb(pair.x, d, rng);
    return {x, negate(x)};
  }
  return Space::perturb_pair(pair, delta, rng);
}

Point Sphere::project(const Point& p) const {
  const double len = norm(p);
  if (len == 0.0) throw Error(ErrorKind::domain, "cannot project the origin onto " + id());
  return scale(p, 1.0 / len);
}

bool Sphere::antipodal(const Point& x, const Point& y, double tol) {
  double sum = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    sum += (x[i] + y[i]) * (x[i] + y[i]);
    diff += (x[i] - y[i]) * (x[i] - y[i]);
  }
  // arc distance from y to -x
  return 2.0 * std::atan2(std::sqrt(sum), std::sqrt(diff)) <= tol;
}

PathEvaluator Sphere::geodesic_evaluator(const Point& x, const Point& y,
                                         const std::optional<Point>& hint) const {
  if (antipodal(x, y)) {
    if (!hint) {
      throw Error(ErrorKind::ambiguity, "antipodal pair " + format_point(x) + ", " +
                                            format_point(y) + " needs an orientation hint");
    }
    Point v = lincomb(*hint, 1.0, x, -dot(*hint, x));
    const double len = norm(v);
    if (len < 1e-12) throw Error(ErrorKind::ambiguity, "orientation hint is normal to the sphere");
    v = scale(v, 1.0 / len);
    return [x, y, v](double t) -> Point {
      if (t <= 0.0) return x;
      if (t >= 1.0) return y;
      return lincomb(x, std::cos(kPi * t), v, std::sin(kPi * t));
    };
  }
  const double c = dot(x, y);
  Point w = lincomb(y, 1.0, x, -c);
  const double s = norm(w);
  if (s == 0.0) {
    return [x, y](double t) -> Point { return t >= 1.0 ? y : x; };
  }
  const double theta = std::atan2(s, c);
  w = scale(w, 1.0 / s);
  return [x, y, w, theta](double t) -> Point {
    if (t <= 0.0) return x;
    if (t >= 1.0) return y;
    return lincomb(x, std::cos(t * theta), w, std::sin(t * theta));
  };
}

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(double lo, double hi) : Space("I", 1, SpaceKind::euclidean_region), lo_(lo), hi_(hi) {}

double Interval::membership_defect(const Point& p) const {
  if (p.dim() != 1) return kInf;
  return std::max({0.0, lo_ - p[0], p[0] - hi_});
}

double Interval::raw_distance(const Point& p, const Point& q) const { return std::abs(p[0] - q[0]); }

Point Interval::sample(Rng& rng) const {
  if (uniform01(rng) < kSpecialPointRate) return Point{coin(rng) ? hi_ : lo_};
  return Point{lo_ + (hi_ - lo_) * uniform01(rng)};
}

PointPair Interval::sample_pair(Rng& rng) const {
  const double u = uniform01(rng);
  Point x = sample(rng);
  if (u < kDiagonalRate) return {x, x};
  return {std::move(x), sample(rng)};
}

Point Interval::perturb(const Point& p, double delta, Rng& rng) const {
  double v = p[0] + (coin(rng) ? delta : -delta);
  if (v > hi_) v = 2.0 * hi_ - v;
  if (v < lo_) v = 2.0 * lo_ - v;
  return Point{std::clamp(v, lo_, hi_)};
}

PointPair Interval::perturb_pair(const PointPair& pair, double delta, Rng& rng) const {
  if (pair.x == pair.y && coin(rng)) {
    Point x = perturb(pair.x, delta / std::sqrt(2.0), rng);
    return {x, x};
  }
  return Space::perturb_pair(pair, delta, rng);
}

Point Interval::project(const Point& p) const { return Point{std::clamp(p[0], lo_, hi_)}; }

PathEvaluator Interval::geodesic_evaluator(const Point& x, const Point& y,
                                           const std::optional<Point>&) const {
  return [x, y](double t) -> Point {
    if (t <= 0.0) return x;
    if (t >= 1.0) return y;
    return Point{(1.0 - t) * x[0] + t * y[0]};
  };
}

// ---------------------------------------------------------------------------
// PointSpace

PointSpace::PointSpace() : Space("pt", 0, SpaceKind::euclidean_region) {}

double PointSpace::membership_defect(const Point& p) const { return p.dim() == 0 ? 0.0 : kInf; }
double PointSpace::raw_distance(const Point&, const Point&) const { return 0.0; }
Point PointSpace::sample(Rng&) const { return Point{}; }
Point PointSpace::perturb(const Point&, double, Rng&) const { return Point{}; }
Point PointSpace::project(const Point&) const { return Point{}; }

PathEvaluator PointSpace::geodesic_evaluator(const Point&, const Point&,
                                             const std::optional<Point>&) const {
  return [](double) { return Point{}; };
}

// ---------------------------------------------------------------------------
// ProductSpace

namespace {

std::string product_id(const std::vector<SpacePtr>& factors) {
  std::string id;
  for (const auto& f : factors) {
    if (!id.empty()) id += 'x';
    id += f->id();
  }
  return id;
}

std::size_t total_dim(const std::vector<SpacePtr>& factors) {
  std::size_t d = 0;
  for (const auto& f : factors) d += f->ambient_dim();
  return d;
}

}  // namespace

ProductSpace::ProductSpace(std::vector<SpacePtr> factors, std::string id)
    : Space(id.empty() ? product_id(factors) : std::move(id), total_dim(factors), SpaceKind::product),
      factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorKind::configuration, "product of no factors");
  std::size_t offset = 0;
  for (const auto& f : factors_) {
    offsets_.push_back(offset);
    offset += f->ambient_dim();
  }
}

std::vector<Point> ProductSpace::split(const Point& p) const {
  std::vector<Point> parts;
  parts.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto first = p.coords.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    parts.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(factors_[i]->ambient_dim())));
  }
  return parts;
}

Point ProductSpace::join(const std::vector<Point>& parts) const {
  Point p;
  p.coords.reserve(ambient_dim());
  for (const auto& part : parts) p.coords.insert(p.coords.end(), part.coords.begin(), part.coords.end());
  return p;
}

double ProductSpace::membership_defect(const Point& p) const {
  if (p.dim() != ambient_dim()) return kInf;
  const auto parts = split(p);
  double s = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const double d = factors_[i]->membership_defect(parts[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

double ProductSpace::raw_distance(const Point& p, const Point& q) const {
  const auto a = split(p);
  const auto b = split(q);
  double s = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const double d = factors_[i]->raw_distance(a[i], b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

Point ProductSpace::sample(Rng& rng) const {
  std::vector<Point> parts;
  for (const auto& f : factors_) parts.push_back(f->sample(rng));
  return join(parts);
}

PointPair ProductSpace::sample_pair(Rng& rng) const {
  std::vector<Point> xs;
  std::vector<Point> ys;
  for (const auto& f : factors_) {
    auto pair = f->sample_pair(rng);
    xs.push_back(std::move(pair.x));
    ys.push_back(std::move(pair.y));
  }
  return {join(xs), join(ys)};
}

Point ProductSpace::perturb(const Point& p, double delta, Rng& rng) const {
  const double d = delta / std::sqrt(static_cast<double>(factors_.size()));
  auto parts = split(p);
  for (std::size_t i = 0; i < factors_.size(); ++i) parts[i] = factors_[i]->perturb(parts[i], d, rng);
  return join(parts);
}

PointPair ProductSpace::perturb_pair(const PointPair& pair, double delta, Rng& rng) const {
  const double d = delta / std::sqrt(static_cast<double>(factors_.size()));
  auto xs = split(pair.x);
  auto ys = split(pair.y);
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto moved = factors_[i]->perturb_pair({xs[i], ys[i]}, d, rng);
    xs[i] = std::move(moved.x);
    ys[i] = std::move(moved.y);
  }
  return {join(xs), join(ys)};
}

Point ProductSpace::project(const Point& p) const {
  auto parts = split(p);
  for (std::size_t i = 0; i < factors_.size(); ++i) parts[i] = factors_[i]->project(parts[i]);
  return join(parts);
}

PathEvaluator ProductSpace::geodesic_evaluator(const Point& x, const Point& y,
                                               const std::optional<Point>& hint) const {
  const auto xs = split(x);
  const auto ys = split(y);
  std::vector<Point> hints;
  if (hint) hints = split(*hint);
  std::vector<PathEvaluator> parts;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::optional<Point> h;
    if (hint && norm(hints[i]) > 0.0) h = hints[i];
    parts.push_back(factors_[i]->geodesic_evaluator(xs[i], ys[i], h));
  }
  return [this_parts = std::move(parts), dim = ambient_dim()](double t) {
    Point p;
    p.coords.reserve(dim);
    for (const auto& part : this_parts) {
      const Point q = part(t);
      p.coords.insert(p.coords.end(), q.coords.begin(), q.coords.end());
    }
    return p;
  };
}

// ---------------------------------------------------------------------------
// QuotientSpace

QuotientSpace::QuotientSpace(SpacePtr total, std::string id, std::vector<PointMap> transforms,
                             PointMap canonical)
    : Space(std::move(id), total->ambient_dim(), SpaceKind::quotient),
      total_(std::move(total)),
      canonical_(std::move(canonical)) {
  orbit_.push_back([](const Point& p) { return p; });
  for (auto& t : transforms) orbit_.push_back(std::move(t));
}

std::vector<Point> QuotientSpace::orbit(const Point& p) const {
  std::vector<Point> out;
  out.reserve(orbit_.size());
  for (const auto& g : orbit_) out.push_back(g(p));
  return out;
}

double QuotientSpace::membership_defect(const Point& p) const { return total_->membership_defect(p); }

double QuotientSpace::raw_distance(const Point& p, const Point& q) const {
  double best = kInf;
  for (const auto& g : orbit_) best = std::min(best, total_->raw_distance(p, g(q)));
  return best;
}

Point QuotientSpace::sample(Rng& rng) const { return canonical_(total_->sample(rng)); }

Point QuotientSpace::perturb(const Point& p, double delta, Rng& rng) const {
  return canonical_(total_->perturb(p, delta, rng));
}

Point QuotientSpace::project(const Point& p) const { return canonical_(total_->project(p)); }

// ---------------------------------------------------------------------------
// Canonical representatives and factories

Point rp_canonical(const Point& p) {
  for (double c : p.coords) {
    if (std::abs(c) > 1e-9) return c > 0.0 ? p : negate(p);
  }
  return p;
}

Point klein_involution(const Point& p) { return Point{p[0], -p[1], -p[2], -p[3]}; }

Point klein_canonical(const Point& p) {
  // omega-angle in [0, pi): omega_1 > 0, or omega_1 == 0 with omega_0 > 0
  if (p[3] > 0.0 || (p[3] == 0.0 && p[2] > 0.0)) return p;
  return klein_involution(p);
}

namespace {

SpacePtr build_named(const std::string& name);

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, SpacePtr>& registry() {
  static std::map<std::string, SpacePtr> r;
  return r;
}

SpacePtr lookup(const std::string& name) {
  {
    std::lock_guard lock(registry_mutex());
    if (auto it = registry().find(name); it != registry().end()) return it->second;
  }
  SpacePtr built = build_named(name);
  std::lock_guard lock(registry_mutex());
  return registry().emplace(name, std::move(built)).first->second;
}

SpacePtr build_named(const std::string& name) {
  if (name == "S1" || name == "S2" || name == "S3") return std::make_shared<Sphere>(name[1] - '0');
  if (name == "I") return std::make_shared<Interval>();
  if (name == "pt") return std::make_shared<PointSpace>();
  if (name == "T2") return std::make_shared<ProductSpace>(std::vector{lookup("S1"), lookup("S1")}, "T2");
  if (name == "cylinder") {
    return std::make_shared<ProductSpace>(std::vector{lookup("S1"), lookup("I")}, "cylinder");
  }
  if (name == "RP1" || name == "RP2" || name == "RP3") {
    return std::make_shared<QuotientSpace>(lookup("S" + name.substr(2)), name,
                                           std::vector<PointMap>{[](const Point& p) { return negate(p); }},
                                           rp_canonical);
  }
  if (name == "K") {
    return std::make_shared<QuotientSpace>(lookup("T2"), "K", std::vector<PointMap>{klein_involution},
                                           klein_canonical);
  }
  if (name.find('x') != std::string::npos) {
    std::vector<SpacePtr> factors;
    std::size_t start = 0;
    while (start <= name.size()) {
      const auto end = name.find('x', start);
      const auto part = name.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (part.empty()) break;
      factors.push_back(lookup(part));
      if (end == std::string::npos) {
        start = name.size() + 1;
      } else {
        start = end + 1;
      }
    }
    if (factors.size() >= 2 && start == name.size() + 1) return std::make_shared<ProductSpace>(factors, name);
  }
  throw Error(ErrorKind::configuration, "unknown space '" + name + "'");
}

}  // namespace

SpacePtr space_by_name(const std::string& name) {
  if (name == "S1xS1") return lookup("T2");
  if (name == "S1xI") return lookup("cylinder");
  return lookup(name);
}

SpacePtr sphere(int n) {
  if (n < 1 || n > 3) return std::make_shared<Sphere>(n);
  return lookup("S" + std::to_string(n));
}

SpacePtr interval() { return lookup("I"); }
SpacePtr point_space() { return lookup("pt"); }
SpacePtr torus() { return lookup("T2"); }
SpacePtr cylinder() { return lookup("cylinder"); }

SpacePtr product(std::vector<SpacePtr> factors, std::string id) {
  return std::make_shared<ProductSpace>(std::move(factors), std::move(id));
}

std::shared_ptr<const QuotientSpace> real_projective(int n) {
  if (n < 1 || n > 3) throw Error(ErrorKind::unsupported, "RP^n is provided for n = 1, 2, 3");
  return std::static_pointer_cast<const QuotientSpace>(lookup("RP" + std::to_string(n)));
}

std::shared_ptr<const QuotientSpace> klein_bottle() {
  return std::static_pointer_cast<const QuotientSpace>(lookup("K"));
}

double space_distance(const Space& space, const Point& p, const Point& q) { return space.distance(p, q); }

Point quotient_project(const Space& total, const QuotientSpace& quotient, const Point& p) {
  if (quotient.total()->id() != total.id()) {
    throw Error(ErrorKind::configuration,
                quotient.id() + " is not a quotient of " + total.id());
  }
  total.require_member(p);
  return quotient.canonical(p);
}

}  // namespace fibplan
