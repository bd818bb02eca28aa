#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fibplan/core.hpp"

namespace fibplan {

enum class SpaceKind { euclidean_region, embedded, product, quotient };

std::string_view to_string(SpaceKind kind) noexcept;

using PathEvaluator = std::function<Point(double)>;
using PointMap = std::function<Point(const Point&)>;

/// A configuration space given by an ambient chart, a membership predicate,
/// an intrinsic metric and a seeded sampler.
///
/// Samplers are deliberately biased: single-point samplers return special
/// points (coordinate axis points, interval endpoints) with a small fixed
/// probability and pair samplers over-represent the degenerate strata
/// (diagonal, antipodal pairs) on which planners typically switch rules.
/// Those strata have measure zero and would otherwise never be visited.
class Space {
 public:
  Space(std::string id, std::size_t ambient_dim, SpaceKind kind);
  virtual ~Space() = default;

  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  const std::string& id() const noexcept { return id_; }
  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  SpaceKind kind() const noexcept { return kind_; }

  /// Ambient distance from p to the space; 0 for exact members, +inf for a
  /// coordinate vector of the wrong length.
  virtual double membership_defect(const Point& p) const = 0;
  bool contains(const Point& p, double eps = kSpaceTol) const;
  /// Throws a domain error naming the coordinates when p is not a member.
  void require_member(const Point& p, double eps = kSpaceTol) const;

  /// Intrinsic distance; both points must be members.
  double distance(const Point& p, const Point& q) const;
  virtual double raw_distance(const Point& p, const Point& q) const = 0;

  virtual Point sample(Rng& rng) const = 0;
  /// Stratified sample of X x X.
  virtual PointPair sample_pair(Rng& rng) const;

  /// A member at intrinsic distance about delta from p.
  virtual Point perturb(const Point& p, double delta, Rng& rng) const = 0;
  /// Perturbs a pair; pairs lying on a degenerate stratum stay on it half of
  /// the time. The pair distance is about delta.
  virtual PointPair perturb_pair(const PointPair& pair, double delta, Rng& rng) const;

  /// Nearest member (re-projection after ambient arithmetic).
  virtual Point project(const Point& p) const = 0;

  /// Constant-speed minimizing path evaluator. The hint is an ambient vector
  /// at x selecting the direction where the minimizer is not unique.
  virtual PathEvaluator geodesic_evaluator(const Point& x, const Point& y,
                                           const std::optional<Point>& hint) const;

 private:
  std::string id_;
  std::size_t ambient_dim_;
  SpaceKind kind_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Unit sphere S^n in R^{n+1} with arc-length metric.
class Sphere final : public Space {
 public:
  explicit Sphere(int n);
  int n() const noexcept { return n_; }

  double membership_defect(const Point& p) const override;
  double raw_distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  PointPair sample_pair(Rng& rng) const override;
  Point perturb(const Point& p, double delta, Rng& rng) const override;
  PointPair perturb_pair(const PointPair& pair, double delta, Rng& rng) const override;
  Point project(const Point& p) const override;
  PathEvaluator geodesic_evaluator(const Point& x, const Point& y,
                                   const std::optional<Point>& hint) const override;

  /// True when y is within tol of -x.
  static bool antipodal(const Point& x, const Point& y, double tol = kSpaceTol);

 private:
  int n_;
};

/// Closed interval [lo, hi] with the absolute-value metric.
class Interval final : public Space {
 public:
  Interval(double lo = 0.0, double hi = 1.0);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double membership_defect(const Point& p) const override;
  double raw_distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  PointPair sample_pair(Rng& rng) const override;
  Point perturb(const Point& p, double delta, Rng& rng) const override;
  PointPair perturb_pair(const PointPair& pair, double delta, Rng& rng) const override;
  Point project(const Point& p) const override;
  PathEvaluator geodesic_evaluator(const Point& x, const Point& y,
                                   const std::optional<Point>& hint) const override;

 private:
  double lo_;
  double hi_;
};

/// The one-point space; target of constant maps standing in for "no constraint".
class PointSpace final : public Space {
 public:
  PointSpace();
  double membership_defect(const Point& p) const override;
  double raw_distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  Point perturb(const Point& p, double delta, Rng& rng) const override;
  Point project(const Point& p) const override;
  PathEvaluator geodesic_evaluator(const Point& x, const Point& y,
                                   const std::optional<Point>& hint) const override;
};

/// Finite product with concatenated coordinates and the flat product metric.
class ProductSpace final : public Space {
 public:
  ProductSpace(std::vector<SpacePtr> factors, std::string id = {});

  const std::vector<SpacePtr>& factors() const noexcept { return factors_; }
  std::vector<Point> split(const Point& p) const;
  Point join(const std::vector<Point>& parts) const;

  double membership_defect(const Point& p) const override;
  double raw_distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  PointPair sample_pair(Rng& rng) const override;
  Point perturb(const Point& p, double delta, Rng& rng) const override;
  PointPair perturb_pair(const PointPair& pair, double delta, Rng& rng) const override;
  Point project(const Point& p) const override;
  PathEvaluator geodesic_evaluator(const Point& x, const Point& y,
                                   const std::optional<Point>& hint) const override;

 private:
  std::vector<SpacePtr> factors_;
  std::vector<std::size_t> offsets_;
};

/// Quotient of a total space by a finite group acting through chart-level
/// transformations. Points are stored as total-space coordinates; the
/// canonical representative picks one element of each orbit.
class QuotientSpace final : public Space {
 public:
  /// `transforms` lists the non-identity group elements.
  QuotientSpace(SpacePtr total, std::string id, std::vector<PointMap> transforms,
                PointMap canonical);

  const SpacePtr& total() const noexcept { return total_; }
  /// Orbit transforms with the identity first.
  const std::vector<PointMap>& orbit_transforms() const noexcept { return orbit_; }
  std::vector<Point> orbit(const Point& p) const;
  Point canonical(const Point& p) const { return canonical_(p); }

  double membership_defect(const Point& p) const override;
  double raw_distance(const Point& p, const Point& q) const override;
  Point sample(Rng& rng) const override;
  Point perturb(const Point& p, double delta, Rng& rng) const override;
  Point project(const Point& p) const override;

 private:
  SpacePtr total_;
  std::vector<PointMap> orbit_;
  PointMap canonical_;
};

SpacePtr sphere(int n);
SpacePtr interval();
SpacePtr point_space();
SpacePtr product(std::vector<SpacePtr> factors, std::string id = {});
SpacePtr torus();     // S1 x S1, id "T2"
SpacePtr cylinder();  // S1 x [0,1], id "cylinder"
std::shared_ptr<const QuotientSpace> real_projective(int n);
std::shared_ptr<const QuotientSpace> klein_bottle();

/// Canonical orbit representatives.
Point rp_canonical(const Point& p);
Point klein_canonical(const Point& p);
/// The Klein involution (z, w) -> (conj z, -w) on T2 coordinates (z0, z1, w0, w1).
Point klein_involution(const Point& p);

/// Registry lookup: S1..S3, I, pt, T2, cylinder, RP1..RP3, K, and products
/// written with 'x' separators (e.g. "S1xI"). Repeated lookups return the
/// same instance. Unknown names raise a configuration error.
SpacePtr space_by_name(const std::string& name);

/// Intrinsic distance, checking membership of both points.
double space_distance(const Space& space, const Point& p, const Point& q);

/// Canonical representative of p in `quotient`, which must be a quotient of
/// `total`.
Point quotient_project(const Space& total, const QuotientSpace& quotient, const Point& p);

}  // namespace fibplan
