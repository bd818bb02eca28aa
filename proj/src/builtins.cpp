#include "fibplan/builtins.hpp"

#include <cmath>
#include <numbers>

namespace fibplan {

namespace {

constexpr double kPi = std::numbers::pi;

// Half-turn from x to -x in the plane of x and the unit tangent v.
ParamPath half_turn(const SpacePtr& space, const Point& x, const Point& y, const Point& tangent) {
  Point v = lincomb(tangent, 1.0, x, -dot(tangent, x));
  v = scale(v, 1.0 / norm(v));
  return ParamPath(
      space,
      [x, y, v](double t) -> Point {
        if (t <= 0.0) return x;
        if (t >= 1.0) return y;
        return lincomb(x, std::cos(kPi * t), v, std::sin(kPi * t));
      },
      x, y);
}

bool on_diagonal(const Space& space, const Point& x, const Point& y) {
  return space.raw_distance(x, y) <= kSpaceTol;
}

// Counterclockwise angle from x to y in [0, 2 pi).
double ccw_angle(const Point& x, const Point& y) {
  double a = std::atan2(x[0] * y[1] - x[1] * y[0], x[0] * y[0] + x[1] * y[1]);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

std::vector<std::string> corrupted(const Planner& pl, const std::string& what) {
  auto history = pl.provenance();
  history.push_back("corrupted: " + what);
  return history;
}

}  // namespace

Point ccw_tangent(const Point& x) { return Point{-x[1], x[0]}; }

Point rotate_circle(const Point& x, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Point{c * x[0] - s * x[1], s * x[0] + c * x[1]};
}

// ---------------------------------------------------------------------------

Planner circle_planner() {
  const SpacePtr s1 = sphere(1);
  Piece f1;
  f1.label = "F1";
  f1.contains = [](const Point& x, const Point& y) { return !Sphere::antipodal(x, y); };
  f1.section = [s1](const Point& x, const Point& y) { return geodesic(s1, x, y); };
  f1.frontier = [s1](const Point& x, const Point& y) {
    return std::abs(kPi - s1->raw_distance(x, y)) / std::sqrt(2.0);
  };
  Piece f2;
  f2.label = "F2";
  f2.contains = [](const Point& x, const Point& y) { return Sphere::antipodal(x, y); };
  f2.section = [s1](const Point& x, const Point& y) { return geodesic(s1, x, y, ccw_tangent(x)); };
  return Planner("circle", full_product(s1), {f1, f2});
}

Point sphere_axis_e() { return Point{0.0, 0.0, 1.0}; }
Point sphere_axis_e_prime() { return Point{1.0, 0.0, 0.0}; }

DomainPtr antipodal_domain(int n) {
  const auto q = MapSpec::quotient_projection(real_projective(n));
  return fibered_domain(q, q);
}

Planner sphere_antipodal_planner(int n) {
  if (n != 1 && n != 2 && n != 3) {
    throw Error(ErrorKind::unsupported, "sphere_antipodal_planner supports n = 1, 2, 3, got " + std::to_string(n));
  }
  const SpacePtr sn = sphere(n);
  const DomainPtr dom = antipodal_domain(n);
  const std::string name = "sphere-antipodal(" + std::to_string(n) + ")";

  if (n % 2 == 1) {
    Piece piece;
    piece.label = "A";
    piece.subparts = {"diagonal", "antidiagonal"};
    piece.contains = [dom](const Point& x, const Point& y) { return dom->contains(x, y); };
    piece.subpart_of = [sn](const Point& x, const Point& y) -> std::size_t { return on_diagonal(*sn, x, y) ? 0 : 1; };
    piece.section = [sn](const Point& x, const Point& y) {
      if (on_diagonal(*sn, x, y)) return constant_path(sn, x);
      Point v(std::vector<double>(x.dim()));
      for (std::size_t i = 0; i + 1 < x.dim(); i += 2) {
        v[i] = -x[i + 1];
        v[i + 1] = x[i];
      }
      return half_turn(sn, x, y, v);
    };
    return Planner(name, dom, {piece});
  }

  const Point e = sphere_axis_e();
  const Point e2 = sphere_axis_e_prime();
  const double cut = 1.0 - kSphereCapEta;
  Piece band;
  band.label = "band";
  band.subparts = {"diagonal", "antipodal band"};
  band.contains = [dom, sn, e, cut](const Point& x, const Point& y) {
    return dom->contains(x, y) && (on_diagonal(*sn, x, y) || std::abs(dot(x, e)) <= cut);
  };
  band.subpart_of = [sn](const Point& x, const Point& y) -> std::size_t { return on_diagonal(*sn, x, y) ? 0 : 1; };
  band.section = [sn, e](const Point& x, const Point& y) {
    if (on_diagonal(*sn, x, y)) return constant_path(sn, x);
    return half_turn(sn, x, y, lincomb(e, 1.0, x, -dot(x, e)));
  };
  Piece caps;
  caps.label = "caps";
  caps.subparts = {"upper cap", "lower cap"};
  caps.contains = [dom, sn, e, cut](const Point& x, const Point& y) {
    return dom->contains(x, y) && !on_diagonal(*sn, x, y) && std::abs(dot(x, e)) > cut;
  };
  caps.subpart_of = [e](const Point& x, const Point&) -> std::size_t { return dot(x, e) > 0.0 ? 0 : 1; };
  caps.section = [sn, e2](const Point& x, const Point& y) {
    return half_turn(sn, x, y, lincomb(e2, 1.0, x, -dot(x, e2)));
  };
  return Planner(name, dom, {band, caps});
}

Planner diagonal_planner(SpacePtr space) {
  Piece piece;
  piece.label = "diagonal";
  piece.contains = [space](const Point& x, const Point& y) { return on_diagonal(*space, x, y); };
  piece.section = [space](const Point& x, const Point&) { return constant_path(space, x); };
  return Planner("diagonal(" + space->id() + ")", diagonal_domain(space), {piece});
}

Planner torus_planner() { return product_planner(circle_planner(), circle_planner()); }

Planner shorter_arc_half_planner() {
  const SpacePtr s1 = sphere(1);
  auto dom = filtered_domain(full_product(s1), "B1",
                             [](const Point& x, const Point& y) { return !Sphere::antipodal(x, y); });
  Piece piece;
  piece.label = "shorter-arc";
  piece.contains = [](const Point&, const Point&) { return true; };
  piece.section = [s1](const Point& x, const Point& y) { return geodesic(s1, x, y); };
  piece.frontier = [s1](const Point& x, const Point& y) {
    return std::abs(kPi - s1->raw_distance(x, y)) / std::sqrt(2.0);
  };
  return Planner("shorter-arc", dom, {piece});
}

Planner counterclockwise_half_planner() {
  const SpacePtr s1 = sphere(1);
  auto dom = filtered_domain(full_product(s1), "B2",
                             [s1](const Point& x, const Point& y) { return !on_diagonal(*s1, x, y); });
  Piece piece;
  piece.label = "counterclockwise";
  piece.contains = [](const Point&, const Point&) { return true; };
  piece.section = [s1](const Point& x, const Point& y) {
    const double a = ccw_angle(x, y);
    return ParamPath(
        s1,
        [x, y, a](double t) -> Point {
          if (t <= 0.0) return x;
          if (t >= 1.0) return y;
          return rotate_circle(x, t * a);
        },
        x, y);
  };
  piece.frontier = [s1](const Point& x, const Point& y) { return s1->raw_distance(x, y) / std::sqrt(2.0); };
  return Planner("counterclockwise", dom, {piece});
}

DomainPtr klein_domain() {
  const auto q = MapSpec::quotient_projection(klein_bottle());
  return fibered_domain(q, q);
}

// ---------------------------------------------------------------------------

std::pair<MapSpec, MapSpec> circle_rotation(double angle) {
  const SpacePtr s1 = sphere(1);
  auto fwd = MapSpec::custom(s1, s1, [angle](const Point& p) { return rotate_circle(p, angle); },
                             "rot(" + std::to_string(angle) + ")");
  auto back = MapSpec::custom(s1, s1, [angle](const Point& p) { return rotate_circle(p, -angle); },
                              "rot(" + std::to_string(-angle) + ")");
  return {fwd, back};
}

MapSpec torus_factor_swap() {
  const SpacePtr t2 = torus();
  return MapSpec::custom(t2, t2, [](const Point& p) { return Point{p[2], p[3], p[0], p[1]}; }, "swap");
}

HomotopyEquivalence cylinder_equivalence() {
  const SpacePtr s1 = sphere(1);
  const SpacePtr cyl = cylinder();
  auto v = MapSpec::custom(cyl, s1, [](const Point& p) { return Point{p[0], p[1]}; }, "proj");
  auto u = MapSpec::custom(s1, cyl, [](const Point& p) { return Point{p[0], p[1], 0.0}; }, "incl0");
  HomotopySpec h{cyl, [](const Point& p, double t) { return Point{p[0], p[1], t * p[2]}; }, MapSpec::compose(u, v),
                 MapSpec::identity(cyl), {}};
  HomotopySpec h_prime{s1, [](const Point& p, double) { return p; }, MapSpec::identity(s1), MapSpec::compose(v, u),
                       [s1](const Point& p) { return constant_path(s1, p); }};
  return {u, v, h, h_prime};
}

Domination band_to_diagonal() {
  const SpacePtr s1 = sphere(1);
  auto dom = filtered_domain(full_product(s1), "band(pi/2)",
                             [s1](const Point& x, const Point& y) { return s1->raw_distance(x, y) < kPi / 2; });
  PairHomotopy d = [s1](const Point& x, const Point& y, double t) {
    return PointPair{x, s1->geodesic_evaluator(y, x, std::nullopt)(t)};
  };
  return {dom, d};
}

Domination cap_to_base_fiber(const Point& x0) {
  const SpacePtr s1 = sphere(1);
  s1->require_member(x0);
  auto dom = filtered_domain(full_product(s1), "cap(" + format_point(x0) + ", pi/2)",
                             [s1, x0](const Point& x, const Point&) { return s1->raw_distance(x, x0) < kPi / 2; });
  PairHomotopy d = [s1, x0](const Point& x, const Point& y, double t) {
    return PointPair{s1->geodesic_evaluator(x, x0, std::nullopt)(t), y};
  };
  return {dom, d};
}

// ---------------------------------------------------------------------------

Planner with_gap(const Planner& pl, std::size_t index) {
  if (index >= pl.piece_count()) throw Error(ErrorKind::configuration, "no piece " + std::to_string(index) + " to drop");
  auto pieces = pl.pieces();
  const std::string label = pieces[index].label;
  pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(index));
  return Planner(pl.name() + "-gap", pl.domain(), std::move(pieces), pl.mode(), corrupted(pl, "dropped " + label),
                 pl.base());
}

Planner with_overlap(const Planner& pl) {
  if (pl.piece_count() == 0) throw Error(ErrorKind::configuration, "no piece to duplicate");
  auto pieces = pl.pieces();
  Piece copy = pieces.front();
  copy.label += "'";
  pieces.push_back(std::move(copy));
  return Planner(pl.name() + "-overlap", pl.domain(), std::move(pieces), pl.mode(),
                 corrupted(pl, "duplicated " + pl.pieces().front().label), pl.base());
}

Planner with_broken_endpoint(const Planner& pl) {
  auto pieces = pl.pieces();
  for (auto& piece : pieces) {
    piece.section = [inner = piece.section](const Point& x, const Point& y) {
      const ParamPath s = inner(x, y);
      return ParamPath::unchecked(s.space(), [e = s.evaluator()](double t) { return e(2.0 * t / 3.0); }, x, y,
                                  s.mode(), s.base());
    };
  }
  return Planner(pl.name() + "-broken-end", pl.domain(), std::move(pieces), pl.mode(),
                 corrupted(pl, "sections stop at t = 2/3"), pl.base());
}

Planner with_perturbed_midpoint(const Planner& pl, double amount) {
  if (pl.space()->id() != "S1") throw Error(ErrorKind::configuration, "midpoint perturbation is defined on S1 only");
  auto pieces = pl.pieces();
  for (auto& piece : pieces) {
    piece.section = [inner = piece.section, amount](const Point& x, const Point& y) {
      const ParamPath s = inner(x, y);
      auto e = [e = s.evaluator(), amount](double t) {
        const double bump = std::max(0.0, 1.0 - 4.0 * std::abs(t - 0.5));
        return rotate_circle(e(t), amount * bump);
      };
      return ParamPath::unchecked(s.space(), e, s.start(), s.end(), s.mode(), s.base());
    };
  }
  return Planner(pl.name() + "-midpoint", pl.domain(), std::move(pieces), pl.mode(),
                 corrupted(pl, "midpoint rotated by " + std::to_string(amount)), pl.base());
}

Planner seam_planner() {
  const SpacePtr s1 = sphere(1);
  Piece piece;
  piece.label = "shortest";
  piece.contains = [](const Point&, const Point&) { return true; };
  piece.section = [s1](const Point& x, const Point& y) { return geodesic(s1, x, y, ccw_tangent(x)); };
  return Planner("seam", full_product(s1), {piece}, PathMode::path, {"builtin", "corrupted: one shortest-path rule"});
}

}  // namespace fibplan
