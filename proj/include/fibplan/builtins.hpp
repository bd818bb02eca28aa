#pragma once

#include "fibplan/constructions.hpp"

namespace fibplan {

/// Counterclockwise unit tangent (-x1, x0) of S1 at x.
Point ccw_tangent(const Point& x);
/// Rotation of a point of S1 by `angle` radians.
Point rotate_circle(const Point& x, double angle);

/// Two-rule planner on S1 x S1: F1 = {y != -x} follows the shorter arc,
/// F2 = {y = -x} turns counterclockwise.
Planner circle_planner();

/// Planner on A = diag u antidiag of S^n (the fiber product of the
/// projection S^n -> RP^n), n in {1, 2, 3}. Odd n: one piece using the
/// unit tangent field (-x1, x0, -x3, x2, ...). n = 2: the band |x.e| <= 1 - eta
/// together with the diagonal uses e - (x.e)x, the two caps |x.e| > 1 - eta
/// use e' - (x.e')x.
Planner sphere_antipodal_planner(int n);

/// Cap threshold eta for the even sphere planner, and the two fixed axes.
inline constexpr double kSphereCapEta = 0.5;
Point sphere_axis_e();
Point sphere_axis_e_prime();

/// One piece of constant paths on the diagonal.
Planner diagonal_planner(SpacePtr space);

/// product_planner(circle_planner(), circle_planner()) on T2.
Planner torus_planner();

/// One-piece shorter-arc planner on B1 = {(x, y) in S1^2 : y != -x}.
Planner shorter_arc_half_planner();
/// One-piece counterclockwise planner on B2 = {(x, y) in S1^2 : y != x}.
Planner counterclockwise_half_planner();

/// The Klein fiber product A = diag u graph of (z, w) -> (conj z, -w) on T2.
DomainPtr klein_domain();
/// The fiber product of S^n -> RP^n.
DomainPtr antipodal_domain(int n);

/// Rotation of S1 by `angle` and its inverse.
std::pair<MapSpec, MapSpec> circle_rotation(double angle);
/// (a, b) -> (b, a) on T2 (its own inverse).
MapSpec torus_factor_swap();

/// v : cylinder -> S1 the projection, u : S1 -> cylinder the inclusion at
/// height 0, h((z, s), t) = (z, t s), h' the constant homotopy.
HomotopyEquivalence cylinder_equivalence();

struct Domination {
  DomainPtr domain;
  PairHomotopy deformation;
};

/// B = {d(x, y) < pi/2} on S1, deformed onto the diagonal by sliding y to x.
Domination band_to_diagonal();
/// B = {d(x, x0) < pi/2} on S1, deformed onto {x0} x S1 by sliding x to x0.
Domination cap_to_base_fiber(const Point& x0);

// Deliberately broken planners for negative controls.

/// Drops piece `index`, leaving a coverage gap.
Planner with_gap(const Planner& pl, std::size_t index = 1);
/// Appends a duplicate of piece 0.
Planner with_overlap(const Planner& pl);
/// Sections stop at s(2/3) and never reach y.
Planner with_broken_endpoint(const Planner& pl);
/// Loop sections whose midpoint is rotated along S1 by `amount`.
Planner with_perturbed_midpoint(const Planner& pl, double amount);
/// One piece on S1 x S1 choosing the shorter arc everywhere (counterclockwise
/// at antipodes), hence discontinuous across the antipodal seam.
Planner seam_planner();

}  // namespace fibplan
