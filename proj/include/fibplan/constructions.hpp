#pragma once

#include <cstdint>
#include <vector>

#include "fibplan/planner.hpp"

namespace fibplan {

/// Sampling used by constructions that decide things from samples (dropping
/// empty pieces, checking inverse pairs and homotopy end maps).
struct ProbeOptions {
  std::size_t samples = 4096;
  std::uint64_t seed = 0x5EED;
  double eps = kSpaceTol;
};

/// Restricts a planner on X x X to a subdomain. Pieces are intersected with
/// the domain and pieces without a probed member are dropped.
Planner restrict_planner(const Planner& pl, DomainPtr dom, const ProbeOptions& probe = {});

/// Conjugates every section by a homeomorphism phi : X -> X'. Piece count is
/// preserved.
Planner transport_bundle_iso(const Planner& pl, const MapSpec& phi, const MapSpec& phi_inv,
                             const ProbeOptions& probe = {});

/// Data of a homotopy equivalence v : X' -> X with inverse u : X -> X'.
/// `h` runs from u.v (t = 0) to the identity of X' (t = 1); `h_prime` runs
/// from the identity of X (t = 0) to v.u (t = 1).
struct HomotopyEquivalence {
  MapSpec u;
  MapSpec v;
  HomotopySpec h;
  HomotopySpec h_prime;
};

/// Moves a planner for (f, g) on X to a planner for (f.v, g.v) on X'. The
/// section at (x', y') runs back along h from x' to u v x', follows
/// u[s(v x', v y')] and runs forward along h to y'.
Planner transport_fhe(const Planner& pl, const HomotopyEquivalence& eq, const ProbeOptions& probe = {});

/// The opposite direction: a planner on X' becomes one on X. The section at
/// (x, y) follows h'(x), then v[s'(u x, u y)], then h'(y) backwards.
Planner transport_fhe_inverse(const Planner& pl, const HomotopyEquivalence& eq,
                              const ProbeOptions& probe = {});

/// Extends a planner on A to a domain B whose inclusion deforms into A
/// through `deformation` (identity at t = 0, values in A at t = 1).
Planner dominate_planner(const Planner& pl, DomainPtr b, const PairHomotopy& deformation,
                         const ProbeOptions& probe = {});

/// s -> s * reverse(s): free loops at x through y at t = 1/2.
Planner to_loop_planner(const Planner& pl);

/// Category cover of X from a planner whose domain is the fiber product of
/// (f, cst_x0): V_i = {y : (x0, y) in piece i}, h_i(y, t) = s_i(x0, y)(t).
CatWitness planner_to_cat_cover(const Planner& pl, const ProbeOptions& probe = {});

/// Planner on {x0} x X with sections (x0, y) -> h_i(y, .). Overlapping cover
/// sets are made disjoint in entry order.
Planner cat_cover_to_planner(const CatWitness& w);

/// Based loops at x0: h_i(y, .) followed by its reverse.
Planner based_loop_planner_from_cat(const CatWitness& w);

/// Combines planners whose domains cover X x X. Pieces of later planners lose
/// the domains of earlier ones; pieces without a probed member are dropped.
Planner combine_cover_planners(const std::vector<Planner>& planners, const ProbeOptions& probe = {});

/// Planner on (X x Y)^2 with pieces W_k = union over i + j = k of
/// piece_i(X) x piece_j(Y), acting coordinatewise; a + b - 1 pieces.
Planner product_planner(const Planner& a, const Planner& b);

}  // namespace fibplan
