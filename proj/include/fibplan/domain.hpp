#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fibplan/maps.hpp"

namespace fibplan {

enum class DomainStructure {
  full_product,
  diagonal,
  orbit_graphs,   // union of graphs of a finite group action (contains the diagonal)
  base_fiber,     // {x0} x X
  base_fiber_right,  // X x {x0}
  filtered,
  pushforward,
  pullback,
  generic,
};

std::string_view to_string(DomainStructure s) noexcept;

/// The pair of maps (f, g) : X -> Z cutting out X x_Z X.
struct FiberMaps {
  MapSpec f;
  MapSpec g;
  double tol = kFiberTol;
};

/// A subset A of X x X with membership, a deterministic sampler and a
/// perturbation that stays inside A. Fibered domains additionally remember
/// the maps (f, g).
class Domain {
 public:
  using Membership = std::function<bool(const Point&, const Point&)>;
  using Sampler = std::function<std::vector<PointPair>(std::size_t n, std::uint64_t seed)>;
  using Perturber = std::function<std::optional<PointPair>(const PointPair&, double delta, Rng&)>;

  Domain(std::string name, SpacePtr space, DomainStructure structure, Membership membership,
         Sampler sampler, Perturber perturber, std::optional<FiberMaps> fiber = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const SpacePtr& space() const noexcept { return space_; }
  DomainStructure structure() const noexcept { return structure_; }
  const FiberMaps* fiber() const noexcept { return fiber_ ? &*fiber_ : nullptr; }

  /// Quiet membership; false for points outside X.
  bool contains(const Point& x, const Point& y) const;
  bool contains(const PointPair& p) const { return contains(p.x, p.y); }

  /// n members, deterministic in the seed. Throws for n == 0.
  std::vector<PointPair> sample(std::size_t n, std::uint64_t seed) const;

  /// A nearby member, or nothing when the perturbation left the domain.
  std::optional<PointPair> perturb(const PointPair& p, double delta, Rng& rng) const;

 private:
  std::string name_;
  SpacePtr space_;
  DomainStructure structure_;
  Membership membership_;
  Sampler sampler_;
  Perturber perturber_;
  std::optional<FiberMaps> fiber_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// X x_Z X = {(x, y) : d_Z(f(x), g(y)) <= tol}. The sampler is chosen from
/// the map tags: constants give the full product, identities the diagonal,
/// a common quotient projection the orbit graphs, (Id, cst) the base fiber.
/// Anything else falls back to rejection sampling.
DomainPtr fibered_domain(const MapSpec& f, const MapSpec& g, double tol = kFiberTol);

/// X x X, as the fiber product over the one-point space.
DomainPtr full_product(SpacePtr space);
DomainPtr diagonal_domain(SpacePtr space);
/// {x0} x X, as the fiber product of (Id, cst_x0).
DomainPtr base_fiber_domain(SpacePtr space, Point x0);

/// Members of `parent` satisfying `predicate`; sampled by rejection.
DomainPtr filtered_domain(DomainPtr parent, std::string name, Domain::Membership predicate);

/// (phi x phi)(A) for a homeomorphism phi : X -> X' with inverse phi_inv.
DomainPtr pushforward_domain(DomainPtr parent, const MapSpec& phi, const MapSpec& phi_inv);

/// (v x v)^{-1}(A) for v : X' -> X. Sampling uses the structured sampler of
/// (f.v, g.v) when there is one, otherwise pairs (u a, u b) for sampled
/// (a, b) in A that land in the preimage.
DomainPtr pullback_domain(DomainPtr parent, const MapSpec& v, const MapSpec& u);

/// Membership test that rejects points outside the source space with a domain
/// error instead of answering false.
bool fibered_domain_membership(const Domain& dom, const Point& x, const Point& y);

std::vector<PointPair> sample_fibered_domain(const Domain& dom, std::size_t n, std::uint64_t seed);

}  // namespace fibplan
