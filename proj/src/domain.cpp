#include "fibplan/domain.hpp"

#include <cmath>

namespace fibplan {

std::string_view to_string(DomainStructure s) noexcept {
  switch (s) {
    case DomainStructure::full_product: return "full-product";
    case DomainStructure::diagonal: return "diagonal";
    case DomainStructure::orbit_graphs: return "orbit-graphs";
    case DomainStructure::base_fiber: return "base-fiber";
    case DomainStructure::base_fiber_right: return "base-fiber-right";
    case DomainStructure::filtered: return "filtered";
    case DomainStructure::pushforward: return "pushforward";
    case DomainStructure::pullback: return "pullback";
    case DomainStructure::generic: return "generic";
  }
  return "unknown";
}

Domain::Domain(std::string name, SpacePtr space, DomainStructure structure, Membership membership,
               Sampler sampler, Perturber perturber, std::optional<FiberMaps> fiber)
    : name_(std::move(name)),
      space_(std::move(space)),
      structure_(structure),
      membership_(std::move(membership)),
      sampler_(std::move(sampler)),
      perturber_(std::move(perturber)),
      fiber_(std::move(fiber)) {}

bool Domain::contains(const Point& x, const Point& y) const {
  if (!space_->contains(x) || !space_->contains(y)) return false;
  return membership_(x, y);
}

std::vector<PointPair> Domain::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw Error(ErrorKind::parameter, "sample count must be >= 1");
  return sampler_(n, seed);
}

std::optional<PointPair> Domain::perturb(const PointPair& p, double delta, Rng& rng) const {
  return perturber_(p, delta, rng);
}

namespace {

std::size_t rejection_budget(std::size_t n) { return 1000 * n + 10000; }

[[noreturn]] void exhausted(const std::string& name, std::size_t accepted, std::size_t wanted) {
  throw Error(ErrorKind::sampling_exhausted, "rejection sampling of " + name + " accepted " +
                                                  std::to_string(accepted) + " of " + std::to_string(wanted) +
                                                  " pairs within the retry budget");
}

Domain::Perturber perturb_then_filter(SpacePtr space, Domain::Membership membership) {
  return [space = std::move(space), membership = std::move(membership)](
             const PointPair& p, double delta, Rng& rng) -> std::optional<PointPair> {
    auto q = space->perturb_pair(p, delta, rng);
    if (space->contains(q.x) && space->contains(q.y) && membership(q.x, q.y)) return q;
    return std::nullopt;
  };
}

Domain::Sampler rejection_sampler(SpacePtr space, Domain::Membership membership, std::string name) {
  return [space = std::move(space), membership = std::move(membership), name = std::move(name)](
             std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<PointPair> out;
    out.reserve(n);
    const std::size_t budget = rejection_budget(n);
    for (std::size_t attempt = 0; attempt < budget && out.size() < n; ++attempt) {
      auto p = space->sample_pair(rng);
      if (membership(p.x, p.y)) out.push_back(std::move(p));
    }
    if (out.size() < n) exhausted(name, out.size(), n);
    return out;
  };
}

bool same_quotient(const MapSpec& f, const MapSpec& g) {
  return f.tag() == MapTag::quotient_projection && g.tag() == MapTag::quotient_projection &&
         f.quotient()->id() == g.quotient()->id();
}

}  // namespace

DomainPtr fibered_domain(const MapSpec& f, const MapSpec& g, double tol) {
  if (f.source()->id() != g.source()->id() || f.target()->id() != g.target()->id()) {
    throw Error(ErrorKind::configuration, "fiber maps " + f.name() + " and " + g.name() +
                                              " do not share source and target");
  }
  const SpacePtr space = f.source();
  const SpacePtr target = f.target();
  Domain::Membership membership = [f, g, tol, target](const Point& x, const Point& y) {
    return target->raw_distance(f(x), g(y)) <= tol;
  };
  FiberMaps maps{f, g, tol};
  const std::string name = space->id() + " x_{" + f.name() + "," + g.name() + "} " + space->id();

  if (f.tag() == MapTag::constant && g.tag() == MapTag::constant &&
      target->raw_distance(*f.base(), *g.base()) <= tol) {
    Domain::Sampler sampler = [space](std::size_t n, std::uint64_t seed) {
      Rng rng(seed);
      std::vector<PointPair> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back(space->sample_pair(rng));
      return out;
    };
    Domain::Perturber perturber = [space](const PointPair& p, double delta, Rng& rng) -> std::optional<PointPair> {
      return space->perturb_pair(p, delta, rng);
    };
    return std::make_shared<Domain>(space->id() + "^2", space, DomainStructure::full_product, membership,
                                    sampler, perturber, maps);
  }

  if (f.tag() == MapTag::identity && g.tag() == MapTag::identity) {
    Domain::Sampler sampler = [space](std::size_t n, std::uint64_t seed) {
      Rng rng(seed);
      std::vector<PointPair> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        Point x = space->sample(rng);
        out.push_back({x, x});
      }
      return out;
    };
    Domain::Perturber perturber = [space](const PointPair& p, double delta, Rng& rng) -> std::optional<PointPair> {
      Point x = space->perturb(p.x, delta / std::sqrt(2.0), rng);
      return PointPair{x, x};
    };
    return std::make_shared<Domain>("diag(" + space->id() + ")", space, DomainStructure::diagonal, membership,
                                    sampler, perturber, maps);
  }

  if (same_quotient(f, g)) {
    auto quotient = f.quotient();
    Domain::Sampler sampler = [space, quotient](std::size_t n, std::uint64_t seed) {
      Rng rng(seed);
      const auto& transforms = quotient->orbit_transforms();
      std::vector<PointPair> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        Point x = space->sample(rng);
        Point y = transforms[i % transforms.size()](x);
        out.push_back({std::move(x), std::move(y)});
      }
      return out;
    };
    Domain::Perturber perturber = [space, quotient, tol](const PointPair& p, double delta,
                                                         Rng& rng) -> std::optional<PointPair> {
      for (const auto& g : quotient->orbit_transforms()) {
        if (space->raw_distance(p.y, g(p.x)) <= tol) {
          Point x = space->perturb(p.x, delta / std::sqrt(2.0), rng);
          Point y = g(x);
          return PointPair{std::move(x), std::move(y)};
        }
      }
      return std::nullopt;
    };
    return std::make_shared<Domain>(space->id() + " x_" + quotient->id() + " " + space->id(), space,
                                    DomainStructure::orbit_graphs, membership, sampler, perturber, maps);
  }

  const bool endo = target->id() == space->id();
  if (endo && f.tag() == MapTag::identity && g.tag() == MapTag::constant) {
    const Point x0 = *g.base();
    Domain::Sampler sampler = [space, x0](std::size_t n, std::uint64_t seed) {
      Rng rng(seed);
      std::vector<PointPair> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back({x0, space->sample(rng)});
      return out;
    };
    Domain::Perturber perturber = [space, x0](const PointPair& p, double delta, Rng& rng) -> std::optional<PointPair> {
      return PointPair{x0, space->perturb(p.y, delta, rng)};
    };
    return std::make_shared<Domain>("{" + format_point(x0) + "} x " + space->id(), space,
                                    DomainStructure::base_fiber, membership, sampler, perturber, maps);
  }
  if (endo && f.tag() == MapTag::constant && g.tag() == MapTag::identity) {
    const Point x0 = *f.base();
    Domain::Sampler sampler = [space, x0](std::size_t n, std::uint64_t seed) {
      Rng rng(seed);
      std::vector<PointPair> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back({space->sample(rng), x0});
      return out;
    };
    Domain::Perturber perturber = [space, x0](const PointPair& p, double delta, Rng& rng) -> std::optional<PointPair> {
      return PointPair{space->perturb(p.x, delta, rng), x0};
    };
    return std::make_shared<Domain>(space->id() + " x {" + format_point(x0) + "}", space,
                                    DomainStructure::base_fiber_right, membership, sampler, perturber, maps);
  }

  return std::make_shared<Domain>(name, space, DomainStructure::generic, membership,
                                  rejection_sampler(space, membership, name),
                                  perturb_then_filter(space, membership), maps);
}

DomainPtr full_product(SpacePtr space) {
  const auto pt = point_space();
  return fibered_domain(MapSpec::constant(space, pt, Point{}), MapSpec::constant(space, pt, Point{}));
}

DomainPtr diagonal_domain(SpacePtr space) {
  return fibered_domain(MapSpec::identity(space), MapSpec::identity(space));
}

DomainPtr base_fiber_domain(SpacePtr space, Point x0) {
  return fibered_domain(MapSpec::identity(space), MapSpec::constant(space, space, std::move(x0)));
}

DomainPtr filtered_domain(DomainPtr parent, std::string name, Domain::Membership predicate) {
  const SpacePtr space = parent->space();
  Domain::Membership membership = [parent, predicate](const Point& x, const Point& y) {
    return parent->contains(x, y) && predicate(x, y);
  };
  Domain::Sampler sampler = [parent, predicate, name](std::size_t n, std::uint64_t seed) {
    std::vector<PointPair> out;
    out.reserve(n);
    const std::size_t budget = rejection_budget(n);
    std::size_t drawn = 0;
    for (std::uint64_t batch = 0; out.size() < n && drawn < budget; ++batch) {
      const std::size_t want = 2 * (n - out.size()) + 16;
      for (auto& p : parent->sample(want, mix_seed(seed, batch, 0xF11))) {
        if (out.size() < n && predicate(p.x, p.y)) out.push_back(std::move(p));
      }
      drawn += want;
    }
    if (out.size() < n) exhausted(name, out.size(), n);
    return out;
  };
  Domain::Perturber perturber = [parent, predicate](const PointPair& p, double delta,
                                                    Rng& rng) -> std::optional<PointPair> {
    auto q = parent->perturb(p, delta, rng);
    if (q && predicate(q->x, q->y)) return q;
    return std::nullopt;
  };
  return std::make_shared<Domain>(std::move(name), space, DomainStructure::filtered, membership, sampler,
                                  perturber);
}

DomainPtr pushforward_domain(DomainPtr parent, const MapSpec& phi, const MapSpec& phi_inv) {
  const SpacePtr space = phi.target();
  Domain::Membership membership = [parent, phi_inv](const Point& x, const Point& y) {
    return parent->contains(phi_inv(x), phi_inv(y));
  };
  Domain::Sampler sampler = [parent, phi](std::size_t n, std::uint64_t seed) {
    auto pairs = parent->sample(n, seed);
    for (auto& p : pairs) p = {phi(p.x), phi(p.y)};
    return pairs;
  };
  Domain::Perturber perturber = [parent, phi, phi_inv](const PointPair& p, double delta,
                                                       Rng& rng) -> std::optional<PointPair> {
    auto q = parent->perturb({phi_inv(p.x), phi_inv(p.y)}, delta, rng);
    if (!q) return std::nullopt;
    return PointPair{phi(q->x), phi(q->y)};
  };
  std::optional<FiberMaps> fiber;
  if (const auto* fm = parent->fiber()) {
    fiber = FiberMaps{MapSpec::compose(fm->f, phi_inv), MapSpec::compose(fm->g, phi_inv), fm->tol};
  }
  return std::make_shared<Domain>(phi.name() + "(" + parent->name() + ")", space, DomainStructure::pushforward,
                                  membership, sampler, perturber, std::move(fiber));
}

DomainPtr pullback_domain(DomainPtr parent, const MapSpec& v, const MapSpec& u) {
  const SpacePtr space = v.source();
  const auto* fm = parent->fiber();
  const bool plain_fiber_product =
      fm != nullptr && parent->structure() != DomainStructure::filtered &&
      parent->structure() != DomainStructure::pushforward && parent->structure() != DomainStructure::pullback;
  if (plain_fiber_product) {
    auto structured = fibered_domain(MapSpec::compose(fm->f, v), MapSpec::compose(fm->g, v), fm->tol);
    if (structured->structure() != DomainStructure::generic) return structured;
  }

  Domain::Membership membership = [parent, v](const Point& x, const Point& y) {
    return parent->contains(v(x), v(y));
  };
  const std::string name = v.name() + "^-1(" + parent->name() + ")";
  Domain::Sampler sampler = [parent, u, space, membership, name](std::size_t n, std::uint64_t seed) {
    std::vector<PointPair> out;
    out.reserve(n);
    const std::size_t budget = rejection_budget(n);
    std::size_t drawn = 0;
    for (std::uint64_t batch = 0; out.size() < n && drawn < budget; ++batch) {
      const std::size_t want = n - out.size() + 16;
      for (const auto& p : parent->sample(want, mix_seed(seed, batch, 0x9B))) {
        PointPair q{u(p.x), u(p.y)};
        if (out.size() < n && space->contains(q.x) && space->contains(q.y) && membership(q.x, q.y)) {
          out.push_back(std::move(q));
        }
      }
      drawn += want;
    }
    if (out.size() < n) exhausted(name, out.size(), n);
    return out;
  };
  std::optional<FiberMaps> fiber;
  if (fm) fiber = FiberMaps{MapSpec::compose(fm->f, v), MapSpec::compose(fm->g, v), fm->tol};
  return std::make_shared<Domain>(name, space, DomainStructure::pullback, membership, sampler,
                                  perturb_then_filter(space, membership), std::move(fiber));
}

bool fibered_domain_membership(const Domain& dom, const Point& x, const Point& y) {
  dom.space()->require_member(x);
  dom.space()->require_member(y);
  return dom.contains(x, y);
}

std::vector<PointPair> sample_fibered_domain(const Domain& dom, std::size_t n, std::uint64_t seed) {
  return dom.sample(n, seed);
}

}  // namespace fibplan
