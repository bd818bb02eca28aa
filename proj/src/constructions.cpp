#include "fibplan/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fibplan {

namespace {

std::vector<std::string> extend(std::vector<std::string> history, std::string step) {
  history.push_back(std::move(step));
  return history;
}

std::vector<Point> probe_points(const Space& space, const ProbeOptions& probe, std::uint64_t salt) {
  Rng rng(mix_seed(probe.seed, 0, salt));
  std::vector<Point> pts;
  pts.reserve(probe.samples);
  for (std::size_t i = 0; i < probe.samples; ++i) pts.push_back(space.sample(rng));
  return pts;
}

void require_path_mode(const Planner& pl, const char* op) {
  if (pl.mode() != PathMode::path) {
    throw Error(ErrorKind::mode, std::string(op) + " needs a path-mode planner, got " +
                                     std::string(to_string(pl.mode())) + " (" + pl.name() + ")");
  }
}

void require_same_space(const Space& a, const Space& b, const char* what) {
  if (a.id() != b.id()) throw Error(ErrorKind::configuration, std::string(what) + ": " + a.id() + " != " + b.id());
}

}  // namespace

// ---------------------------------------------------------------------------

Planner restrict_planner(const Planner& pl, DomainPtr dom, const ProbeOptions& probe) {
  if (pl.domain()->structure() != DomainStructure::full_product) {
    throw Error(ErrorKind::precondition, "restriction needs a planner on the full product, " + pl.name() +
                                             " lives on " + pl.domain()->name());
  }
  require_same_space(*pl.space(), *dom->space(), "restriction to a domain of another space");

  const auto samples = dom->sample(probe.samples, probe.seed);
  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    const bool met = std::any_of(samples.begin(), samples.end(),
                                 [&](const PointPair& s) { return piece.contains(s.x, s.y); });
    if (!met) continue;
    Piece restricted = piece;
    restricted.contains = [dom, inner = piece.contains](const Point& x, const Point& y) {
      return dom->contains(x, y) && inner(x, y);
    };
    pieces.push_back(std::move(restricted));
  }
  return Planner(pl.name() + "|" + dom->name(), dom, std::move(pieces), pl.mode(),
                 extend(pl.provenance(), "restricted to " + dom->name()), pl.base());
}

// ---------------------------------------------------------------------------

Planner transport_bundle_iso(const Planner& pl, const MapSpec& phi, const MapSpec& phi_inv,
                             const ProbeOptions& probe) {
  require_same_space(*phi.source(), *pl.space(), "phi must start at the planner's space");
  require_same_space(*phi_inv.source(), *phi.target(), "phi_inv must start at phi's target");
  require_same_space(*phi_inv.target(), *phi.source(), "phi_inv must end at phi's source");

  const auto xs = probe_points(*phi.source(), probe, 1);
  const auto ys = probe_points(*phi.target(), probe, 2);
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, phi.source()->raw_distance(phi_inv(phi(x)), x));
  for (const auto& y : ys) worst = std::max(worst, phi.target()->raw_distance(phi(phi_inv(y)), y));
  if (!(worst <= probe.eps)) {
    std::ostringstream msg;
    msg << phi.name() << " and " << phi_inv.name() << " are not mutually inverse (deviation " << worst << ")";
    throw Error(ErrorKind::not_an_isomorphism, msg.str());
  }

  const SpacePtr target = phi.target();
  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    Piece moved;
    moved.label = piece.label;
    moved.subparts = piece.subparts;
    moved.contains = [phi_inv, inner = piece.contains](const Point& x, const Point& y) {
      return inner(phi_inv(x), phi_inv(y));
    };
    moved.subpart_of = [phi_inv, piece](const Point& x, const Point& y) {
      return piece.subpart(phi_inv(x), phi_inv(y));
    };
    moved.frontier = [phi_inv, piece](const Point& x, const Point& y) {
      return piece.frontier_distance(phi_inv(x), phi_inv(y));
    };
    moved.section = [phi, phi_inv, target, inner = piece.section](const Point& x, const Point& y) {
      const ParamPath s = inner(phi_inv(x), phi_inv(y));
      return ParamPath::unchecked(target, [phi, e = s.evaluator()](double t) { return phi(e(t)); }, x,
                                  s.mode() == PathMode::path ? y : x, s.mode(),
                                  s.base() ? std::optional<Point>(phi(*s.base())) : std::nullopt);
    };
    pieces.push_back(std::move(moved));
  }
  std::optional<Point> base;
  if (pl.base()) base = phi(*pl.base());
  return Planner(phi.name() + "(" + pl.name() + ")", pushforward_domain(pl.domain(), phi, phi_inv),
                 std::move(pieces), pl.mode(), extend(pl.provenance(), "transported along " + phi.name()),
                 std::move(base));
}

// ---------------------------------------------------------------------------

namespace {

void check_equivalence(const HomotopyEquivalence& eq, const ProbeOptions& probe) {
  const SpacePtr& x = eq.u.source();
  const SpacePtr& xp = eq.u.target();
  require_same_space(*eq.v.source(), *xp, "v must start where u ends");
  require_same_space(*eq.v.target(), *x, "v must end where u starts");
  require_same_space(*eq.h.space, *xp, "h must live on X'");
  require_same_space(*eq.h_prime.space, *x, "h' must live on X");

  auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_homotopy, what); };
  if (eq.h.at_end.tag() != MapTag::identity) fail("h must end at the identity of " + xp->id());
  if (eq.h_prime.at_start.tag() != MapTag::identity) fail("h' must start at the identity of " + x->id());

  const auto xps = probe_points(*xp, probe, 3);
  const auto xs = probe_points(*x, probe, 4);
  const auto uv = MapSpec::compose(eq.u, eq.v);
  const auto vu = MapSpec::compose(eq.v, eq.u);
  std::ostringstream msg;
  if (double d = max_map_deviation(eq.h.at_start, uv, xps); !(d <= probe.eps)) {
    msg << "h starts at " << eq.h.at_start.name() << ", not at u.v (deviation " << d << ")";
    fail(msg.str());
  }
  if (double d = max_map_deviation(eq.h_prime.at_end, vu, xs); !(d <= probe.eps)) {
    msg << "h' ends at " << eq.h_prime.at_end.name() << ", not at v.u (deviation " << d << ")";
    fail(msg.str());
  }
  if (double d = homotopy_endpoint_defect(eq.h, xps); !(d <= probe.eps)) {
    msg << "h disagrees with its declared end maps (deviation " << d << ")";
    fail(msg.str());
  }
  if (double d = homotopy_endpoint_defect(eq.h_prime, xs); !(d <= probe.eps)) {
    msg << "h' disagrees with its declared end maps (deviation " << d << ")";
    fail(msg.str());
  }
}

// Pulls a piece back along `pull` (X' -> X), rebuilding the section with `section`.
Piece pull_piece(const Piece& piece, const MapSpec& pull, Section section) {
  Piece out;
  out.label = piece.label;
  out.subparts = piece.subparts;
  out.contains = [pull, inner = piece.contains](const Point& x, const Point& y) { return inner(pull(x), pull(y)); };
  out.subpart_of = [pull, piece](const Point& x, const Point& y) { return piece.subpart(pull(x), pull(y)); };
  out.frontier = [pull, piece](const Point& x, const Point& y) {
    return piece.frontier_distance(pull(x), pull(y));
  };
  out.section = std::move(section);
  return out;
}

}  // namespace

Planner transport_fhe(const Planner& pl, const HomotopyEquivalence& eq, const ProbeOptions& probe) {
  require_path_mode(pl, "transport_fhe");
  require_same_space(*pl.space(), *eq.u.source(), "u must start at the planner's space");
  check_equivalence(eq, probe);

  const SpacePtr xp = eq.u.target();
  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    Section section = [eq, xp, inner = piece.section](const Point& x, const Point& y) {
      const ParamPath middle = map_path(eq.u, inner(eq.v(x), eq.v(y)));
      const ParamPath glued = concat_thirds(reverse(eq.h.track(x)), middle, eq.h.track(y));
      return ParamPath::unchecked(xp, glued.evaluator(), x, y);
    };
    pieces.push_back(pull_piece(piece, eq.v, std::move(section)));
  }
  return Planner("fhe(" + pl.name() + ")", pullback_domain(pl.domain(), eq.v, eq.u), std::move(pieces),
                 PathMode::path, extend(pl.provenance(), "transported to " + xp->id() + " along " + eq.v.name()));
}

Planner transport_fhe_inverse(const Planner& pl, const HomotopyEquivalence& eq, const ProbeOptions& probe) {
  require_path_mode(pl, "transport_fhe_inverse");
  require_same_space(*pl.space(), *eq.u.target(), "the planner must live on u's target");
  check_equivalence(eq, probe);

  const SpacePtr x_space = eq.u.source();
  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    Section section = [eq, x_space, inner = piece.section](const Point& x, const Point& y) {
      const ParamPath middle = map_path(eq.v, inner(eq.u(x), eq.u(y)));
      const ParamPath glued = concat_thirds(eq.h_prime.track(x), middle, reverse(eq.h_prime.track(y)));
      return ParamPath::unchecked(x_space, glued.evaluator(), x, y);
    };
    pieces.push_back(pull_piece(piece, eq.u, std::move(section)));
  }
  return Planner("fhe_inv(" + pl.name() + ")", pullback_domain(pl.domain(), eq.u, eq.v), std::move(pieces),
                 PathMode::path,
                 extend(pl.provenance(), "transported to " + x_space->id() + " along " + eq.u.name()));
}

// ---------------------------------------------------------------------------

Planner dominate_planner(const Planner& pl, DomainPtr b, const PairHomotopy& deformation,
                         const ProbeOptions& probe) {
  require_path_mode(pl, "dominate_planner");
  require_same_space(*pl.space(), *b->space(), "dominated domain must live on the planner's space");
  const DomainPtr a = pl.domain();
  const SpacePtr space = pl.space();

  for (const auto& s : b->sample(probe.samples, probe.seed)) {
    const PointPair start = deformation(s.x, s.y, 0.0);
    const double moved = std::hypot(space->raw_distance(start.x, s.x), space->raw_distance(start.y, s.y));
    if (!(moved <= probe.eps)) {
      throw Error(ErrorKind::invalid_homotopy, "deformation does not start at the inclusion at (" +
                                                   format_point(s.x) + ", " + format_point(s.y) + ")");
    }
    const PointPair end = deformation(s.x, s.y, 1.0);
    if (!a->contains(end.x, end.y)) {
      throw Error(ErrorKind::domination, "deformation of (" + format_point(s.x) + ", " + format_point(s.y) +
                                             ") ends at (" + format_point(end.x) + ", " + format_point(end.y) +
                                             ") outside " + a->name());
    }
  }

  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    Piece out;
    out.label = piece.label;
    out.subparts = piece.subparts;
    out.contains = [b, deformation, inner = piece.contains](const Point& x, const Point& y) {
      if (!b->contains(x, y)) return false;
      const PointPair end = deformation(x, y, 1.0);
      return inner(end.x, end.y);
    };
    out.subpart_of = [deformation, piece](const Point& x, const Point& y) {
      const PointPair end = deformation(x, y, 1.0);
      return piece.subpart(end.x, end.y);
    };
    out.frontier = [deformation, piece](const Point& x, const Point& y) {
      const PointPair end = deformation(x, y, 1.0);
      return piece.frontier_distance(end.x, end.y);
    };
    out.section = [space, deformation, inner = piece.section](const Point& x, const Point& y) {
      const PointPair end = deformation(x, y, 1.0);
      const ParamPath first = ParamPath::unchecked(
          space, [deformation, x, y](double t) { return deformation(x, y, t).x; }, x, end.x);
      const ParamPath second = ParamPath::unchecked(
          space, [deformation, x, y](double t) { return deformation(x, y, t).y; }, y, end.y);
      const ParamPath glued = concat_thirds(first, inner(end.x, end.y), reverse(second));
      return ParamPath::unchecked(space, glued.evaluator(), x, y);
    };
    pieces.push_back(std::move(out));
  }
  return Planner("dom(" + pl.name() + ")", b, std::move(pieces), PathMode::path,
                 extend(pl.provenance(), "dominated onto " + b->name()));
}

// ---------------------------------------------------------------------------

Planner to_loop_planner(const Planner& pl) {
  require_path_mode(pl, "to_loop_planner");
  std::vector<Piece> pieces;
  for (const auto& piece : pl.pieces()) {
    Piece out = piece;
    out.section = [inner = piece.section](const Point& x, const Point& y) {
      const ParamPath s = inner(x, y);
      const ParamPath loop = concat_halves(s, reverse(s));
      return ParamPath::unchecked(loop.space(), loop.evaluator(), x, x, PathMode::free_loop);
    };
    pieces.push_back(std::move(out));
  }
  return Planner("loop(" + pl.name() + ")", pl.domain(), std::move(pieces), PathMode::free_loop,
                 extend(pl.provenance(), "converted to free loops"));
}

// ---------------------------------------------------------------------------

CatWitness planner_to_cat_cover(const Planner& pl, const ProbeOptions& probe) {
  require_path_mode(pl, "planner_to_cat_cover");
  const FiberMaps* fm = pl.domain()->fiber();
  const SpacePtr space = pl.space();
  if (fm == nullptr || fm->g.tag() != MapTag::constant || fm->g.target()->id() != space->id()) {
    throw Error(ErrorKind::precondition,
                "category cover needs a planner for (f, cst_x0) with values in X, got " + pl.domain()->name());
  }
  const Point x0 = *fm->g.base();
  if (!(space->raw_distance(fm->f(x0), x0) <= fm->tol)) {
    throw Error(ErrorKind::precondition, "base point " + format_point(x0) + " is not in f^-1(x0)");
  }

  const auto ys = probe_points(*space, probe, 5);
  const MapSpec start = MapSpec::constant(space, space, x0);
  const MapSpec end = MapSpec::identity(space);
  CatWitness w{space, x0, {}};
  for (const auto& piece : pl.pieces()) {
    const bool met = std::any_of(ys.begin(), ys.end(), [&](const Point& y) { return piece.contains(x0, y); });
    if (!met) continue;
    w.entries.push_back(CatEntry{
        piece.label, [x0, inner = piece.contains](const Point& y) { return inner(x0, y); },
        HomotopySpec{space, [x0, inner = piece.section](const Point& y, double t) { return inner(x0, y)(t); },
                     start, end, [x0, inner = piece.section](const Point& y) { return inner(x0, y); }},
        [x0, piece](const Point& y) { return piece.frontier_distance(x0, y); }});
  }
  return w;
}

namespace {

std::vector<Piece> cat_pieces(const CatWitness& w, bool loops) {
  const SpacePtr space = w.space;
  const Point x0 = w.base;
  std::vector<std::function<bool(const Point&)>> earlier;
  std::vector<Piece> pieces;
  for (const auto& entry : w.entries) {
    Piece piece;
    piece.label = entry.label;
    piece.contains = [space, x0, covers = entry.covers, earlier](const Point& x, const Point& y) {
      if (!(space->raw_distance(x, x0) <= kFiberTol) || !covers(y)) return false;
      return std::none_of(earlier.begin(), earlier.end(), [&](const auto& c) { return c(y); });
    };
    piece.frontier = [entry](const Point&, const Point& y) { return entry.frontier_distance(y); };
    if (loops) {
      piece.section = [h = entry.contraction, x0](const Point& x, const Point& y) {
        const ParamPath p = h.track(y);
        const ParamPath loop = concat_halves(p, reverse(p));
        return ParamPath::unchecked(loop.space(), loop.evaluator(), x, x, PathMode::based_loop, x0);
      };
    } else {
      piece.section = [h = entry.contraction](const Point& x, const Point& y) {
        const ParamPath p = h.track(y);
        return ParamPath::unchecked(p.space(), p.evaluator(), x, y);
      };
    }
    earlier.push_back(entry.covers);
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace

Planner cat_cover_to_planner(const CatWitness& w) {
  return Planner("cat->planner(" + w.space->id() + ")", base_fiber_domain(w.space, w.base), cat_pieces(w, false),
                 PathMode::path, {"converted from a category cover of " + w.space->id()});
}

Planner based_loop_planner_from_cat(const CatWitness& w) {
  return Planner("based-loop(" + w.space->id() + ")", base_fiber_domain(w.space, w.base), cat_pieces(w, true),
                 PathMode::based_loop, {"based loops from a category cover of " + w.space->id()}, w.base);
}

// ---------------------------------------------------------------------------

Planner combine_cover_planners(const std::vector<Planner>& planners, const ProbeOptions& probe) {
  if (planners.empty()) throw Error(ErrorKind::configuration, "nothing to combine");
  const SpacePtr space = planners.front().space();
  for (const auto& pl : planners) {
    require_same_space(*pl.space(), *space, "combined planners must share a space");
    if (pl.mode() != planners.front().mode()) throw Error(ErrorKind::mode, "combined planners must share a mode");
  }

  const DomainPtr full = full_product(space);
  const auto samples = full->sample(probe.samples, probe.seed);
  for (const auto& s : samples) {
    const bool covered = std::any_of(planners.begin(), planners.end(),
                                     [&](const Planner& pl) { return pl.domain()->contains(s.x, s.y); });
    if (!covered) {
      throw Error(ErrorKind::cover, "domains do not cover " + space->id() + "^2: (" + format_point(s.x) + ", " +
                                        format_point(s.y) + ") is in none of them");
    }
  }
  if (planners.size() == 1) return planners.front();

  std::vector<Piece> pieces;
  std::vector<DomainPtr> earlier;
  std::string name = "combine(";
  auto history = std::vector<std::string>{};
  for (std::size_t j = 0; j < planners.size(); ++j) {
    const Planner& pl = planners[j];
    const DomainPtr own = pl.domain();
    for (const auto& piece : pl.pieces()) {
      Piece out = piece;
      out.contains = [own, earlier, inner = piece.contains](const Point& x, const Point& y) {
        if (!own->contains(x, y) || !inner(x, y)) return false;
        return std::none_of(earlier.begin(), earlier.end(), [&](const DomainPtr& d) { return d->contains(x, y); });
      };
      const bool met = std::any_of(samples.begin(), samples.end(),
                                   [&](const PointPair& s) { return out.contains(s.x, s.y); });
      if (met) pieces.push_back(std::move(out));
    }
    earlier.push_back(own);
    name += (j ? "," : "") + pl.name();
    history.push_back("[" + std::to_string(j) + "] " + pl.provenance().back());
  }
  history.push_back("combined " + std::to_string(planners.size()) + " planners in input order");
  return Planner(name + ")", full, std::move(pieces), planners.front().mode(), std::move(history),
                 planners.front().base());
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::size_t> first_piece(const Planner& pl, const Point& x, const Point& y) {
  for (std::size_t i = 0; i < pl.piece_count(); ++i) {
    if (pl.pieces()[i].contains(x, y)) return i;
  }
  return std::nullopt;
}

SpacePtr product_space(const SpacePtr& a, const SpacePtr& b) {
  try {
    return space_by_name(a->id() + "x" + b->id());
  } catch (const Error&) {
    return product({a, b});
  }
}

}  // namespace

Planner product_planner(const Planner& a, const Planner& b) {
  require_path_mode(a, "product_planner");
  require_path_mode(b, "product_planner");
  if (a.domain()->structure() != DomainStructure::full_product ||
      b.domain()->structure() != DomainStructure::full_product) {
    throw Error(ErrorKind::precondition, "product planner needs planners on full products");
  }
  const SpacePtr space = product_space(a.space(), b.space());
  const auto prod = std::dynamic_pointer_cast<const ProductSpace>(space);
  if (prod == nullptr || prod->factors().size() != 2) {
    throw Error(ErrorKind::configuration, space->id() + " is not a two-factor product");
  }
  const std::size_t ka = a.piece_count();
  const std::size_t kb = b.piece_count();
  if (ka == 0 || kb == 0) throw Error(ErrorKind::precondition, "product of a planner without pieces");

  // Locates the constituent (i, j) of a pair of product points.
  auto locate = [a, b, prod](const Point& x, const Point& y) -> std::optional<std::pair<std::size_t, std::size_t>> {
    const auto xs = prod->split(x);
    const auto ys = prod->split(y);
    const auto i = first_piece(a, xs[0], ys[0]);
    const auto j = first_piece(b, xs[1], ys[1]);
    if (!i || !j) return std::nullopt;
    return std::pair{*i, *j};
  };

  std::vector<Piece> pieces;
  for (std::size_t k = 0; k + 1 < ka + kb; ++k) {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    for (std::size_t i = 0; i < ka; ++i) {
      if (k >= i && k - i < kb) parts.emplace_back(i, k - i);
    }
    Piece w;
    w.label = "W" + std::to_string(k);
    w.subparts.clear();
    for (auto [i, j] : parts) w.subparts.push_back(a.pieces()[i].label + "x" + b.pieces()[j].label);
    w.contains = [locate, k](const Point& x, const Point& y) {
      const auto ij = locate(x, y);
      return ij && ij->first + ij->second == k;
    };
    w.subpart_of = [locate, parts](const Point& x, const Point& y) -> std::size_t {
      const auto ij = locate(x, y);
      for (std::size_t s = 0; s < parts.size(); ++s) {
        if (ij && parts[s] == *ij) return s;
      }
      return 0;
    };
    w.frontier = [a, b, prod](const Point& x, const Point& y) {
      const auto xs = prod->split(x);
      const auto ys = prod->split(y);
      const auto i = first_piece(a, xs[0], ys[0]);
      const auto j = first_piece(b, xs[1], ys[1]);
      double f = std::numeric_limits<double>::infinity();
      if (i) f = std::min(f, a.pieces()[*i].frontier_distance(xs[0], ys[0]));
      if (j) f = std::min(f, b.pieces()[*j].frontier_distance(xs[1], ys[1]));
      return f;
    };
    w.section = [a, b, prod, space, locate](const Point& x, const Point& y) {
      const auto ij = locate(x, y);
      if (!ij) throw Error(ErrorKind::coverage_gap, "product section outside both factor planners");
      const auto xs = prod->split(x);
      const auto ys = prod->split(y);
      const ParamPath pa = a.pieces()[ij->first].section(xs[0], ys[0]);
      const ParamPath pb = b.pieces()[ij->second].section(xs[1], ys[1]);
      return ParamPath::unchecked(
          space,
          [prod, ea = pa.evaluator(), eb = pb.evaluator()](double t) { return prod->join({ea(t), eb(t)}); }, x, y);
    };
    pieces.push_back(std::move(w));
  }
  return Planner(a.name() + "x" + b.name(), full_product(space), std::move(pieces), PathMode::path,
                 {"product of [" + a.provenance().back() + "] and [" + b.provenance().back() + "]"});
}

}  // namespace fibplan
