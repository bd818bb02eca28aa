#include "fibplan/planner.hpp"

#include <algorithm>

namespace fibplan {

Planner::Planner(std::string name, DomainPtr domain, std::vector<Piece> pieces, PathMode mode,
                 std::vector<std::string> provenance, std::optional<Point> base)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      pieces_(std::move(pieces)),
      mode_(mode),
      provenance_(std::move(provenance)),
      base_(std::move(base)) {
  if (mode_ == PathMode::based_loop && !base_) throw Error(ErrorKind::mode, "based-loop planner without base point");
}

std::vector<std::size_t> Planner::pieces_containing(const Point& x, const Point& y) const {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].contains(x, y)) hits.push_back(i);
  }
  return hits;
}

Evaluation evaluate_planner(const Planner& pl, const Point& x, const Point& y) {
  const auto hits = pl.pieces_containing(x, y);
  if (hits.empty()) {
    throw Error(ErrorKind::coverage_gap,
                "no piece of " + pl.name() + " contains (" + format_point(x) + ", " + format_point(y) + ")");
  }
  if (hits.size() > 1) {
    std::string names;
    for (auto i : hits) names += (names.empty() ? "" : ", ") + pl.pieces()[i].label;
    throw Error(ErrorKind::partition_violation, "pieces " + names + " of " + pl.name() + " all contain (" +
                                                    format_point(x) + ", " + format_point(y) + ")");
  }
  const Piece& piece = pl.pieces()[hits.front()];
  return {piece.section(x, y), hits.front(), piece.subpart(x, y)};
}

ParamPath HomotopySpec::track(const Point& p) const {
  if (path_of) return path_of(p);
  return ParamPath::unchecked(space, [e = eval, p](double t) { return e(p, t); }, eval(p, 0.0), eval(p, 1.0));
}

double homotopy_endpoint_defect(const HomotopySpec& h, const std::vector<Point>& samples) {
  double worst = 0.0;
  for (const auto& p : samples) {
    worst = std::max(worst, h.space->raw_distance(h.eval(p, 0.0), h.at_start(p)));
    worst = std::max(worst, h.space->raw_distance(h.eval(p, 1.0), h.at_end(p)));
  }
  return worst;
}

}  // namespace fibplan
