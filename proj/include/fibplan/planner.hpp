#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fibplan/domain.hpp"
#include "fibplan/path.hpp"

namespace fibplan {

using PairPredicate = std::function<bool(const Point&, const Point&)>;
using PairScalar = std::function<double(const Point&, const Point&)>;
using SubpartFn = std::function<std::size_t(const Point&, const Point&)>;
using Section = std::function<ParamPath(const Point&, const Point&)>;

/// One continuity domain of a planner together with its section.
///
/// `subparts` name mutually separated parts of the piece; the continuity
/// check only compares sample pairs lying in the same subpart.
///
/// `frontier` is a lower bound on the distance from (x, y) to the points of
/// the piece's closure that the piece omits. A piece that is not closed
/// (the shorter-arc rule on {y != -x}) is continuous on itself without being
/// uniformly continuous near the omitted set, so pairs straddling the
/// omitted set are not comparable. Closed pieces leave it unset (+inf).
struct Piece {
  std::string label;
  PairPredicate contains;
  Section section;
  std::vector<std::string> subparts{"all"};
  SubpartFn subpart_of;
  PairScalar frontier;

  std::size_t subpart(const Point& x, const Point& y) const { return subpart_of ? subpart_of(x, y) : 0; }
  double frontier_distance(const Point& x, const Point& y) const {
    return frontier ? frontier(x, y) : std::numeric_limits<double>::infinity();
  }
};

/// A partition planner: pairwise disjoint pieces covering a domain. The
/// piece count is the witnessed upper bound on the relative complexity of
/// the domain.
class Planner {
 public:
  Planner(std::string name, DomainPtr domain, std::vector<Piece> pieces, PathMode mode = PathMode::path,
          std::vector<std::string> provenance = {"builtin"}, std::optional<Point> base = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const DomainPtr& domain() const noexcept { return domain_; }
  const SpacePtr& space() const noexcept { return domain_->space(); }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }
  PathMode mode() const noexcept { return mode_; }
  const std::vector<std::string>& provenance() const noexcept { return provenance_; }
  /// Base point for based-loop planners.
  const std::optional<Point>& base() const noexcept { return base_; }

  /// Indices of the pieces containing (x, y).
  std::vector<std::size_t> pieces_containing(const Point& x, const Point& y) const;

 private:
  std::string name_;
  DomainPtr domain_;
  std::vector<Piece> pieces_;
  PathMode mode_;
  std::vector<std::string> provenance_;
  std::optional<Point> base_;
};

struct Evaluation {
  ParamPath path;
  std::size_t piece;
  std::size_t subpart;
};

/// Section of the unique piece containing (x, y). A pair in no piece raises
/// a coverage-gap error, a pair in several a partition-violation error.
Evaluation evaluate_planner(const Planner& pl, const Point& x, const Point& y);

/// A homotopy X x [0,1] -> Y with declared end maps at t = 0 and t = 1.
struct HomotopySpec {
  SpacePtr space;  // target
  std::function<Point(const Point&, double)> eval;
  MapSpec at_start;
  MapSpec at_end;
  /// Optional faster route to the whole track of a point.
  std::function<ParamPath(const Point&)> path_of;

  /// t -> eval(p, t)
  ParamPath track(const Point& p) const;
};

/// Largest deviation of eval(., 0) and eval(., 1) from the declared end maps.
double homotopy_endpoint_defect(const HomotopySpec& h, const std::vector<Point>& samples);

/// A homotopy of pairs B x [0,1] -> X x X.
using PairHomotopy = std::function<PointPair(const Point&, const Point&, double)>;

/// One open set of a category cover with its contraction to the base point:
/// contraction(y, 0) = x0 and contraction(y, 1) = y.
struct CatEntry {
  std::string label;
  std::function<bool(const Point&)> covers;
  HomotopySpec contraction;
  std::function<double(const Point&)> frontier;

  double frontier_distance(const Point& y) const {
    return frontier ? frontier(y) : std::numeric_limits<double>::infinity();
  }
};

/// Upper-bound data for the LS category (covers counted from 1).
struct CatWitness {
  SpacePtr space;
  Point base;
  std::vector<CatEntry> entries;
};

}  // namespace fibplan
