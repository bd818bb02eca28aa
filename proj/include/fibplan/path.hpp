#pragma once

#include <optional>
#include <vector>

#include "fibplan/maps.hpp"

namespace fibplan {

enum class PathMode { path, free_loop, based_loop };

std::string_view to_string(PathMode mode) noexcept;

/// A path [0,1] -> X held as an evaluator with declared end points.
///
/// The checked constructor enforces the end-point contract (and the loop
/// contracts for loop modes) at construction. `unchecked` exists for
/// deliberately corrupted test planners.
class ParamPath {
 public:
  ParamPath(SpacePtr space, PathEvaluator evaluator, Point start, Point end,
            PathMode mode = PathMode::path, std::optional<Point> base = std::nullopt,
            double eps = kSpaceTol);

  static ParamPath unchecked(SpacePtr space, PathEvaluator evaluator, Point start, Point end,
                             PathMode mode = PathMode::path, std::optional<Point> base = std::nullopt);

  /// Throws a parameter error outside [0,1].
  Point at(double t) const;
  /// No range check; t is clamped.
  Point operator()(double t) const;

  const SpacePtr& space() const noexcept { return space_; }
  const Point& start() const noexcept { return start_; }
  const Point& end() const noexcept { return end_; }
  PathMode mode() const noexcept { return mode_; }
  const std::optional<Point>& base() const noexcept { return base_; }
  const PathEvaluator& evaluator() const noexcept { return eval_; }

  /// Same evaluator under another mode; loop contracts are checked.
  ParamPath with_mode(PathMode mode, std::optional<Point> base = std::nullopt) const;

 private:
  struct Unchecked {};
  ParamPath(Unchecked, SpacePtr space, PathEvaluator evaluator, Point start, Point end, PathMode mode,
            std::optional<Point> base);

  SpacePtr space_;
  PathEvaluator eval_;
  Point start_;
  Point end_;
  PathMode mode_;
  std::optional<Point> base_;
};

ParamPath constant_path(SpacePtr space, Point x);

/// Wraps an evaluator, declaring its values at 0 and 1 as end points.
ParamPath path_from(SpacePtr space, PathEvaluator evaluator);

Point path_eval(const ParamPath& p, double t);

/// t -> p(1 - t)
ParamPath reverse(const ParamPath& p);

/// p1 on [0,1/3], p2 on [1/3,2/3], p3 on [2/3,1]. Glue gaps above eps raise.
ParamPath concat_thirds(const ParamPath& p1, const ParamPath& p2, const ParamPath& p3,
                        double eps = kGlueTol);

/// p1 on [0,1/2], p2 on [1/2,1].
ParamPath concat_halves(const ParamPath& p1, const ParamPath& p2, double eps = kGlueTol);

/// Constant-speed minimizing path. On spheres an antipodal pair needs a hint
/// (an ambient vector at x fixing the half-turn plane); without one this
/// raises an ambiguity error.
ParamPath geodesic(SpacePtr space, const Point& x, const Point& y,
                   const std::optional<Point>& hint = std::nullopt);

/// t -> map(p(t))
ParamPath map_path(const MapSpec& map, const ParamPath& p);

/// n evenly spaced parameters i/(n-1) (n >= 2), or {0} for n == 1.
std::vector<double> sample_grid(std::size_t n);

}  // namespace fibplan
