#include "fibplan/path.hpp"

#include <algorithm>
#include <sstream>

namespace fibplan {

std::string_view to_string(PathMode mode) noexcept {
  switch (mode) {
    case PathMode::path: return "path";
    case PathMode::free_loop: return "free-loop";
    case PathMode::based_loop: return "based-loop";
  }
  return "unknown";
}

namespace {

void check_close(const Space& space, const Point& a, const Point& b, double eps, const char* what) {
  const double gap = space.raw_distance(a, b);
  if (!(gap <= eps)) {
    std::ostringstream msg;
    msg << what << ": " << format_point(a) << " vs " << format_point(b) << " (gap " << gap << ")";
    throw Error(ErrorKind::glue, msg.str());
  }
}

}  // namespace

ParamPath::ParamPath(Unchecked, SpacePtr space, PathEvaluator evaluator, Point start, Point end, PathMode mode,
                     std::optional<Point> base)
    : space_(std::move(space)),
      eval_(std::move(evaluator)),
      start_(std::move(start)),
      end_(std::move(end)),
      mode_(mode),
      base_(std::move(base)) {}

ParamPath::ParamPath(SpacePtr space, PathEvaluator evaluator, Point start, Point end, PathMode mode,
                     std::optional<Point> base, double eps)
    : ParamPath(Unchecked{}, std::move(space), std::move(evaluator), std::move(start), std::move(end), mode,
                std::move(base)) {
  space_->require_member(start_, eps);
  space_->require_member(end_, eps);
  check_close(*space_, eval_(0.0), start_, eps, "path start differs from declared start");
  check_close(*space_, eval_(1.0), end_, eps, "path end differs from declared end");
  if (mode_ != PathMode::path) check_close(*space_, start_, end_, eps, "loop does not close");
  if (mode_ == PathMode::based_loop) {
    if (!base_) throw Error(ErrorKind::mode, "based loop without a base point");
    check_close(*space_, start_, *base_, eps, "based loop does not start at its base point");
  }
}

ParamPath ParamPath::unchecked(SpacePtr space, PathEvaluator evaluator, Point start, Point end, PathMode mode,
                               std::optional<Point> base) {
  return ParamPath(Unchecked{}, std::move(space), std::move(evaluator), std::move(start), std::move(end), mode,
                   std::move(base));
}

Point ParamPath::at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "path parameter " << t << " outside [0,1]";
    throw Error(ErrorKind::parameter, msg.str());
  }
  return eval_(t);
}

Point ParamPath::operator()(double t) const { return eval_(std::clamp(t, 0.0, 1.0)); }

ParamPath ParamPath::with_mode(PathMode mode, std::optional<Point> base) const {
  return ParamPath(space_, eval_, start_, end_, mode, std::move(base));
}

ParamPath constant_path(SpacePtr space, Point x) {
  return ParamPath(std::move(space), [x](double) { return x; }, x, x);
}

ParamPath path_from(SpacePtr space, PathEvaluator evaluator) {
  Point start = evaluator(0.0);
  Point end = evaluator(1.0);
  return ParamPath(std::move(space), std::move(evaluator), std::move(start), std::move(end));
}

Point path_eval(const ParamPath& p, double t) { return p.at(t); }

ParamPath reverse(const ParamPath& p) {
  return ParamPath::unchecked(p.space(), [e = p.evaluator()](double t) { return e(1.0 - t); }, p.end(),
                              p.start(), p.mode(), p.base());
}

ParamPath concat_thirds(const ParamPath& p1, const ParamPath& p2, const ParamPath& p3, double eps) {
  check_close(*p1.space(), p1.end(), p2.start(), eps, "first and second third do not meet");
  check_close(*p1.space(), p2.end(), p3.start(), eps, "second and third third do not meet");
  auto eval = [a = p1.evaluator(), b = p2.evaluator(), c = p3.evaluator()](double t) {
    if (t <= 1.0 / 3.0) return a(std::clamp(3.0 * t, 0.0, 1.0));
    if (t <= 2.0 / 3.0) return b(std::clamp(3.0 * t - 1.0, 0.0, 1.0));
    return c(std::clamp(3.0 * t - 2.0, 0.0, 1.0));
  };
  return ParamPath::unchecked(p1.space(), std::move(eval), p1.start(), p3.end());
}

ParamPath concat_halves(const ParamPath& p1, const ParamPath& p2, double eps) {
  check_close(*p1.space(), p1.end(), p2.start(), eps, "halves do not meet");
  auto eval = [a = p1.evaluator(), b = p2.evaluator()](double t) {
    if (t <= 0.5) return a(std::clamp(2.0 * t, 0.0, 1.0));
    return b(std::clamp(2.0 * t - 1.0, 0.0, 1.0));
  };
  return ParamPath::unchecked(p1.space(), std::move(eval), p1.start(), p2.end());
}

ParamPath geodesic(SpacePtr space, const Point& x, const Point& y, const std::optional<Point>& hint) {
  space->require_member(x);
  space->require_member(y);
  auto eval = space->geodesic_evaluator(x, y, hint);
  return ParamPath(std::move(space), std::move(eval), x, y);
}

ParamPath map_path(const MapSpec& map, const ParamPath& p) {
  return ParamPath::unchecked(map.target(), [m = map, e = p.evaluator()](double t) { return m(e(t)); },
                              map(p.start()), map(p.end()));
}

std::vector<double> sample_grid(std::size_t n) {
  if (n <= 1) return {0.0};
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  ts.back() = 1.0;
  return ts;
}

}  // namespace fibplan
