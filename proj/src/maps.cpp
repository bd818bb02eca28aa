#include "fibplan/maps.hpp"

#include <algorithm>

namespace fibplan {

std::string_view to_string(MapTag tag) noexcept {
  switch (tag) {
    case MapTag::identity: return "identity";
    case MapTag::constant: return "constant";
    case MapTag::quotient_projection: return "quotient-projection";
    case MapTag::composition: return "composition";
    case MapTag::custom: return "custom";
  }
  return "unknown";
}

MapSpec::MapSpec(SpacePtr source, SpacePtr target, PointMap evaluator, MapTag tag, std::string name)
    : source_(std::move(source)),
      target_(std::move(target)),
      evaluator_(std::move(evaluator)),
      tag_(tag),
      name_(std::move(name)) {}

MapSpec MapSpec::identity(SpacePtr space) {
  auto id = "id_" + space->id();
  return MapSpec(space, space, [](const Point& p) { return p; }, MapTag::identity, std::move(id));
}

MapSpec MapSpec::constant(SpacePtr source, SpacePtr target, Point base) {
  target->require_member(base);
  auto name = "cst_" + format_point(base);
  MapSpec m(std::move(source), std::move(target), [base](const Point&) { return base; },
            MapTag::constant, std::move(name));
  m.base_ = std::move(base);
  return m;
}

MapSpec MapSpec::quotient_projection(std::shared_ptr<const QuotientSpace> quotient) {
  MapSpec m(quotient->total(), quotient, [q = quotient.get()](const Point& p) { return q->canonical(p); },
            MapTag::quotient_projection, "p_" + quotient->id());
  m.quotient_ = std::move(quotient);
  return m;
}

MapSpec MapSpec::custom(SpacePtr source, SpacePtr target, PointMap evaluator, std::string name) {
  return MapSpec(std::move(source), std::move(target), std::move(evaluator), MapTag::custom, std::move(name));
}

MapSpec MapSpec::compose(const MapSpec& outer, const MapSpec& inner) {
  if (inner.target_->id() != outer.source_->id()) {
    throw Error(ErrorKind::configuration,
                "cannot compose " + outer.name_ + " after " + inner.name_ + ": " + inner.target_->id() +
                    " != " + outer.source_->id());
  }
  if (outer.tag_ == MapTag::constant) return constant(inner.source_, outer.target_, *outer.base_);
  if (outer.tag_ == MapTag::identity) return inner;
  if (inner.tag_ == MapTag::identity) return outer;
  return MapSpec(inner.source_, outer.target_,
                 [o = outer.evaluator_, i = inner.evaluator_](const Point& p) { return o(i(p)); },
                 MapTag::composition, outer.name_ + "." + inner.name_);
}

Point MapSpec::apply(const Point& p) const {
  source_->require_member(p);
  return evaluator_(p);
}

double max_map_deviation(const MapSpec& a, const MapSpec& b, const std::vector<Point>& samples) {
  double worst = 0.0;
  for (const auto& p : samples) worst = std::max(worst, a.target()->raw_distance(a(p), b(p)));
  return worst;
}

}  // namespace fibplan
