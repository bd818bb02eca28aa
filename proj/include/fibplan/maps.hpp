#pragma once

#include <memory>
#include <optional>
#include <string>

#include "fibplan/space.hpp"

namespace fibplan {

enum class MapTag { identity, constant, quotient_projection, composition, custom };

std::string_view to_string(MapTag tag) noexcept;

/// A map between registry spaces. Tags let domain construction recognise
/// structured fiber products without inspecting the evaluator.
class MapSpec {
 public:
  static MapSpec identity(SpacePtr space);
  static MapSpec constant(SpacePtr source, SpacePtr target, Point base);
  static MapSpec quotient_projection(std::shared_ptr<const QuotientSpace> quotient);
  static MapSpec custom(SpacePtr source, SpacePtr target, PointMap evaluator, std::string name);
  /// outer after inner. Constants absorb, identities vanish.
  static MapSpec compose(const MapSpec& outer, const MapSpec& inner);

  /// Evaluates without checking membership.
  Point operator()(const Point& p) const { return evaluator_(p); }
  /// Evaluates after checking that p lies in the source.
  Point apply(const Point& p) const;

  const SpacePtr& source() const noexcept { return source_; }
  const SpacePtr& target() const noexcept { return target_; }
  MapTag tag() const noexcept { return tag_; }
  const std::string& name() const noexcept { return name_; }
  /// Declared image point of a constant map.
  const std::optional<Point>& base() const noexcept { return base_; }
  /// The quotient for quotient projections.
  const std::shared_ptr<const QuotientSpace>& quotient() const noexcept { return quotient_; }

 private:
  MapSpec(SpacePtr source, SpacePtr target, PointMap evaluator, MapTag tag, std::string name);

  SpacePtr source_;
  SpacePtr target_;
  PointMap evaluator_;
  MapTag tag_;
  std::string name_;
  std::optional<Point> base_;
  std::shared_ptr<const QuotientSpace> quotient_;
};

/// Largest target distance between the two maps over `samples`.
double max_map_deviation(const MapSpec& a, const MapSpec& b, const std::vector<Point>& samples);

}  // namespace fibplan
