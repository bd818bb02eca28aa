#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fibplan {

/// Default tolerances. Everything constructed here glues analytically exact
/// endpoints, so the defaults sit just above accumulated rounding.
inline constexpr double kSpaceTol = 1e-9;
inline constexpr double kGlueTol = 1e-9;
inline constexpr double kFiberTol = 1e-9;

using Rng = std::mt19937_64;

/// Coordinates of a point in the ambient chart of its space.
struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  std::size_t dim() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }

  bool operator==(const Point&) const = default;
};

struct PointPair {
  Point x;
  Point y;
  bool operator==(const PointPair&) const = default;
};

std::string format_point(const Point& p);

// Ambient-chart vector helpers.
double dot(const Point& a, const Point& b);
double norm(const Point& a);
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point scale(const Point& a, double s);
Point negate(const Point& a);
/// a*ca + b*cb
Point lincomb(const Point& a, double ca, const Point& b, double cb);
double euclidean(const Point& a, const Point& b);

enum class ErrorKind {
  domain,
  parameter,
  glue,
  ambiguity,
  configuration,
  sampling_exhausted,
  coverage_gap,
  partition_violation,
  not_an_isomorphism,
  invalid_homotopy,
  domination,
  cover,
  mode,
  unsupported,
  precondition,
  membership,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Stateless seed derivation so that per-sample randomness does not depend on
/// how samples are split between workers.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) noexcept;

double uniform01(Rng& rng);
double standard_normal(Rng& rng);

}  // namespace fibplan
