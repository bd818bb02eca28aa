#include "fibplan/core.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fibplan {

std::string format_point(const Point& p) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ')';
  return out.str();
}

double dot(const Point& a, const Point& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

Point add(const Point& a, const Point& b) { return lincomb(a, 1.0, b, 1.0); }

Point sub(const Point& a, const Point& b) { return lincomb(a, 1.0, b, -1.0); }

Point scale(const Point& a, double s) {
  Point r = a;
  for (auto& c : r.coords) c *= s;
  return r;
}

Point negate(const Point& a) {
  Point r = a;
  for (auto& c : r.coords) c = -c;
  return r;
}

Point lincomb(const Point& a, double ca, const Point& b, double cb) {
  assert(a.dim() == b.dim());
  Point r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = ca * a[i] + cb * b[i];
  return r;
}

double euclidean(const Point& a, const Point& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::glue: return "glue";
    case ErrorKind::ambiguity: return "ambiguity";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::sampling_exhausted: return "sampling-exhausted";
    case ErrorKind::coverage_gap: return "coverage-gap";
    case ErrorKind::partition_violation: return "partition-violation";
    case ErrorKind::not_an_isomorphism: return "not-an-isomorphism";
    case ErrorKind::invalid_homotopy: return "invalid-homotopy";
    case ErrorKind::domination: return "domination";
    case ErrorKind::cover: return "cover";
    case ErrorKind::mode: return "mode";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::membership: return "membership";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) noexcept {
  // splitmix64 finalizer over a combined word
  std::uint64_t z = seed ^ (index * 0x9E3779B97F4A7C15ULL) ^ (salt * 0xD1B54A32D192ED03ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) {
  // 53 random bits; independent of the standard library's distribution code
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  // Box-Muller, first variate only
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fibplan
