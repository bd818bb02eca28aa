#include <doctest.h>

#include "fibplan/builtins.hpp"
#include "oracles.hpp"

using namespace fibplan;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::configuration;
}

// Counterclockwise arc of the given length starting at angle a0, built from
// angles only.
ParamPath oracle_arc(double a0, double length) {
  return path_from(sphere(1), [a0, length](double t) { return oracle::on_circle(a0 + t * length); });
}

}  // namespace

TEST_CASE("path_eval examples") {
  const auto s1 = sphere(1);
  const Point x{0.6, 0.8};
  const auto c = constant_path(s1, x);
  for (double t : {0.0, 0.3, 1.0}) CHECK(path_eval(c, t) == x);

  const auto q = geodesic(s1, Point{1, 0}, Point{0, 1});
  CHECK(path_eval(q, 1.0) == Point{0, 1});
  CHECK(oracle::max_abs_diff(path_eval(q, 0.5), oracle::on_circle(oracle::pi / 4)) <= 1e-15);

  CHECK(kind_of([&] { (void)path_eval(q, -0.01); }) == ErrorKind::parameter);
  CHECK(kind_of([&] { (void)path_eval(q, 1.5); }) == ErrorKind::parameter);
}

TEST_CASE("reverse examples") {
  const auto s1 = sphere(1);
  const auto c = constant_path(s1, Point{0, 1});
  const auto rc = reverse(c);
  for (double t : sample_grid(9)) CHECK(rc(t) == c(t));

  const auto q = geodesic(s1, Point{1, 0}, Point{0, 1});
  const auto rq = reverse(q);
  CHECK(rq.start() == q.end());
  CHECK(rq.end() == q.start());
  // midpoint is fixed by the reflection symmetry of the arc
  CHECK(oracle::max_abs_diff(rq(0.5), oracle::on_circle(oracle::pi / 4)) <= 1e-15);
}

TEST_CASE("concat_thirds examples") {
  const auto s1 = sphere(1);
  const Point x{0, -1};
  const auto c = constant_path(s1, x);
  const auto ccc = concat_thirds(c, c, c);
  for (double t : sample_grid(64)) CHECK(ccc(t) == x);

  const auto p1 = oracle_arc(0.0, oracle::pi / 2);
  const auto p2 = oracle_arc(oracle::pi / 2, oracle::pi / 2);
  const auto p3 = oracle_arc(oracle::pi, oracle::pi / 2);
  const auto all = concat_thirds(p1, p2, p3);
  CHECK(all(0.5) == p2(0.5));
  CHECK(oracle::max_abs_diff(all(1.0), oracle::on_circle(3 * oracle::pi / 2)) <= 1e-15);
  CHECK(all.start() == p1.start());
  CHECK(all.end() == p3.end());
  // interior of each third, via the composed angle oracle
  for (double t : sample_grid(31)) {
    CHECK(oracle::max_abs_diff(all(t), oracle::on_circle(t * 3 * oracle::pi / 2)) <= 1e-12);
  }
}

TEST_CASE("concat_thirds reports the glue gap") {
  const auto s1 = sphere(1);
  const auto p1 = oracle_arc(0.0, 0.5);
  const auto p2 = oracle_arc(0.6, 0.5);
  try {
    (void)concat_thirds(p1, p2, p2);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::glue);
    CHECK(std::string(e.what()).find("gap 0.1") != std::string::npos);
  }
}

TEST_CASE("concat_halves examples") {
  const auto s1 = sphere(1);
  const auto p = geodesic(s1, Point{1, 0}, Point{0, 1});
  const auto loop = concat_halves(p, reverse(p));
  CHECK(loop(0.0) == Point{1, 0});
  CHECK(loop(1.0) == Point{1, 0});
  CHECK(loop(0.5) == p.end());

  const auto c = constant_path(s1, Point{1, 0});
  for (double t : sample_grid(17)) CHECK(concat_halves(c, c)(t) == Point{1, 0});

  const auto half = geodesic(s1, Point{1, 0}, Point{-1, 0}, ccw_tangent(Point{1, 0}));
  const auto there_and_back = concat_halves(half, reverse(half));
  CHECK(oracle::max_abs_diff(there_and_back(0.25), Point{0, 1}) <= 1e-15);
  CHECK(kind_of([&] { (void)concat_halves(p, p); }) == ErrorKind::glue);
}

TEST_CASE("geodesic examples") {
  const auto s1 = sphere(1);
  const auto q = geodesic(s1, Point{1, 0}, Point{0, 1});
  CHECK(oracle::max_abs_diff(q(0.5), Point{std::sqrt(0.5), std::sqrt(0.5)}) <= 1e-15);

  const auto h = geodesic(s1, Point{1, 0}, Point{-1, 0}, ccw_tangent(Point{1, 0}));
  CHECK(oracle::max_abs_diff(h(0.5), Point{0, 1}) <= 1e-15);

  const Point x{0.28, -0.96};
  const auto c = geodesic(s1, x, x);
  for (double t : sample_grid(8)) CHECK(c(t) == x);

  CHECK(kind_of([&] { (void)geodesic(s1, Point{1, 0}, Point{-1, 0}); }) == ErrorKind::ambiguity);
  CHECK(kind_of([&] { (void)geodesic(sphere(2), Point{0, 0, 1}, Point{0, 0, -1}); }) == ErrorKind::ambiguity);
}

TEST_CASE("geodesics on products and intervals") {
  const auto cyl = cylinder();
  const auto g = geodesic(cyl, Point{1, 0, 0.2}, Point{0, 1, 0.6});
  const Point mid = g(0.5);
  CHECK(oracle::max_abs_diff(mid, Point{std::sqrt(0.5), std::sqrt(0.5), 0.4}) <= 1e-15);
  CHECK(cyl->distance(Point{1, 0, 0.2}, Point{0, 1, 0.6}) ==
        doctest::Approx(std::hypot(oracle::pi / 2, 0.4)).epsilon(1e-12));
}

TEST_CASE("loop-mode paths enforce their contracts") {
  const auto s1 = sphere(1);
  const auto p = geodesic(s1, Point{1, 0}, Point{0, 1});
  CHECK(kind_of([&] { (void)p.with_mode(PathMode::free_loop); }) == ErrorKind::glue);
  const auto loop = concat_halves(p, reverse(p)).with_mode(PathMode::free_loop);
  CHECK(loop.mode() == PathMode::free_loop);
  CHECK(kind_of([&] { (void)loop.with_mode(PathMode::based_loop); }) == ErrorKind::mode);
  CHECK(kind_of([&] { (void)loop.with_mode(PathMode::based_loop, Point{0, 1}); }) == ErrorKind::glue);
  CHECK(loop.with_mode(PathMode::based_loop, Point{1, 0}).base() == Point{1, 0});
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: reverse is a pointwise involution") {
  for (const auto& name : {"S1", "S2", "S3", "T2", "cylinder"}) {
    const auto sp = space_by_name(name);
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
      const auto pr = sp->sample_pair(rng);
      std::optional<ParamPath> p;
      try {
        p = geodesic(sp, pr.x, pr.y);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ambiguity);
        continue;
      }
      const auto rr = reverse(reverse(*p));
      for (double t : sample_grid(64)) CHECK(oracle::max_abs_diff(rr(t), (*p)(t)) <= 1e-12);
    }
  }
}

TEST_CASE("property: geodesics have constant speed and reverse symmetrically") {
  for (int n : {1, 2, 3}) {
    const auto sp = sphere(n);
    std::mt19937_64 rng(100 + n);
    for (int i = 0; i < 200; ++i) {
      const Point x = oracle::sphere_point(n, rng);
      const Point y = oracle::sphere_point(n, rng);
      const double d = oracle::arc(x, y);
      if (d > oracle::pi - 1e-6) continue;
      const auto g = geodesic(sp, x, y);
      const double step = 1.0 / 64;
      for (int k = 0; k < 64; ++k) {
        const double t = k * step;
        CHECK(std::abs(sp->distance(g(t), g(t + step)) - step * d) <= 1e-6);
      }
      const auto back = geodesic(sp, y, x);
      for (double t : sample_grid(64)) CHECK(oracle::max_abs_diff(back(t), reverse(g)(t)) <= 1e-9);
    }
  }
}

TEST_CASE("property: constant paths are fixed by both concatenations") {
  const auto s2 = sphere(2);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto c = constant_path(s2, s2->sample(rng));
    const auto c3 = concat_thirds(c, c, c);
    const auto c2 = concat_halves(c, c);
    for (double t : sample_grid(64)) {
      CHECK(c3(t) == c(t));
      CHECK(c2(t) == c(t));
    }
  }
}
