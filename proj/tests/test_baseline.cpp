#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ovp/baseline.hpp"
#include "ovp/scene_gen.hpp"

using namespace ovp;

namespace {

Aabb area(double w, double d, double h = 0) {
  Aabb b;
  b.extend(Vec3(0, 0, 0));
  b.extend(Vec3(w, d, h));
  return b;
}

ObliqueConfig wide(double overlap) {
  ObliqueConfig c;
  c.camera.fov = kPi / 2;
  c.camera.view_distance = 100;
  c.camera.max_range = 300;
  c.forward_overlap = c.side_overlap = overlap;
  return c;
}

}  // namespace

TEST_CASE("2x2 stations give 20 viewpoints") {
  const auto v = plan_oblique(area(100, 100), wide(0.5));
  CHECK(oblique_grid(area(100, 100), wide(0.5)).stations_x == 2);
  CHECK(v.size() == 20);
}

TEST_CASE("along-track spacing at 85 percent, 100 m, ninety-degree fov") {
  const auto g = oblique_grid(area(300, 300), wide(0.85));
  CHECK(std::abs(g.forward_spacing - 30.0) < 1e-9);
  CHECK(std::abs(g.side_spacing - 30.0) < 1e-9);
}

TEST_CASE("zero overlap gives the closed-form coarsest grid") {
  const Aabb b = area(437, 211, 30);
  ObliqueConfig c;
  c.forward_overlap = c.side_overlap = 0;
  const auto g = oblique_grid(b, c);
  const double f = 2 * c.height * std::tan(c.camera.fov / 2);
  CHECK(g.stations_x == static_cast<std::size_t>(std::ceil(437 / f)) + 1);
  CHECK(g.stations_y == static_cast<std::size_t>(std::ceil(211 / f)) + 1);
  CHECK(plan_oblique(b, c).size() == g.stations_x * g.stations_y * 5);
}

TEST_CASE("consecutive nadir footprints overlap as configured") {
  const TriMesh ground = fixture::plane(400, 400);
  const TriMesh rays_hit = TriMesh::from_raw({{-5000, -5000, 0}, {5000, -5000, 0}, {5000, 5000, 0}, {-5000, 5000, 0}},
                                             {{{0, 1, 2}}, {{0, 2, 3}}});
  for (double overlap : {0.6, 0.75, 0.85}) {
    ObliqueConfig c;
    c.forward_overlap = c.side_overlap = overlap;
    const auto v = plan_oblique(ground.bounds(), c);
    // Along-track footprint extent from the cone-edge rays hitting z = 0.
    auto extent = [&](const ViewPoint& n) {
      const double half = c.camera.fov / 2;
      double lo = 0, hi = 0;
      for (int sgn : {-1, 1}) {
        const Vec3 d(sgn * std::sin(half), 0, -std::cos(half));
        const auto t = oracle::first_hit(rays_hit, n.position, d, 0, 1e9);
        REQUIRE(t.has_value());
        (sgn < 0 ? lo : hi) = (n.position + t->t * d).x();
      }
      return std::pair{lo, hi};
    };
    const auto [a0, a1] = extent(v[0]);
    const auto [b0, b1] = extent(v[5]);
    REQUIRE(v[5].position.y() == v[0].position.y());
    const double achieved = (std::min(a1, b1) - std::max(a0, b0)) / (a1 - a0);
    CHECK(std::abs(achieved - overlap) <= 0.02);
  }
}

TEST_CASE("stations sit at the flight height within one footprint of the bounds") {
  const TriMesh m = generate_scene(reference_scene_spec());
  ObliqueConfig c;
  const Aabb b = m.bounds();
  const auto v = plan_oblique(b, c);
  const auto g = oblique_grid(b, c);
  CHECK(v.size() == g.stations_x * g.stations_y * 5);
  for (const auto& x : v) {
    CHECK(x.position.z() == b.min.z() + c.height);
    CHECK(x.position.x() >= b.min.x() - g.footprint);
    CHECK(x.position.x() <= b.max.x() + g.footprint);
    CHECK(x.position.y() >= b.min.y() - g.footprint);
    CHECK(x.position.y() <= b.max.y() + g.footprint);
    CHECK(std::abs(x.direction.norm() - 1) < 1e-12);
    CHECK(x.state == ViewState::kept);
  }
  // Five mounts per station: one nadir and four at the tilt.
  for (std::size_t k = 0; k < 5; ++k) {
    const double off_nadir = oracle::angle(v[k].direction, Vec3(0, 0, -1));
    CHECK(off_nadir == doctest::Approx(k == 0 ? 0.0 : c.tilt));
    CHECK(v[k].position == v[0].position);
  }
}

TEST_CASE("stations follow a serpentine order") {
  const auto v = plan_oblique(area(200, 200), wide(0.5));
  const auto g = oblique_grid(area(200, 200), wide(0.5));
  REQUIRE(g.stations_y >= 2);
  const auto last_first_line = v[(g.stations_x - 1) * 5].position;
  const auto first_second_line = v[g.stations_x * 5].position;
  CHECK(last_first_line.x() == first_second_line.x());
  CHECK(first_second_line.y() > last_first_line.y());
}

TEST_CASE("oblique config errors") {
  ObliqueConfig c;
  c.height = 30;
  CHECK_THROWS_AS(oblique_grid(area(100, 100, 35), c), ValidationError);
  c = {};
  c.forward_overlap = 1;
  CHECK_THROWS_AS(oblique_grid(area(100, 100), c), ValidationError);
}
