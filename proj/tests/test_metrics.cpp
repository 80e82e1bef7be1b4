#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "geoflow/metrics.hpp"
#include "geoflow/shapes.hpp"
#include "support.hpp"

using namespace geoflow;

namespace {

constexpr double kPi = std::numbers::pi;

ClosedPolygon square(double x0, double y0, double side) {
  return ClosedPolygon({Vec2(x0, y0), Vec2(x0, y0 + side), Vec2(x0 + side, y0 + side),
                        Vec2(x0 + side, y0)});
}

ClosedPolygon translated(const ClosedPolygon& p, const Vec2& d) {
  std::vector<Vec2> v = p.vertices();
  for (Vec2& x : v) x += d;
  return ClosedPolygon(std::move(v));
}

}  // namespace

TEST_CASE("manifold distance: identical polygons give exactly zero") {
  const ClosedPolygon p = make_flower(257);
  CHECK(manifold_distance_2d(p, p) == 0.0);
}

TEST_CASE("manifold distance: unit squares offset by one half") {
  CHECK(manifold_distance_2d(square(0, 0, 1), square(0.5, 0, 1)) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("manifold distance: nested concentric 4096-gons") {
  const ClosedPolygon inner = make_circle(1.0, 4096);
  const ClosedPolygon outer = make_circle(2.0, 4096);
  // Nested regions: distance = outer polygon area - inner polygon area.
  const double want = enclosed_area(outer) - enclosed_area(inner);
  CHECK(manifold_distance_2d(inner, outer) == doctest::Approx(want).epsilon(1e-10));
  CHECK(want == doctest::Approx(3.0 * kPi).epsilon(1e-5));
}

TEST_CASE("manifold distance: disjoint regions add their areas") {
  const ClosedPolygon a = square(0, 0, 1);
  const ClosedPolygon b = square(5, 5, 2);
  CHECK(manifold_distance_2d(a, b) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("manifold distance matches a Monte-Carlo indicator oracle on convex pairs") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 3; ++rep) {
    const ClosedPolygon a = gftest::random_convex_polygon(rng);
    const ClosedPolygon b = translated(gftest::random_convex_polygon(rng), Vec2(0.3, -0.1));
    const double got = manifold_distance_2d(a, b);

    // Monte Carlo over the joint bounding box.
    Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
    for (const auto* p : {&a, &b})
      for (const Vec2& v : p->vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
    auto inside = [](const ClosedPolygon& p, const Vec2& x) {
      int cross = 0;
      const int n = p.size();
      for (int j = 0; j < n; ++j) {
        const Vec2& c = p.vertex(j);
        const Vec2& d = p.vertex((j + 1) % n);
        if ((c.y() <= x.y()) == (d.y() <= x.y())) continue;
        const double t = (x.y() - c.y()) / (d.y() - c.y());
        if (c.x() + t * (d.x() - c.x()) > x.x()) ++cross;
      }
      return (cross & 1) == 1;
    };
    const long samples = 10'000'000;
    std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
    long hits = 0;
    for (long s = 0; s < samples; ++s) {
      const Vec2 x(ux(rng), uy(rng));
      if (inside(a, x) != inside(b, x)) ++hits;
    }
    const double box = (hi.x() - lo.x()) * (hi.y() - lo.y());
    const double mc = box * double(hits) / double(samples);
    const double p_est = double(hits) / double(samples);
    const double sigma = box * std::sqrt(p_est * (1.0 - p_est) / double(samples));
    CHECK(std::abs(got - mc) < 3.0 * sigma + 1e-12);
  }
}

TEST_CASE("manifold distance: symmetry, positivity, triangle inequality on random triples") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    const ClosedPolygon a = gftest::random_star_polygon(rng, 8 + int(rng() % 16));
    const ClosedPolygon b = gftest::random_star_polygon(rng, 8 + int(rng() % 16));
    const ClosedPolygon c = gftest::random_star_polygon(rng, 8 + int(rng() % 16));
    const double ab = manifold_distance_2d(a, b);
    const double ba = manifold_distance_2d(b, a);
    const double ac = manifold_distance_2d(a, c);
    const double cb = manifold_distance_2d(c, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ab <= ac + cb + 1e-9);
  }
}

TEST_CASE("manifold distance is translation invariant") {
  std::mt19937_64 rng(78);
  const ClosedPolygon a = gftest::random_star_polygon(rng, 21);
  const ClosedPolygon b = gftest::random_star_polygon(rng, 17);
  const double d0 = manifold_distance_2d(a, b);
  const Vec2 shift(12.34, -5.67);
  const double d1 = manifold_distance_2d(translated(a, shift), translated(b, shift));
  CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
}

TEST_CASE("manifold distance rejects self-intersecting input") {
  const ClosedPolygon bowtie({Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)});
  CHECK_THROWS_AS(manifold_distance_2d(bowtie, square(0, 0, 1)), NonSimplePolygon);
}

// ---------------------------------------------------------------------------

TEST_CASE("3D distance: identical meshes give exactly zero") {
  const TriangleSurface t = make_torus(1.0, 0.4, 20, 10);
  const SampledVolume v = manifold_distance_3d(t, t, 64);
  CHECK(v.value == 0.0);
}

TEST_CASE("3D distance: offset unit cubes give 1 within 1%") {
  std::vector<Vec3> v1 = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                          {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  std::vector<std::array<int, 3>> f = {
      {0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
      {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
  std::vector<Vec3> v2 = v1;
  for (Vec3& p : v2) p.x() += 0.5;
  const TriangleSurface a(v1, f), b(v2, f);
  const SampledVolume d = manifold_distance_3d(a, b, 256);
  CHECK(d.value == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("3D distance: concentric spheres against the analytic shell volume") {
  const TriangleSurface s1 = make_icosphere(12, 1.0);
  const TriangleSurface s2 = make_icosphere(12, 1.1);
  const SampledVolume d = manifold_distance_3d(s1, s2, 256);
  const double analytic = 4.0 * kPi / 3.0 * (1.1 * 1.1 * 1.1 - 1.0);
  CHECK(d.value == doctest::Approx(analytic).epsilon(0.01));
}

TEST_CASE("3D distance refinement deltas shrink") {
  const TriangleSurface s1 = make_icosphere(6, 1.0);
  const TriangleSurface s2 = make_ellipsoid(1.05, 1.0, 0.95, 6);
  const SampledVolume d128 = manifold_distance_3d(s1, s2, 128);
  const SampledVolume d256 = manifold_distance_3d(s1, s2, 256);
  const SampledVolume d512 = manifold_distance_3d(s1, s2, 512);
  CHECK(std::abs(d512.value - d256.value) <= 2.0 * d256.refinement_delta + 1e-6);
  CHECK(std::abs(d512.value - d256.value) <= std::abs(d256.value - d128.value) + 1e-6);
  CHECK(d512.refinement_delta < 0.02 * d512.value + 1e-9);
}

TEST_CASE("3D distance is translation invariant within sampling error") {
  const TriangleSurface s1 = make_icosphere(6, 1.0);
  const TriangleSurface s2 = make_ellipsoid(1.1, 1.0, 1.0, 6);
  const double d0 = manifold_distance_3d(s1, s2, 128).value;
  std::vector<Vec3> v1 = s1.vertices(), v2 = s2.vertices();
  const Vec3 shift(3.21, -1.11, 0.77);
  for (Vec3& p : v1) p += shift;
  for (Vec3& p : v2) p += shift;
  const double d1 =
      manifold_distance_3d(s1.with_vertices(v1), s2.with_vertices(v2), 128).value;
  CHECK(d1 == doctest::Approx(d0).epsilon(0.02));
}

TEST_CASE("3D distance validates the resolution") {
  const TriangleSurface t = make_icosphere(3);
  CHECK_THROWS_AS(manifold_distance_3d(t, t, 32), InvalidArgument);
}

// ---------------------------------------------------------------------------

TEST_CASE("convergence table: exact halving orders") {
  const ErrorTable t = convergence_table({{0.1, 4e-3}, {0.05, 1e-3}});
  CHECK(std::isnan(t.rows[0].order));
  CHECK(t.rows[1].order == doctest::Approx(2.0).epsilon(1e-12));
  const ErrorTable t1 = convergence_table({{0.1, 2e-3}, {0.05, 1e-3}});
  CHECK(t1.rows[1].order == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convergence table on the published first-order error column") {
  const ErrorTable t = convergence_table(
      {{1.0 / 160, 8.58e-3}, {1.0 / 320, 4.02e-3}, {1.0 / 640, 1.96e-3}});
  CHECK(t.rows[1].order == doctest::Approx(1.09).epsilon(0.005));
  CHECK(t.rows[2].order == doctest::Approx(1.04).epsilon(0.005));
}

TEST_CASE("convergence table rejects bad input") {
  CHECK_THROWS_AS(convergence_table({{0.1, 1e-3}}), InvalidArgument);
  CHECK_THROWS_AS(convergence_table({{0.1, 1e-3}, {0.2, 1e-4}}), InvalidArgument);
  CHECK_THROWS_AS(convergence_table({{0.1, 1e-3}, {0.05, 0.0}}), NonPositiveError);
  CHECK_THROWS_AS(convergence_table({{0.1, 1e-3}, {0.05, -1.0}}), NonPositiveError);
}

TEST_CASE("error table CSV has the tau,error,order schema") {
  const ErrorTable t = convergence_table({{0.1, 4e-3}, {0.05, 1e-3}});
  std::ostringstream os;
  write_error_table(os, t);
  const std::string text = os.str();
  CHECK(text.find("tau,error,order\n") == 0);
  // First data row has an empty order field; second carries the order 2.
  std::istringstream is(text);
  std::string header, row1, row2;
  std::getline(is, header);
  std::getline(is, row1);
  std::getline(is, row2);
  CHECK(row1.back() == ',');
  CHECK(std::stod(row1) == doctest::Approx(0.1));
  CHECK(row1.find(",0.004") != std::string::npos);
  CHECK(row2.find("2.000000") != std::string::npos);
}

TEST_CASE("fitted order of a clean second-order sequence") {
  const ErrorTable t =
      convergence_table({{0.1, 1e-2}, {0.05, 2.5e-3}, {0.025, 6.25e-4}});
  CHECK(fitted_order(t) == doctest::Approx(2.0).epsilon(1e-10));
}
