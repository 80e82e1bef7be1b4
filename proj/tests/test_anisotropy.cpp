#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "geoflow/anisotropy.hpp"
#include "geoflow/shapes.hpp"

using namespace geoflow;

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 normal_at(double theta) { return Vec2(-std::sin(theta), std::cos(theta)); }

// Degree-1 homogeneous extension gamma(p) = |p| gamma(p/|p|).
double homogeneous_gamma(const AnisotropyModel& m, const Vec2& p) {
  const double r = p.norm();
  return r * geoflow::gamma(m, p / r);
}

std::vector<AnisotropyModel> the_three_families() {
  return {AnisotropyModel::kfold(0.05, 4),
          AnisotropyModel::riemannian({Mat2{{1.0, 0.0}, {0.0, 2.0}}}),
          AnisotropyModel::regularized_l1(0.01)};
}

}  // namespace

TEST_CASE("k-fold gamma values and the strong-anisotropy predicate") {
  const AnisotropyModel m = AnisotropyModel::kfold(0.05, 4);
  CHECK(gamma(m, normal_at(0.0)) == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(!m.strongly_anisotropic());
  CHECK(AnisotropyModel::kfold(0.2, 4).strongly_anisotropic());  // 0.2 > 1/15
  CHECK(AnisotropyModel::kfold(1.0 / 15.0 - 1e-6, 4).strongly_anisotropic() == false);
  CHECK(AnisotropyModel::kfold(0.1, 6).strongly_anisotropic());  // 0.1 > 1/35
}

TEST_CASE("Riemannian gamma on diag(1,2)") {
  const AnisotropyModel m = AnisotropyModel::riemannian({Mat2{{1.0, 0.0}, {0.0, 2.0}}});
  CHECK(gamma(m, Vec2(0, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(gamma(m, Vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("non-unit directions are rejected") {
  const AnisotropyModel m = AnisotropyModel::kfold(0.05, 4);
  CHECK_THROWS_AS(gamma(m, Vec2(1.0, 1.0)), InvalidNormal);
  CHECK_THROWS_AS(xi_vector(m, Vec2(0.5, 0.0)), InvalidNormal);
  CHECK_THROWS_AS(zk_matrix(m, Vec2(0.0, 1.0 + 1e-9)), InvalidNormal);
}

TEST_CASE("xi equals n for isotropic densities") {
  for (const AnisotropyModel& m :
       {AnisotropyModel::isotropic(), AnisotropyModel::riemannian({Mat2::Identity()})}) {
    for (int i = 0; i < 16; ++i) {
      const Vec2 n = normal_at(2.0 * kPi * i / 16);
      CHECK((xi_vector(m, n) - n).norm() < 1e-13);
    }
  }
}

TEST_CASE("xi matches central finite differences of the homogeneous extension") {
  const double h = 1e-6;
  for (const AnisotropyModel& m : the_three_families()) {
    for (int i = 0; i < 64; ++i) {
      const Vec2 n = normal_at(2.0 * kPi * (i + 0.37) / 64);
      const Vec2 xi = xi_vector(m, n);
      const Vec2 fd((homogeneous_gamma(m, n + Vec2(h, 0)) - homogeneous_gamma(m, n - Vec2(h, 0))) /
                        (2 * h),
                    (homogeneous_gamma(m, n + Vec2(0, h)) - homogeneous_gamma(m, n - Vec2(0, h))) /
                        (2 * h));
      CHECK((xi - fd).norm() < 1e-6);
    }
  }
}

TEST_CASE("gamma_theta derivatives match finite differences in theta") {
  const double h = 1e-5;
  for (const AnisotropyModel& m : the_three_families()) {
    for (int i = 0; i < 32; ++i) {
      const double t = 2.0 * kPi * (i + 0.21) / 32;
      const GammaDerivatives d = m.gamma_theta(t);
      const double g1 = (m.gamma_theta(t + h).value - m.gamma_theta(t - h).value) / (2 * h);
      const double g2 =
          (m.gamma_theta(t + h).value - 2 * d.value + m.gamma_theta(t - h).value) / (h * h);
      CHECK(d.d1 == doctest::Approx(g1).epsilon(1e-7).scale(1.0));
      CHECK(d.d2 == doctest::Approx(g2).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("stabilizer: energy-sufficient level; fixed k=2 makes Z the identity for gamma=1") {
  const AnisotropyModel iso = AnisotropyModel::isotropic();
  // The level exceeds the bare positive-definiteness floor gamma + gamma'^2/gamma
  // and sits at the local dissipativity bound (3 gamma + gamma'')/2 = 1.5.
  CHECK(stabilizer(iso, Vec2(0, 1)) >= 1.0 + iso.delta());
  CHECK(stabilizer(iso, Vec2(0, 1)) == doctest::Approx(1.5 + iso.delta()).epsilon(1e-3));
  CHECK(iso.delta() == doctest::Approx(0.01));

  const AnisotropyModel fixed = iso.with_fixed_stabilizer(2.0);
  const Mat2 z = zk_matrix(fixed, normal_at(0.77));
  CHECK((z - Mat2::Identity()).norm() < 1e-14);

  // beta = 0 k-fold is isotropic again.
  const AnisotropyModel flat = AnisotropyModel::kfold(0.0, 6);
  CHECK(stabilizer(flat, normal_at(1.3)) ==
        doctest::Approx(stabilizer(iso, normal_at(1.3))).epsilon(1e-6));
}

TEST_CASE("stabilizer level satisfies the edgewise energy inequality (random pairs)") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> urad(0.1, 5.0);
  for (const AnisotropyModel& m :
       {AnisotropyModel::kfold(0.05, 4), AnisotropyModel::kfold(0.2, 4),
        AnisotropyModel::regularized_l1(0.01)}) {
    for (int rep = 0; rep < 4000; ++rep) {
      const double a1 = uang(rng), a2 = uang(rng);
      const Vec2 p(std::cos(a1), std::sin(a1));
      const Vec2 q = urad(rng) * Vec2(std::cos(a2), std::sin(a2));
      const Vec2 np = -perp(p);  // p as a unit edge vector
      const Vec2 nq = -perp(q).normalized();
      const double lhs = (zk_matrix(m, np) * q).dot(q - p);
      const double rhs = q.norm() * gamma(m, nq) - gamma(m, np);
      CHECK(lhs >= rhs - 1e-12);
    }
  }
}

TEST_CASE("Z_k is symmetric positive definite at 360 angles for all families") {
  auto models = the_three_families();
  models.push_back(AnisotropyModel::kfold(0.2, 4));  // strong case
  for (const AnisotropyModel& m : models) {
    for (int i = 0; i < 360; ++i) {
      const Vec2 n = normal_at(2.0 * kPi * i / 360);
      const Mat2 z = zk_matrix(m, n);
      CHECK(std::abs(z(0, 1) - z(1, 0)) < 1e-13);
      Eigen::SelfAdjointEigenSolver<Mat2> es(z);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("Z_k t = xi^perp at 360 angles (the reformulation identity)") {
  for (const AnisotropyModel& m : the_three_families()) {
    for (int i = 0; i < 360; ++i) {
      const Vec2 n = normal_at(2.0 * kPi * i / 360);
      const Vec2 t = perp(n);
      const Vec2 lhs = zk_matrix(m, n) * t;
      const Vec2 rhs = perp(xi_vector(m, n));
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }
}

TEST_CASE("Z_k in the (n,t) basis equals [[k-gamma, gamma'],[gamma', gamma]]") {
  const AnisotropyModel m = AnisotropyModel::kfold(0.05, 4);
  const double theta = 0.0;
  const Vec2 n = normal_at(theta);
  const Vec2 t = perp(n);
  const Mat2 z = zk_matrix(m, n);
  const GammaDerivatives d = m.gamma_theta(theta);
  const double k = stabilizer(m, n);
  CHECK(n.dot(z * n) == doctest::Approx(k - d.value).epsilon(1e-13));
  CHECK(t.dot(z * t) == doctest::Approx(d.value).epsilon(1e-13));
  CHECK(n.dot(z * t) == doctest::Approx(d.d1).epsilon(1e-13).scale(1.0));
  // Hand evaluation at theta = 0 for the 4-fold case: gamma = 1.05, gamma' = 0.
  CHECK(t.dot(z * t) == doctest::Approx(1.05));
  CHECK(n.dot(z * n) ==
        doctest::Approx(m.stabilizer_level() + m.delta() - 1.05).epsilon(1e-12));
}

TEST_CASE("Euler identity and symmetry at 360 angles") {
  for (const AnisotropyModel& m : the_three_families()) {
    for (int i = 0; i < 360; ++i) {
      const Vec2 n = normal_at(2.0 * kPi * i / 360);
      CHECK(xi_vector(m, n).dot(n) == doctest::Approx(gamma(m, n)).epsilon(1e-12));
      CHECK(gamma(m, -n) == doctest::Approx(gamma(m, n)).epsilon(1e-12));
      CHECK((xi_vector(m, -n) + xi_vector(m, n)).norm() < 1e-12);
    }
  }
}

TEST_CASE("discrete energy: isotropic equals perimeter; diag(1,2) on the unit square") {
  const ClosedPolygon sq({Vec2(0, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, 0)});
  CHECK(discrete_energy(sq, AnisotropyModel::isotropic()) == doctest::Approx(4.0));
  const AnisotropyModel riem = AnisotropyModel::riemannian({Mat2{{1.0, 0.0}, {0.0, 2.0}}});
  CHECK(discrete_energy(sq, riem) == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
  const ClosedPolygon flower = make_flower(128);
  CHECK(discrete_energy(flower, AnisotropyModel::kfold(0.0, 4)) ==
        doctest::Approx(perimeter(flower)).epsilon(1e-14));
}

TEST_CASE("Wulff shape: isotropic gives the unit circle") {
  const WulffShape w = wulff_shape(AnisotropyModel::isotropic(), 256);
  CHECK(!w.strong);
  CHECK(!w.trimmed);
  for (const Vec2& p : w.boundary.vertices()) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weak 4-fold Wulff shape is convex and untrimmed") {
  const AnisotropyModel m = AnisotropyModel::kfold(0.05, 4);
  // Oracle: weak anisotropy means gamma + gamma'' > 0 everywhere.
  bool convex_by_oracle = true;
  for (int i = 0; i < 720; ++i) {
    const GammaDerivatives d = m.gamma_theta(2.0 * kPi * i / 720);
    convex_by_oracle = convex_by_oracle && (d.value + d.d2 > 0.0);
  }
  CHECK(convex_by_oracle);
  const WulffShape w = wulff_shape(m, 512);
  CHECK(!w.trimmed);
  // All consecutive edge cross products share one sign.
  const auto& v = w.boundary.vertices();
  const int n = w.boundary.size();
  int sign = 0;
  for (int j = 0; j < n; ++j) {
    const Vec2 e1 = v[(j + 1) % n] - v[j];
    const Vec2 e2 = v[(j + 2) % n] - v[(j + 1) % n];
    const double cr = e1.x() * e2.y() - e1.y() * e2.x();
    if (std::abs(cr) < 1e-18) continue;
    if (sign == 0) sign = cr > 0 ? 1 : -1;
    CHECK(cr * sign > 0.0);
  }
}

TEST_CASE("strong 4-fold Wulff shape is trimmed with 4 corners") {
  const AnisotropyModel m = AnisotropyModel::kfold(0.2, 4);
  const WulffShape w = wulff_shape(m, 2048);
  CHECK(w.strong);
  CHECK(w.trimmed);
  CHECK(is_simple(w.boundary));
  // Corner count: vertices with turning angle above 20 degrees.
  const auto& v = w.boundary.vertices();
  const int n = w.boundary.size();
  int corners = 0;
  for (int j = 0; j < n; ++j) {
    const Vec2 e1 = (v[j] - v[(j + n - 1) % n]).normalized();
    const Vec2 e2 = (v[(j + 1) % n] - v[j]).normalized();
    if (std::acos(std::clamp(e1.dot(e2), -1.0, 1.0)) > 20.0 * kPi / 180.0) ++corners;
  }
  CHECK(corners == 4);

  // 4-fold symmetry of the trimmed boundary: area and perimeter invariant
  // under 90-degree rotation is implied; check the support radii.
  double rmin = 1e300, rmax = 0;
  for (const Vec2& p : v) {
    rmin = std::min(rmin, p.norm());
    rmax = std::max(rmax, p.norm());
  }
  CHECK(rmax < 1.2 + 1e-9);  // ears (|x| up to gamma(0) = 1.2) are gone only if...
  CHECK(rmin > 0.0);
}

TEST_CASE("strong 6-fold Wulff shape trims to 6 corners") {
  const WulffShape w = wulff_shape(AnisotropyModel::kfold(0.1, 6), 2048);
  CHECK(w.trimmed);
  const auto& v = w.boundary.vertices();
  const int n = w.boundary.size();
  int corners = 0;
  for (int j = 0; j < n; ++j) {
    const Vec2 e1 = (v[j] - v[(j + n - 1) % n]).normalized();
    const Vec2 e2 = (v[(j + 1) % n] - v[j]).normalized();
    if (std::acos(std::clamp(e1.dot(e2), -1.0, 1.0)) > 15.0 * kPi / 180.0) ++corners;
  }
  CHECK(corners == 6);
}
