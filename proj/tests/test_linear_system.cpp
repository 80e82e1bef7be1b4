#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "geoflow/errors.hpp"
#include "geoflow/linear_system.hpp"

using namespace geoflow;

TEST_CASE("identity system returns the right-hand side") {
  SparseSystem sys(5);
  for (int i = 0; i < 5; ++i) {
    sys.add(i, i, 1.0);
    sys.set_rhs(i, 0.5 * i - 1.0);
  }
  sys.finalize();
  const std::vector<double> x = sys.solve();
  for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(0.5 * i - 1.0).epsilon(1e-15));
}

TEST_CASE("2x2 saddle permutation") {
  SparseSystem sys(2);
  sys.add(0, 1, 1.0);
  sys.add(1, 0, 1.0);
  sys.set_rhs(0, 1.0);
  sys.set_rhs(1, 2.0);
  sys.finalize();
  const std::vector<double> x = sys.solve();
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

namespace {

// Random sparse symmetric indefinite system; returns triplets mirrored about
// the diagonal plus an indefinite diagonal.
void fill_random_symmetric(SparseSystem& sys, Eigen::MatrixXd& dense, std::mt19937_64& rng,
                           int n) {
  dense = Eigen::MatrixXd::Zero(n, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> idx(0, n - 1);
  for (int k = 0; k < 6 * n; ++k) {
    const int i = idx(rng), j = idx(rng);
    const double v = u(rng);
    sys.add(i, j, v);
    dense(i, j) += v;
    if (i != j) {
      sys.add(j, i, v);
      dense(j, i) += v;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double d = (i % 2 == 0 ? 4.0 : -4.0) + u(rng);
    sys.add(i, i, d);
    dense(i, i) += d;
  }
}

}  // namespace

TEST_CASE("random 300x300 symmetric indefinite system matches a dense factorization oracle") {
  std::mt19937_64 rng(42);
  const int n = 300;
  SparseSystem sys(n);
  Eigen::MatrixXd dense;
  fill_random_symmetric(sys, dense, rng, n);
  Eigen::VectorXd b(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    b[i] = u(rng);
    sys.set_rhs(i, b[i]);
  }
  sys.finalize();
  CHECK(sys.structurally_symmetric());
  const std::vector<double> x = sys.solve(1e-12);

  // Independent route: dense full-pivot LU.
  const Eigen::VectorXd xd = dense.fullPivLu().solve(b);
  double maxdiff = 0.0;
  for (int i = 0; i < n; ++i) maxdiff = std::max(maxdiff, std::abs(x[i] - xd[i]));
  CHECK(maxdiff < 1e-10 * xd.norm());

  Eigen::VectorXd xe(n);
  for (int i = 0; i < n; ++i) xe[i] = x[i];
  CHECK((dense * xe - b).norm() < 1e-12 * (dense.norm() * xe.norm() + b.norm()));
}

TEST_CASE("solve is deterministic bit for bit") {
  std::mt19937_64 rng(43);
  const int n = 120;
  SparseSystem sys(n);
  Eigen::MatrixXd dense;
  fill_random_symmetric(sys, dense, rng, n);
  for (int i = 0; i < n; ++i) sys.set_rhs(i, std::sin(1.0 + i));
  sys.finalize();
  const std::vector<double> x1 = sys.solve();
  const std::vector<double> x2 = sys.solve();
  for (int i = 0; i < n; ++i) CHECK(x1[i] == x2[i]);
}

TEST_CASE("solve(alpha A, alpha b) equals solve(A, b)") {
  std::mt19937_64 rng(44);
  const int n = 80;
  SparseSystem a(n), s(n);
  Eigen::MatrixXd dense;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  {
    std::mt19937_64 rng2(44);
    fill_random_symmetric(a, dense, rng2, n);
  }
  {
    std::mt19937_64 rng2(44);
    Eigen::MatrixXd d2;
    SparseSystem tmp(n);
    fill_random_symmetric(tmp, d2, rng2, n);
    // Rebuild scaled by alpha.
    const double alpha = 37.5;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d2(i, j) != 0.0) s.add(i, j, alpha * d2(i, j));
    for (int i = 0; i < n; ++i) {
      const double bi = u(rng);
      a.set_rhs(i, bi);
      s.set_rhs(i, alpha * bi);
    }
  }
  a.finalize();
  s.finalize();
  const std::vector<double> xa = a.solve();
  const std::vector<double> xs = s.solve();
  for (int i = 0; i < n; ++i) CHECK(xa[i] == doctest::Approx(xs[i]).epsilon(1e-11));
}

TEST_CASE("singular system reports SingularSystem") {
  SparseSystem sys(3);
  sys.add(0, 0, 1.0);
  sys.add(1, 1, 1.0);
  // Row/column 2 is empty: structurally singular.
  sys.set_rhs(2, 1.0);
  sys.finalize();
  CHECK_THROWS_AS(sys.solve(), SingularSystem);
}

TEST_CASE("rel_tol outside (0, 1e-6] is rejected") {
  SparseSystem sys(1);
  sys.add(0, 0, 1.0);
  sys.finalize();
  CHECK_THROWS_AS(sys.solve(1e-3), InvalidArgument);
  CHECK_THROWS_AS(sys.solve(0.0), InvalidArgument);
}

TEST_CASE("triplet dump contains dimension, entries and the rhs") {
  SparseSystem sys(2);
  sys.add(0, 0, 2.0);
  sys.add(1, 0, -1.0);
  sys.set_rhs(1, 3.5);
  std::ostringstream os;
  sys.dump(os);
  const std::string text = os.str();
  CHECK(text.find("2 2") == 0);
  CHECK(text.find("1 0 -1") != std::string::npos);
  CHECK(text.find("3.5") != std::string::npos);
}
