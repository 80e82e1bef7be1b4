#pragma once

// Surface-energy densities gamma(n), their Cahn-Hoffman xi-vector, the
// stabilizing function k(n), the stabilized matrix Z_k(n), and the Wulff
// construction of equilibrium shapes.
//
// Angle convention: theta is the angle between the y-axis and the normal,
// n(theta) = (-sin theta, cos theta). The edge tangent of a clockwise
// polygon is t = n^perp = (cos theta, sin theta), and the gradient of the
// degree-1 homogeneous extension of gamma evaluates to
//   xi(n) = gamma(theta) n - gamma'(theta) t,
// which satisfies xi.n = gamma (Euler identity) and Z_k(n) t = xi^perp.

#include <vector>

#include <Eigen/Core>

#include "geoflow/curve.hpp"

namespace geoflow {

using Mat2 = Eigen::Matrix2d;

enum class AnisotropyFamily { Isotropic, KFold, Riemannian, RegularizedL1 };

struct GammaDerivatives {
  double value = 0, d1 = 0, d2 = 0;  // gamma, gamma', gamma'' at theta
};

class AnisotropyModel {
 public:
  static AnisotropyModel isotropic();
  // gamma = 1 + beta cos(k theta); beta >= 0, k in {2,3,4,6}.
  static AnisotropyModel kfold(double beta, int k);
  // gamma = sum_l sqrt(n^T G_l n), each G_l symmetric positive definite.
  static AnisotropyModel riemannian(std::vector<Mat2> g);
  // gamma = sqrt(n1^2 + eps^2 n2^2) + sqrt(eps^2 n1^2 + n2^2), eps in (0,1).
  static AnisotropyModel regularized_l1(double eps);

  AnisotropyFamily family() const { return family_; }
  double beta() const { return beta_; }
  int fold() const { return fold_; }
  double eps() const { return eps_; }
  const std::vector<Mat2>& matrices() const { return g_; }

  // Safety margin of the stabilizer; defaults to 1e-2 * min_theta gamma.
  double delta() const { return delta_; }
  AnisotropyModel with_delta(double delta) const;
  // Replace k(n) by a constant (e.g. k = 2 makes Z the identity when
  // gamma = 1); used for scheme-equivalence checks.
  AnisotropyModel with_fixed_stabilizer(double k) const;
  bool has_fixed_stabilizer() const { return fixed_stabilizer_; }
  double fixed_stabilizer_value() const { return fixed_stabilizer_value_; }

  double min_gamma() const { return min_gamma_; }
  // Smallest constant k for which the edgewise energy inequality
  // (Z_k(n_p) q).(q - p)/|p| >= |q| gamma(n_q) - |p| gamma(n_p) holds for
  // all edge pairs; the first-order anisotropic step decreases the discrete
  // energy when k(n) is at or above this level.
  double stabilizer_level() const { return stabilizer_level_; }
  // True if min_theta (gamma + gamma'') < 0; for the k-fold family this is
  // beta > 1/(k^2 - 1).
  bool strongly_anisotropic() const;

  GammaDerivatives gamma_theta(double theta) const;

  static double theta_of(const Vec2& n) { return std::atan2(-n.x(), n.y()); }

 private:
  AnisotropyModel() = default;
  void finish_setup();

  AnisotropyFamily family_ = AnisotropyFamily::Isotropic;
  double beta_ = 0;
  int fold_ = 0;
  double eps_ = 0;
  std::vector<Mat2> g_;
  double delta_ = 0;
  double min_gamma_ = 1;
  double stabilizer_level_ = 0;
  bool fixed_stabilizer_ = false;
  double fixed_stabilizer_value_ = 0;
};

// All directional evaluators require |n| = 1 within 1e-12 (InvalidNormal).
double gamma(const AnisotropyModel& model, const Vec2& n);
Vec2 xi_vector(const AnisotropyModel& model, const Vec2& n);
// k(n) = stabilizer_level() + delta (unless overridden). This is at least
// gamma + gamma'^2/gamma + delta, so Z_k(n) stays positive definite, and
// large enough that the semi-implicit anisotropic step is dissipative.
double stabilizer(const AnisotropyModel& model, const Vec2& n);
// Z_k(n) = gamma I - n xi^T - xi n^T + k(n) n n^T.
Mat2 zk_matrix(const AnisotropyModel& model, const Vec2& n);

// Discrete anisotropic energy W = sum_j |h_j| gamma(n_j); equals the
// perimeter for gamma = 1.
double discrete_energy(const ClosedPolygon& poly, const AnisotropyModel& model);

struct WulffShape {
  ClosedPolygon boundary;
  bool strong = false;   // strongly anisotropic energy
  bool trimmed = false;  // self-intersecting ears were removed
};

// Samples the envelope x(theta) = xi(n(theta)) at n_samples angles; for
// strongly anisotropic densities the self-intersecting ears are cut at the
// exact crossing points, keeping the inner loop around the origin.
// Throws TrimFailure if that does not produce a single simple loop.
WulffShape wulff_shape(const AnisotropyModel& model, int n_samples);

}  // namespace geoflow
