#include "geoflow/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "snap_grid.hpp"

namespace geoflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_unit(const Vec2& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw InvalidNormal("direction has norm " + std::to_string(n.norm()));
}

// Derivatives in theta of sqrt(n^T G n) along n(theta) = (-sin, cos).
GammaDerivatives quadratic_form_term(const Mat2& G, double theta) {
  const Vec2 n(-std::sin(theta), std::cos(theta));
  const Vec2 t(std::cos(theta), std::sin(theta));  // dn/dtheta = -t
  const double q = n.dot(G * n);
  const double q1 = -2.0 * n.dot(G * t);
  const double q2 = 2.0 * (t.dot(G * t) - n.dot(G * n));
  const double s = std::sqrt(q);
  GammaDerivatives d;
  d.value = s;
  d.d1 = q1 / (2.0 * s);
  d.d2 = q2 / (2.0 * s) - q1 * q1 / (4.0 * q * s);
  return d;
}

}  // namespace

AnisotropyModel AnisotropyModel::isotropic() {
  AnisotropyModel m;
  m.family_ = AnisotropyFamily::Isotropic;
  m.finish_setup();
  return m;
}

AnisotropyModel AnisotropyModel::kfold(double beta, int k) {
  if (beta < 0.0) throw InvalidArgument("k-fold anisotropy needs beta >= 0");
  if (k != 2 && k != 3 && k != 4 && k != 6)
    throw InvalidArgument("k-fold anisotropy needs k in {2,3,4,6}");
  if (beta >= 1.0) throw InvalidArgument("k-fold anisotropy needs beta < 1 to keep gamma > 0");
  AnisotropyModel m;
  m.family_ = AnisotropyFamily::KFold;
  m.beta_ = beta;
  m.fold_ = k;
  m.finish_setup();
  return m;
}

AnisotropyModel AnisotropyModel::riemannian(std::vector<Mat2> g) {
  if (g.empty()) throw InvalidArgument("riemannian anisotropy needs at least one matrix");
  for (const Mat2& G : g) {
    if (std::abs(G(0, 1) - G(1, 0)) > 1e-14 * (1.0 + G.norm()))
      throw InvalidArgument("riemannian anisotropy matrices must be symmetric");
    if (G(0, 0) <= 0.0 || G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0) <= 0.0)
      throw InvalidArgument("riemannian anisotropy matrices must be positive definite");
  }
  AnisotropyModel m;
  m.family_ = AnisotropyFamily::Riemannian;
  m.g_ = std::move(g);
  m.finish_setup();
  return m;
}

AnisotropyModel AnisotropyModel::regularized_l1(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("regularized l1 needs eps in (0,1)");
  AnisotropyModel m;
  m.family_ = AnisotropyFamily::RegularizedL1;
  m.eps_ = eps;
  m.g_ = {Mat2{{1.0, 0.0}, {0.0, eps * eps}}, Mat2{{eps * eps, 0.0}, {0.0, 1.0}}};
  m.finish_setup();
  return m;
}

void AnisotropyModel::finish_setup() {
  switch (family_) {
    case AnisotropyFamily::Isotropic:
      min_gamma_ = 1.0;
      break;
    case AnisotropyFamily::KFold:
      min_gamma_ = 1.0 - beta_;
      break;
    default: {
      min_gamma_ = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 4096; ++i)
        min_gamma_ = std::min(min_gamma_, gamma_theta(kTwoPi * i / 4096).value);
    }
  }
  delta_ = 1e-2 * min_gamma_;

  // Stabilizer level: k must be large enough that, per edge, the energy
  // telescoping inequality
  //   (Z_k(n_p) q) . (q - p)/|p| >= |q| gamma(n_q) - |p| gamma(n_p)
  // holds for every old/new edge pair (p, q); positive definiteness of Z_k
  // alone does not make the semi-implicit step dissipative. In the local
  // frame of p (tangent angle psi, radius r of q) the requirement reads
  //   k >= (r gamma(th+psi) - gamma(th) - A(th, psi, r)) / (r sin psi)^2,
  // maximized over theta, psi, r; the r -> 1, psi -> 0 limit gives the
  // analytic floor (3 gamma + gamma'')/2 + gamma'^2/(4 gamma).
  const int nth = 512;
  std::vector<double> g(nth), g1(nth), g2(nth);
  for (int i = 0; i < nth; ++i) {
    const GammaDerivatives d = gamma_theta(kTwoPi * i / nth);
    g[i] = d.value;
    g1[i] = d.d1;
    g2[i] = d.d2;
  }
  double k_need = 0.0;
  for (int i = 0; i < nth; ++i)
    k_need = std::max(k_need, std::max(1.5 * g[i] + 0.5 * g2[i] + g1[i] * g1[i] / (4.0 * g[i]),
                                       g[i] + g1[i] * g1[i] / g[i]));
  static const double kRadii[] = {0.2, 0.35, 0.5, 0.7, 0.85, 0.95, 1.0,
                                  1.05, 1.15, 1.35, 1.7, 2.2, 3.0, 4.5, 7.0};
  for (int ip = 0; ip < nth; ++ip) {
    const double gp = g[ip], dgp = g1[ip];
    for (int ipsi = 1; ipsi < nth; ++ipsi) {
      const double psi = kTwoPi * ipsi / nth;
      const double s = std::sin(psi), c = std::cos(psi);
      if (std::abs(s) < 1e-6) continue;
      const double gq = g[(ip + ipsi) % nth];
      for (double r : kRadii) {
        const double xiq = r * (gp * s - dgp * c);
        const double a = gp * r * (r - c) - r * s * (2.0 * xiq + dgp);
        const double req = (r * gq - gp - a) / (r * r * s * s);
        k_need = std::max(k_need, req);
      }
    }
  }
  stabilizer_level_ = k_need;
}

AnisotropyModel AnisotropyModel::with_delta(double delta) const {
  if (!(delta > 0.0)) throw InvalidArgument("stabilizer margin delta must be positive");
  AnisotropyModel m = *this;
  m.delta_ = delta;
  return m;
}

AnisotropyModel AnisotropyModel::with_fixed_stabilizer(double k) const {
  AnisotropyModel m = *this;
  m.fixed_stabilizer_ = true;
  m.fixed_stabilizer_value_ = k;
  return m;
}

bool AnisotropyModel::strongly_anisotropic() const {
  if (family_ == AnisotropyFamily::Isotropic) return false;
  if (family_ == AnisotropyFamily::KFold) return beta_ > 1.0 / (fold_ * fold_ - 1.0);
  for (int i = 0; i < 4096; ++i) {
    const GammaDerivatives d = gamma_theta(kTwoPi * i / 4096);
    if (d.value + d.d2 < 0.0) return true;
  }
  return false;
}

GammaDerivatives AnisotropyModel::gamma_theta(double theta) const {
  GammaDerivatives d;
  switch (family_) {
    case AnisotropyFamily::Isotropic:
      d.value = 1.0;
      break;
    case AnisotropyFamily::KFold:
      d.value = 1.0 + beta_ * std::cos(fold_ * theta);
      d.d1 = -beta_ * fold_ * std::sin(fold_ * theta);
      d.d2 = -beta_ * fold_ * fold_ * std::cos(fold_ * theta);
      break;
    default:
      for (const Mat2& G : g_) {
        const GammaDerivatives t = quadratic_form_term(G, theta);
        d.value += t.value;
        d.d1 += t.d1;
        d.d2 += t.d2;
      }
  }
  return d;
}

double gamma(const AnisotropyModel& model, const Vec2& n) {
  check_unit(n);
  return model.gamma_theta(AnisotropyModel::theta_of(n)).value;
}

Vec2 xi_vector(const AnisotropyModel& model, const Vec2& n) {
  check_unit(n);
  const double theta = AnisotropyModel::theta_of(n);
  const GammaDerivatives d = model.gamma_theta(theta);
  const Vec2 t = perp(n);  // (cos theta, sin theta)
  return d.value * n - d.d1 * t;
}

double stabilizer(const AnisotropyModel& model, const Vec2& n) {
  check_unit(n);
  if (model.has_fixed_stabilizer()) return model.fixed_stabilizer_value();
  return model.stabilizer_level() + model.delta();
}

Mat2 zk_matrix(const AnisotropyModel& model, const Vec2& n) {
  check_unit(n);
  const Vec2 xi = xi_vector(model, n);
  const double g = model.gamma_theta(AnisotropyModel::theta_of(n)).value;
  const double k = stabilizer(model, n);
  return g * Mat2::Identity() - n * xi.transpose() - xi * n.transpose() +
         k * n * n.transpose();
}

double discrete_energy(const ClosedPolygon& poly, const AnisotropyModel& model) {
  const CurveEdges e = edge_data(poly);
  double w = 0.0;
  for (int j = 0; j < poly.size(); ++j) w += e.len[j] * gamma(model, e.normal[j]);
  return w;
}

namespace {

// One trimming pass: cut every localized ear (self-intersection whose index
// span is shorter than half the loop). Returns true if something was cut.
bool trim_ears_once(std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> poly_pts = pts;
  ClosedPolygon tmp(poly_pts);  // only for the snap frame
  const detail::SnapFrame frame = detail::make_snap_frame({&tmp});
  std::vector<detail::IPoint> ip(n);
  for (int i = 0; i < n; ++i) ip[i] = frame.snap(pts[i]);

  detail::EdgeGrid grid(ip, std::max(8, static_cast<int>(std::sqrt(double(n)))));
  std::vector<int> cand;
  struct Cut {
    int i, j;
    Vec2 at;
  };
  std::vector<Cut> cuts;
  std::vector<char> in_cut(n, 0);
  for (int i = 0; i < n; ++i) {
    grid.candidates(ip[i], ip[(i + 1) % n], cand);
    for (int j : cand) {
      if (j <= i) continue;
      if (j == (i + 1) % n || (j + 1) % n == i) continue;
      const detail::SegCross c =
          detail::segment_intersection(ip[i], ip[(i + 1) % n], ip[j], ip[(j + 1) % n]);
      if (c == detail::SegCross::None) continue;
      if (c == detail::SegCross::Degenerate)
        throw TrimFailure("degenerate envelope self-intersection; change the sample count");
      const int span = j - i;
      if (span > n / 2) continue;  // would excise the kept loop
      if (in_cut[i] || in_cut[j]) continue;
      const Vec2 a = pts[i], b = pts[(i + 1) % n];
      const Vec2 cseg = pts[j], dseg = pts[(j + 1) % n];
      const Vec2 r = b - a, s = dseg - cseg;
      const double denom = r.x() * s.y() - r.y() * s.x();
      const double t = ((cseg - a).x() * s.y() - (cseg - a).y() * s.x()) / denom;
      for (int k = i; k <= j; ++k) in_cut[k] = 1;
      cuts.push_back({i, j, a + t * r});
    }
  }
  if (cuts.empty()) return false;
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.i < b.i; });
  std::vector<Vec2> out;
  out.reserve(pts.size());
  int next = 0;
  for (const Cut& c : cuts) {
    for (int k = next; k <= c.i; ++k) out.push_back(pts[k]);
    out.push_back(c.at);
    next = c.j + 1;
  }
  for (int k = next; k < n; ++k) out.push_back(pts[k]);
  pts.swap(out);
  return true;
}

}  // namespace

WulffShape wulff_shape(const AnisotropyModel& model, int n_samples) {
  if (n_samples < 16) throw InvalidArgument("wulff_shape needs at least 16 samples");
  std::vector<Vec2> pts(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double theta = kTwoPi * i / n_samples;
    const GammaDerivatives d = model.gamma_theta(theta);
    const Vec2 n(-std::sin(theta), std::cos(theta));
    const Vec2 t(std::cos(theta), std::sin(theta));
    pts[i] = d.value * n - d.d1 * t;
  }
  // Start the loop at the sample closest to the origin; that point is on the
  // kept boundary, so no ear wraps around index 0.
  int start = 0;
  for (int i = 1; i < n_samples; ++i)
    if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
  std::rotate(pts.begin(), pts.begin() + start, pts.end());

  WulffShape w{ClosedPolygon(pts), model.strongly_anisotropic(), false};
  if (!w.strong) return w;

  for (int pass = 0; pass < 12; ++pass) {
    if (!trim_ears_once(pts)) break;
    w.trimmed = true;
  }
  ClosedPolygon trimmed(pts);
  if (!is_simple(trimmed)) throw TrimFailure("envelope still self-intersects after trimming");
  w.boundary = std::move(trimmed);
  return w;
}

}  // namespace geoflow
