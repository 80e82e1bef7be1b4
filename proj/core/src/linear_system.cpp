#include "geoflow/linear_system.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "geoflow/errors.hpp"

namespace geoflow {

struct SparseSystem::Impl {
  Eigen::SparseMatrix<double> mat;
  double inf_norm = 0.0;
};

SparseSystem::SparseSystem(int dim) : dim_(dim), rhs_(dim, 0.0) {
  if (dim <= 0) throw InvalidArgument("system dimension must be positive");
}

void SparseSystem::add(int row, int col, double value) {
  if (finalized_) throw InvalidArgument("cannot add entries after finalize()");
  if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
    throw InvalidArgument("triplet index out of range");
  if (value == 0.0) return;
  rows_.push_back(row);
  cols_.push_back(col);
  vals_.push_back(value);
}

void SparseSystem::add_rhs(int i, double value) { rhs_.at(i) += value; }
void SparseSystem::set_rhs(int i, double value) { rhs_.at(i) = value; }

void SparseSystem::finalize() {
  if (finalized_) return;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(vals_.size());
  for (size_t k = 0; k < vals_.size(); ++k) trips.emplace_back(rows_[k], cols_[k], vals_[k]);
  auto impl = std::make_shared<Impl>();
  impl->mat.resize(dim_, dim_);
  impl->mat.setFromTriplets(trips.begin(), trips.end());
  impl->mat.makeCompressed();
  // Row sums of |A| via one pass over the columns.
  std::vector<double> rowsum(dim_, 0.0);
  for (int k = 0; k < impl->mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(impl->mat, k); it; ++it)
      rowsum[it.row()] += std::abs(it.value());
  for (double r : rowsum) impl->inf_norm = std::max(impl->inf_norm, r);
  impl_ = std::move(impl);
  finalized_ = true;
}

bool SparseSystem::structurally_symmetric() const {
  if (!finalized_) return false;
  Eigen::SparseMatrix<double> t = impl_->mat.transpose();
  if (t.nonZeros() != impl_->mat.nonZeros()) return false;
  for (int k = 0; k < impl_->mat.outerSize(); ++k) {
    Eigen::SparseMatrix<double>::InnerIterator a(impl_->mat, k), b(t, k);
    for (; a && b; ++a, ++b)
      if (a.row() != b.row()) return false;
    if (a || b) return false;
  }
  return true;
}

std::vector<double> SparseSystem::solve(double rel_tol) const {
  if (!finalized_) throw InvalidArgument("solve() requires a finalized system");
  if (!(rel_tol > 0.0) || rel_tol > 1e-6)
    throw InvalidArgument("rel_tol must lie in (0, 1e-6]");

  const Eigen::SparseMatrix<double>& A = impl_->mat;
  Eigen::Map<const Eigen::VectorXd> b(rhs_.data(), dim_);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("sparse LU factorization failed: " + lu.lastErrorMessage());

  Eigen::VectorXd x = lu.solve(b);
  const double bnorm = b.norm();
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::VectorXd r = b - A * x;
    if (r.norm() <= rel_tol * (impl_->inf_norm * x.norm() + bnorm))
      return std::vector<double>(x.data(), x.data() + dim_);
    x += lu.solve(r);
  }
  const double res = (b - A * x).norm();
  if (res <= rel_tol * (impl_->inf_norm * x.norm() + bnorm))
    return std::vector<double>(x.data(), x.data() + dim_);
  throw SingularSystem("solve did not reach the residual tolerance (residual " +
                       std::to_string(res) + ")");
}

void SparseSystem::dump(std::ostream& os) const {
  os << dim_ << " " << vals_.size() << "\n";
  char buf[96];
  for (size_t k = 0; k < vals_.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", rows_[k], cols_[k], vals_[k]);
    os << buf;
  }
  for (double v : rhs_) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    os << buf;
  }
}

}  // namespace geoflow
