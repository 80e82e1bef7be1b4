#pragma once

// Assembly and deterministic solution of the sparse symmetric indefinite
// saddle-point systems produced by the time-stepping schemes.
//
// Unknown ordering convention, shared by the 2D and 3D assemblers:
// scalar unknowns (kappa / mu / H) first, then position components
// interleaved per node (x0,y0[,z0],x1,...). Auxiliary scalars (e.g. the
// mean-curvature multiplier of AP-CSF) go last.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace geoflow {

class SparseSystem {
 public:
  explicit SparseSystem(int dim);

  int dim() const { return dim_; }

  // Accumulates A(row,col) += value. Duplicates are summed on finalize.
  void add(int row, int col, double value);
  void add_rhs(int i, double value);
  void set_rhs(int i, double value);
  const std::vector<double>& rhs() const { return rhs_; }

  // Builds the compressed matrix; add() is rejected afterwards.
  void finalize();
  bool finalized() const { return finalized_; }

  // Pattern symmetry of the finalized matrix (diagnostic; not required by solve).
  bool structurally_symmetric() const;

  // Direct sparse LU solve with iterative refinement until
  //   ||Ax - b||_2 <= rel_tol * (||A||_inf ||x||_2 + ||b||_2).
  // Deterministic: identical finalized systems give bit-identical results.
  // Throws SingularSystem on rank deficiency or an unreachable tolerance.
  std::vector<double> solve(double rel_tol = 1e-12) const;

  // Plain-text triplet dump: "dim nnz", then "row col value" lines, then the
  // right-hand side, one entry per line.
  void dump(std::ostream& os) const;

 private:
  struct Impl;
  int dim_ = 0;
  bool finalized_ = false;
  std::vector<int> rows_, cols_;
  std::vector<double> vals_;
  std::vector<double> rhs_;
  std::shared_ptr<Impl> impl_;  // compressed matrix, created by finalize()
};

}  // namespace geoflow
