#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroEdge : Error {
  explicit ZeroEdge(const std::string& what = "degenerate mesh: zero-length edge") : Error(what) {}
};

struct DegenerateFace : Error {
  explicit DegenerateFace(const std::string& what = "degenerate mesh: zero-area face") : Error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what = "field size does not match mesh") : Error(what) {}
};

struct InvalidNormal : Error {
  explicit InvalidNormal(const std::string& what = "direction is not a unit vector") : Error(what) {}
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& what = "linear system is singular or could not be solved to tolerance") : Error(what) {}
};

struct SingularNormalEquations : Error {
  explicit SingularNormalEquations(const std::string& what = "curvature normal equations are singular") : Error(what) {}
};

struct NonSimplePolygon : Error {
  explicit NonSimplePolygon(const std::string& what = "polygon is self-intersecting") : Error(what) {}
};

struct ClassificationFailure : Error {
  explicit ClassificationFailure(const std::string& what = "inside/outside classification is inconsistent") : Error(what) {}
};

struct TrimFailure : Error {
  explicit TrimFailure(const std::string& what = "could not trim envelope to a single simple loop") : Error(what) {}
};

struct UnknownShape : Error {
  explicit UnknownShape(const std::string& what = "unknown shape name") : Error(what) {}
};

struct NonPositiveError : Error {
  explicit NonPositiveError(const std::string& what = "errors must be positive") : Error(what) {}
};

struct NotConverged : Error {
  explicit NotConverged(const std::string& what = "flow did not reach the displacement threshold") : Error(what) {}
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Wraps a stepper/solver failure with the time step at which it occurred.
struct SteppingError : Error {
  long step;
  SteppingError(long step_, const std::string& what) : Error(what), step(step_) {}
};

}  // namespace geoflow
