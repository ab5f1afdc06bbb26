#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace lbspec {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Points = Eigen::MatrixX3d;   // one point per row
using Faces = Eigen::MatrixX3i;    // one vertex-index triple per row
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

enum class BasisOrder { linear, quadratic, cubic };
enum class BoundaryCondition { dirichlet, neumann, closed };

inline const char* to_string(BasisOrder o) {
  switch (o) {
    case BasisOrder::linear: return "linear";
    case BasisOrder::quadratic: return "quadratic";
    case BasisOrder::cubic: return "cubic";
  }
  return "?";
}

inline const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::neumann: return "neumann";
    case BoundaryCondition::closed: return "closed";
  }
  return "?";
}

// File could not be read or does not follow its declared format.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Input data violates a documented precondition or invariant.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (factorization breakdown, non-convergence, ...).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lbspec
