#pragma once

#include <cstdint>

#include "lbspec/types.hpp"

namespace lbspec {

// Leading part of a generalized symmetric eigenproblem K U = lambda B U.
struct Spectrum {
  VecX eigenvalues;    // ascending
  MatX eigenvectors;   // one column per pair, B-orthonormal; empty if not requested
  VecX residuals;      // ||K u - lambda B u|| / (||K u|| + |lambda| ||B u||)
  int matrix_dim = 0;  // N of the solved system
  bool clamped_negative = false;  // tiny negative eigenvalues floored to 0

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

struct SolveOptions {
  double tol = 1e-8;               // relative residual target
  std::uint64_t seed = 0x1b5bec;  // starting-vector seed
  bool want_vectors = true;
  // Scale of the smallest eigenvalues (e.g. 1/diameter^2 for LB spectra).
  // Sets the shift-invert target; 0 falls back to a trace-based guess.
  double shift_scale = 0.0;
  int max_restarts = 0;            // 0 -> 50 * k
};

// k smallest eigenpairs by shift-invert Lanczos with full B-orthogonal
// reorthogonalization and thick restarts. Deterministic for a fixed seed.
Spectrum smallest_eigenpairs(const SpMat& stiffness, const SpMat& mass, int k,
                             const SolveOptions& opts = {});

// Dense test oracle: the full ascending spectrum via B = L L^T and a
// symmetric eigendecomposition of L^-1 K L^-T. Guarded to N <= 3000.
VecX dense_generalized_eig(const MatX& stiffness, const MatX& mass);

}  // namespace lbspec
