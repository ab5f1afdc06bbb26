#pragma once

#include "lbspec/types.hpp"

namespace lbspec {

struct MdsResult {
  MatX coordinates;   // one row per input point, `dim` columns
  int achieved_rank;  // number of positive-eigenvalue axes actually used
};

// Classical (Torgerson) multidimensional scaling of the pairwise Euclidean
// distances between rows: double-centered squared-distance matrix, top-dim
// eigenpairs, coordinates scaled by sqrt(eigenvalue). If fewer than dim
// positive eigenvalues exist the trailing columns are zero and
// achieved_rank reports the deficiency.
MdsResult classical_mds(const MatX& rows, int dim);

}  // namespace lbspec
