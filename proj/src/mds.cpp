#include "lbspec/mds.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace lbspec {

MdsResult classical_mds(const MatX& rows, int dim) {
  const int n = static_cast<int>(rows.rows());
  if (dim != 2 && dim != 3) throw ValidationError("mds dimension must be 2 or 3");
  if (n < dim + 1)
    throw ValidationError("mds needs at least dim+1 points, got " + std::to_string(n));

  MatX sq_dist(n, n);
  for (int i = 0; i < n; ++i) {
    sq_dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (rows.row(i) - rows.row(j)).squaredNorm();
      sq_dist(i, j) = sq_dist(j, i) = d2;
    }
  }

  // Gram matrix via double centering: G = -1/2 J D2 J.
  const VecX row_mean = sq_dist.rowwise().mean();
  const double total_mean = row_mean.mean();
  MatX gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = -0.5 * (sq_dist(i, j) - row_mean[i] - row_mean[j] + total_mean);

  Eigen::SelfAdjointEigenSolver<MatX> eig(gram);
  const VecX& values = eig.eigenvalues();  // ascending
  const MatX& vectors = eig.eigenvectors();
  const double floor = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);

  MdsResult result;
  result.coordinates = MatX::Zero(n, dim);
  result.achieved_rank = 0;
  for (int a = 0; a < dim; ++a) {
    const int idx = n - 1 - a;
    if (idx < 0 || values[idx] <= floor) break;
    result.coordinates.col(a) = vectors.col(idx) * std::sqrt(values[idx]);
    ++result.achieved_rank;
  }
  return result;
}

}  // namespace lbspec
