#include "lbspec/fem_system.hpp"

namespace lbspec {

namespace {

SpMat take_submatrix(const SpMat& m, const std::vector<int>& kept,
                     const std::vector<int>& new_index) {
  std::vector<Triplet> triplets;
  triplets.reserve(m.nonZeros());
  for (int col = 0; col < m.outerSize(); ++col) {
    const int nc = new_index[col];
    if (nc < 0) continue;
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      const int nr = new_index[it.row()];
      if (nr < 0) continue;
      triplets.emplace_back(nr, nc, it.value());
    }
  }
  SpMat out(static_cast<int>(kept.size()), static_cast<int>(kept.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace

void reduce_dirichlet(const SpMat& full_k, const SpMat& full_b, const BoundarySet& boundary,
                      SpMat& reduced_k, SpMat& reduced_b, std::vector<int>& kept) {
  const int n = static_cast<int>(full_k.rows());
  std::vector<int> new_index(n, -1);
  kept.clear();
  for (int i = 0; i < n; ++i) {
    if (!boundary.contains(i)) {
      new_index[i] = static_cast<int>(kept.size());
      kept.push_back(i);
    }
  }
  if (kept.empty())
    throw ValidationError("no interior degrees of freedom after Dirichlet reduction");
  reduced_k = take_submatrix(full_k, kept, new_index);
  reduced_b = take_submatrix(full_b, kept, new_index);
}

VecX scatter_to_full(const VecX& reduced, const std::vector<int>& kept, int full_dim) {
  VecX full = VecX::Zero(full_dim);
  for (std::size_t i = 0; i < kept.size(); ++i) full[kept[i]] = reduced[static_cast<int>(i)];
  return full;
}

}  // namespace lbspec
