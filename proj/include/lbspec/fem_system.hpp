#pragma once

#include <algorithm>
#include <vector>

#include "lbspec/types.hpp"

namespace lbspec {

// Global node indices lying on the object boundary, sorted ascending.
struct BoundarySet {
  std::vector<int> nodes;

  bool contains(int id) const {
    return std::binary_search(nodes.begin(), nodes.end(), id);
  }
  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
};

// Assembled stiffness/mass pair. For Dirichlet systems the matrices are the
// reduced ones (boundary rows/columns deleted) and `kept` maps reduced
// indices back to full node ids; otherwise `kept` is the identity.
struct FemSystem {
  SpMat stiffness;          // K = Gram matrix of basis gradients (PSD)
  SpMat mass;               // B = Gram matrix of basis functions (PD)
  int full_dim = 0;         // node count before any Dirichlet reduction
  std::vector<int> kept;    // reduced index -> full node id
  BoundarySet boundary;     // full node ids on the geometric boundary
  BoundaryCondition bc = BoundaryCondition::neumann;

  int dim() const { return static_cast<int>(stiffness.rows()); }
};

// Deletes the rows/columns listed in `boundary` from K and B.
// Throws if nothing would remain.
void reduce_dirichlet(const SpMat& full_k, const SpMat& full_b, const BoundarySet& boundary,
                      SpMat& reduced_k, SpMat& reduced_b, std::vector<int>& kept);

// Expands a reduced-system vector to full node numbering, with zeros at
// deleted boundary nodes.
VecX scatter_to_full(const VecX& reduced, const std::vector<int>& kept, int full_dim);

}  // namespace lbspec
