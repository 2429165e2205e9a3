#pragma once

#include "hybridprecoding/architecture.hpp"
#include "hybridprecoding/types.hpp"

namespace hp {

/// Nearest point of the element's value set to a single entry.
///
/// Boundary conventions: UPS/QPS map 0 to 1, SI maps Re = 0 to +1, Switch maps
/// Re = 1/2 to 1. Entries already on the set are returned bit-for-bit.
Complex project_element(Complex x, Element element, int n_bits = 0);

/// Entrywise projection for fully connected UPS, QPS, SI, Switch and DPS networks.
CMatrix project_elementwise(const CMatrix& x, const Architecture& arch);

/// Greedy antenna selection: columns are served in descending order of their best
/// real part, each taking the unclaimed row with the largest real part.
RMatrix project_antenna_selection(const CMatrix& x);

/// Array of subarrays: per column keep the l_max row blocks with the largest l1 norm.
CMatrix project_aosa(const CMatrix& x, const Architecture& arch);

/// Dynamic array of subarrays: per row block keep the l_max columns with the largest
/// Euclidean norm, then make sure every column keeps at least one block.
CMatrix project_daosa(const CMatrix& x, const Architecture& arch);

/// Projection onto C(arch), dispatching on connectivity and element.
CMatrix project(const CMatrix& x, const Architecture& arch);

/// Membership predicate for C(arch).
bool is_member(const CMatrix& x, const Architecture& arch);

}  // namespace hp
