#pragma once

#include <vector>

#include "fieldmap/matrix.hpp"

namespace fieldmap {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k belongs to values[k]
};

// Cyclic Jacobi for small dense symmetric matrices. Each eigenvector is
// signed so that its largest-magnitude component is positive (first such
// component on ties). Only the upper triangle is read.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100);

}  // namespace fieldmap
