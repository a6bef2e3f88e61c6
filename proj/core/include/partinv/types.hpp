#pragma once

#include <Eigen/Dense>
#include <vector>

namespace partinv {

// All dense matrices are column-major doubles; images are vectorized
// column-major throughout the library.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Index sets are kept sorted ascending unless a function says otherwise.
using IndexSet = std::vector<Index>;

}  // namespace partinv
