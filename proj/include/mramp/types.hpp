#pragma once

#include <Eigen/Dense>

namespace mramp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // column-major: vec(X) is the column concatenation
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

}  // namespace mramp
