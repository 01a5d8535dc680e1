#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fasttt/shape.hpp"

namespace fasttt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

}  // namespace fasttt
