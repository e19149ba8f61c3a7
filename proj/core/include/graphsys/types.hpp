#pragma once

#include <Eigen/Dense>

namespace graphsys {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace graphsys
