#pragma once

#include <Eigen/Core>

namespace col {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace col
