#pragma once

#include <Eigen/Dense>

#include "windatc/network.hpp"

namespace windatc::grid {

/// Bus admittance matrix, indexed by internal bus indices. Real part G,
/// imaginary part B. Symmetric for the fixed-ratio branch model used here.
using AdmittanceMatrix = Eigen::MatrixXcd;

AdmittanceMatrix build_admittance(const PowerNetwork& net);

}  // namespace windatc::grid
