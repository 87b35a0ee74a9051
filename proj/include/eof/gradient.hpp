#pragma once

#include "eof/states.hpp"
#include "eof/types.hpp"

namespace eof {

// Gradient of the average entanglement with respect to the Hermitian generator
// of the n x n unitary mixing the decomposition states.  For a direction theta
// (Hermitian, traceless on the support in practice), the first-order change of
// E_av under |psi_i> -> sum_j [exp(i eps theta)]_ij |psi_j> is
//   dE/deps = Tr(theta g) = sum_ij theta_ij g_ji.
//
// g is Hermitian with zero diagonal; rows and columns belonging to zero-weight
// states vanish identically, so padded decompositions can shed weight into the
// padding without resistance.
using GradientMatrix = Matrix;

// Flat real coordinates over the off-diagonal generators.  Slot layout: for
// each pair a < b, two consecutive entries (2 Re g_ab, 2 Im g_ab), pairs in
// lexicographic order of (a, b).  Length n(n-1).  The Euclidean dot product of
// two flattened gradients equals Tr(theta g) for the matrices they came from.
using FlatVector = Eigen::VectorXd;

GradientMatrix gradient_matrix(const Decomposition& dec);
GradientMatrix gradient_matrix_serial(const Decomposition& dec);

// dE/deps at eps = 0 along direction theta (Hermitian n x n).
double directional_derivative(const GradientMatrix& g, const Matrix& theta);

FlatVector flatten(const GradientMatrix& g);

// Inverse of the slot layout: entry pair (x, y) for a < b becomes
// theta_ab = x + i y, theta_ba = conj.  n is the matrix side; v must have
// length n(n-1).
Matrix unflatten(const FlatVector& v, int n);

}  // namespace eof
