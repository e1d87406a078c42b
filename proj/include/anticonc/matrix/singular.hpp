#pragma once

#include <vector>

#include "anticonc/core/types.hpp"

namespace anticonc {

/// Magnitudes of the bidiagonal form U^* M V = B (B upper bidiagonal),
/// obtained by complex Householder reflections; the singular values of M are
/// those of the real bidiagonal with these entries.
struct Bidiagonal {
  std::vector<double> diag;   // |B_ii|
  std::vector<double> super;  // |B_{i,i+1}|
};
Bidiagonal bidiagonalize(const ComplexMatrix& m);

/// s_n(M) = min over unit x of |M x|, to relative tolerance `tol`.
/// Bisection with Sturm counts on the Golub-Kahan tridiagonal of the
/// bidiagonal form (never forms M^* M). Returns exactly 0 when s_n is below
/// the numerical-singularity floor 4 n eps |M|_F.
double smallest_singular_value(const ComplexMatrix& m, double tol = 1e-10);

/// s_1(M) = |M|_{op}, same method.
double operator_norm(const ComplexMatrix& m, double tol = 1e-10);

/// All singular values, ascending.
std::vector<double> singular_values(const ComplexMatrix& m, double tol = 1e-12);

}  // namespace anticonc
