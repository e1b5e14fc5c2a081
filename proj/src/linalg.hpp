#ifndef MMX_LINALG_HPP
#define MMX_LINALG_HPP

#include <Eigen/Dense>

namespace mmx {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Smallest admissible pivot magnitude in solve_shifted.
inline constexpr double kPivotFloor = 1e-14;

double vector_norm(const Vector& v);

// Solves (J + lambda I) s = rhs by LU with partial pivoting.
Vector solve_shifted(const Matrix& J, double lambda, const Vector& rhs);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);
void require_finite(const Vector& v, const char* what);
void require_finite(const Matrix& m, const char* what);

// Spectral norm (largest singular value).
double operator_norm(const Matrix& m);

}  // namespace mmx

#endif
