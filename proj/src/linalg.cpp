#include "linalg.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace mmx {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadStepSize: return "BadStepSize";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::SlopeNeedsThreePoints: return "SlopeNeedsThreePoints";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double vector_norm(const Vector& v) { return v.norm(); }

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) fail(ErrorCode::NonFiniteValue, std::string(what) + " has non-finite entries");
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::NonFiniteValue, std::string(what) + " has non-finite entries");
}

Vector solve_shifted(const Matrix& J, double lambda, const Vector& rhs) {
  const Eigen::Index n = J.rows();
  if (J.cols() != n || rhs.size() != n) {
    fail(ErrorCode::DimensionMismatch, "solve_shifted expects square J matching rhs");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) fail(ErrorCode::BadParams, "shift must be finite and >= 0");
  require_finite(J, "J");
  require_finite(rhs, "rhs");
  if (n == 0) return Vector();

  Matrix shifted = J;
  shifted.diagonal().array() += lambda;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(packed(i, i)) < kPivotFloor) {
      fail(ErrorCode::SingularSystem, "pivot below floor at row " + std::to_string(i));
    }
  }
  Vector s = lu.solve(rhs);
  // One step of iterative refinement keeps the residual bound on mildly ill-conditioned shifts.
  Vector r = rhs - shifted * s;
  s += lu.solve(r);
  require_finite(s, "solve_shifted result");
  return s;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace mmx
