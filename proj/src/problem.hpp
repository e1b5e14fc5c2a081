#ifndef MMX_PROBLEM_HPP
#define MMX_PROBLEM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace mmx {

using Index = Eigen::Index;

struct PairPoint {
  Vector x;
  Vector y;

  Vector joined() const;
  static PairPoint split(const Vector& z, Index dx);
};

class Domain {
 public:
  enum class Kind { Ball, Box, FreeBall };

  static Domain ball(Vector center, double radius);
  static Domain box(Vector lower, Vector upper);
  // Projection is the identity; the radius only feeds diameter bookkeeping.
  static Domain free_ball(Vector center, double radius);

  Kind kind() const { return kind_; }
  Index dim() const { return a_.size(); }
  const Vector& center() const { return a_; }  // Ball/FreeBall
  const Vector& lower() const { return a_; }   // Box
  const Vector& upper() const { return b_; }   // Box
  double radius() const { return radius_; }

  Vector project(const Vector& p) const;
  bool contains(const Vector& p, double tol = 0.0) const;
  double diameter() const;
  // sup over q in the domain of |q - p|
  double max_distance_from(const Vector& p) const;

 private:
  Domain(Kind kind, Vector a, Vector b, double radius)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), radius_(radius) {}
  Kind kind_;
  Vector a_;
  Vector b_;
  double radius_ = 0.0;
};

Vector project(const Domain& dom, const Vector& p);

// Cartesian product of blocks laid out consecutively in one vector.
class ProductDomain {
 public:
  ProductDomain() = default;
  explicit ProductDomain(std::vector<Domain> blocks);

  Index dim() const { return dim_; }
  const std::vector<Domain>& blocks() const { return blocks_; }
  Vector project(const Vector& z) const;
  bool contains(const Vector& z, double tol = 0.0) const;
  double diameter() const;

 private:
  std::vector<Domain> blocks_;
  Index dim_ = 0;
};

struct HessianBlocks {
  Matrix xx, xy, yx, yy;
};

// f(x, y), convex in x and concave in y.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Index dx() const = 0;
  virtual Index dy() const = 0;
  virtual double value(const Vector& x, const Vector& y) const = 0;
  virtual void gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const = 0;
  virtual HessianBlocks hessian(const Vector& x, const Vector& y) const = 0;

  // When y -> f(x, y) is affine, returns its slope (enables closed-form best responses).
  virtual std::optional<Vector> affine_slope_in_y(const Vector& /*x*/) const { return std::nullopt; }
  virtual std::optional<Vector> affine_slope_in_x(const Vector& /*y*/) const { return std::nullopt; }
};

// (w/3)|u|^3 and its derivatives; the Hessian at u = 0 is taken to be 0.
double cubic_value(const Vector& u, double w);
Vector cubic_gradient(const Vector& u, double w);
Matrix cubic_hessian(const Vector& u, double w);

struct SaddleProblem {
  std::shared_ptr<const Objective> f;
  double L = 0.0;     // Lipschitz constant of f
  double ell = 0.0;   // Lipschitz constant of the gradient
  double rho = 0.0;   // Lipschitz constant of the Hessian
  double mu_x = 0.0;  // cubic growth coefficient in x: f - (mu_x/3)|x - .|^3 stays convex
  double mu_y = 0.0;
  Domain dom_x = Domain::ball(Vector::Zero(1), 1.0);
  Domain dom_y = Domain::ball(Vector::Zero(1), 1.0);
  std::optional<PairPoint> known_saddle;
  std::string family;

  Index dx() const { return f->dx(); }
  Index dy() const { return f->dy(); }
  double value(const Vector& x, const Vector& y) const;
  PairPoint grad(const Vector& x, const Vector& y) const;
  HessianBlocks hess(const Vector& x, const Vector& y) const;
  ProductDomain joint_domain() const { return ProductDomain({dom_x, dom_y}); }
  double diameter() const { return std::max(dom_x.diameter(), dom_y.diameter()); }
};

// Uncounted view of the operator F = (grad_x f, -grad_y f) and its Jacobian.
class MonotoneOperatorView {
 public:
  explicit MonotoneOperatorView(const SaddleProblem& p) : p_(&p) {}
  const SaddleProblem& problem() const { return *p_; }
  Vector F(const Vector& z) const;
  Matrix jacobian(const Vector& z) const;

 private:
  const SaddleProblem* p_;
};

Vector eval_F(const MonotoneOperatorView& op, const PairPoint& z);

// ---- objectives -----------------------------------------------------------

// x'Ay + b'x + c'y
class BilinearObjective final : public Objective {
 public:
  BilinearObjective(Matrix A, Vector b, Vector c);
  Index dx() const override { return A_.rows(); }
  Index dy() const override { return A_.cols(); }
  double value(const Vector& x, const Vector& y) const override;
  void gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  HessianBlocks hessian(const Vector& x, const Vector& y) const override;
  std::optional<Vector> affine_slope_in_y(const Vector& x) const override;
  std::optional<Vector> affine_slope_in_x(const Vector& y) const override;
  const Matrix& A() const { return A_; }

 private:
  Matrix A_;
  Vector b_, c_;
};

// (mu_x/3)|x-xs|^3 + (x-xs)'A(y-ys) - (mu_y/3)|y-ys|^3 + (1/4) sum_i (q_i'(x-xs))^4
class CubicCoupledObjective final : public Objective {
 public:
  CubicCoupledObjective(double mu_x, double mu_y, Matrix A, Vector xs, Vector ys,
                        Matrix quartic_rows = Matrix());
  Index dx() const override { return xs_.size(); }
  Index dy() const override { return ys_.size(); }
  double value(const Vector& x, const Vector& y) const override;
  void gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  HessianBlocks hessian(const Vector& x, const Vector& y) const override;
  std::optional<Vector> affine_slope_in_y(const Vector& x) const override;
  std::optional<Vector> affine_slope_in_x(const Vector& y) const override;

 private:
  double mu_x_, mu_y_;
  Matrix A_;
  Vector xs_, ys_;
  Matrix q_;  // one row per quartic direction
};

// (1/2)x'Px + x'By - (1/2)y'Qy + b'x + c'y with P, Q positive semidefinite
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix P, Matrix B, Matrix Q, Vector b, Vector c);
  Index dx() const override { return P_.rows(); }
  Index dy() const override { return Q_.rows(); }
  double value(const Vector& x, const Vector& y) const override;
  void gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  HessianBlocks hessian(const Vector& x, const Vector& y) const override;
  std::optional<Vector> affine_slope_in_y(const Vector& x) const override;
  std::optional<Vector> affine_slope_in_x(const Vector& y) const override;

 private:
  Matrix P_, B_, Q_;
  Vector b_, c_;
};

// base + (wx/3)|x - cx|^3 - (wy/3)|y - cy|^3
class CubicShiftObjective final : public Objective {
 public:
  CubicShiftObjective(std::shared_ptr<const Objective> base, Vector cx, double wx, Vector cy, double wy);
  Index dx() const override { return base_->dx(); }
  Index dy() const override { return base_->dy(); }
  double value(const Vector& x, const Vector& y) const override;
  void gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  HessianBlocks hessian(const Vector& x, const Vector& y) const override;
  std::optional<Vector> affine_slope_in_y(const Vector& x) const override;
  std::optional<Vector> affine_slope_in_x(const Vector& y) const override;

 private:
  std::shared_ptr<const Objective> base_;
  Vector cx_, cy_;
  double wx_, wy_;
};

// ---- synthetic families ---------------------------------------------------

enum class Family { Bilinear, CubicCoupled, QuarticCoupled, Quadratic };

const char* family_name(Family f);
Family parse_family(const std::string& name);

struct FamilyParams {
  double mu_x = 1.0;
  double mu_y = 1.0;
  double radius_x = 1.0;
  double radius_y = 1.0;
  double coupling = 1.0;       // scale of the random coupling matrix; 0 decouples
  double saddle_offset = 0.5;  // |z* - center| as a fraction of the radius (upper bound)
  double quartic = 0.5;        // scale of quartic directions (QuarticCoupled)
  int quartic_terms = 2;
  bool box = false;            // boxes [-r, r]^d instead of balls
  bool operator==(const FamilyParams&) const = default;
};

SaddleProblem make_test_problem(Family family, Index dx, Index dy, std::uint64_t seed,
                                const FamilyParams& params = {});

// Explicit constructors used by tests and by make_test_problem.
SaddleProblem make_bilinear(const Matrix& A, const Vector& b, const Vector& c, const Domain& dom_x,
                            const Domain& dom_y, std::optional<PairPoint> saddle = std::nullopt);
SaddleProblem make_cubic_coupled(double mu_x, double mu_y, const Matrix& A, const Vector& xs,
                                 const Vector& ys, const Domain& dom_x, const Domain& dom_y,
                                 const Matrix& quartic_rows = Matrix());
SaddleProblem make_quadratic(const Matrix& P, const Matrix& B, const Matrix& Q, const Vector& b,
                             const Vector& c, const Domain& dom_x, const Domain& dom_y,
                             std::optional<PairPoint> saddle = std::nullopt);

}  // namespace mmx

#endif
