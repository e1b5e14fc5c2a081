#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"

namespace mmx {

Vector PairPoint::joined() const {
  Vector z(x.size() + y.size());
  z << x, y;
  return z;
}

PairPoint PairPoint::split(const Vector& z, Index dx) {
  if (dx < 0 || dx > z.size()) fail(ErrorCode::DimensionMismatch, "split index outside vector");
  return PairPoint{z.head(dx), z.tail(z.size() - dx)};
}

// ---- domains --------------------------------------------------------------

Domain Domain::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::BadParams, "ball radius must be positive");
  require_finite(center, "ball center");
  return Domain(Kind::Ball, std::move(center), Vector(), radius);
}

Domain Domain::free_ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::BadParams, "ball radius must be positive");
  require_finite(center, "ball center");
  return Domain(Kind::FreeBall, std::move(center), Vector(), radius);
}

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) fail(ErrorCode::DimensionMismatch, "box bounds differ in size");
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if ((lower.array() > upper.array()).any()) fail(ErrorCode::BadParams, "box needs lower <= upper");
  return Domain(Kind::Box, std::move(lower), std::move(upper), 0.0);
}

Vector Domain::project(const Vector& p) const {
  if (p.size() != dim()) fail(ErrorCode::DimensionMismatch, "projection dimension mismatch");
  switch (kind_) {
    case Kind::Ball: {
      const Vector d = p - a_;
      const double n = d.norm();
      if (n <= radius_) return p;
      return a_ + (radius_ / n) * d;
    }
    case Kind::Box:
      return p.cwiseMax(a_).cwiseMin(b_);
    case Kind::FreeBall:
      return p;
  }
  return p;
}

bool Domain::contains(const Vector& p, double tol) const {
  if (p.size() != dim()) fail(ErrorCode::DimensionMismatch, "containment dimension mismatch");
  switch (kind_) {
    case Kind::Ball:
      return (p - a_).norm() <= radius_ + tol;
    case Kind::Box:
      return ((p.array() >= a_.array() - tol) && (p.array() <= b_.array() + tol)).all();
    case Kind::FreeBall:
      return true;
  }
  return true;
}

double Domain::diameter() const {
  if (kind_ == Kind::Box) return (b_ - a_).norm();
  return 2.0 * radius_;
}

double Domain::max_distance_from(const Vector& p) const {
  if (kind_ == Kind::Box) {
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      const double d = std::max(std::abs(p[i] - a_[i]), std::abs(b_[i] - p[i]));
      s += d * d;
    }
    return std::sqrt(s);
  }
  return (p - a_).norm() + radius_;
}

Vector project(const Domain& dom, const Vector& p) { return dom.project(p); }

ProductDomain::ProductDomain(std::vector<Domain> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) dim_ += b.dim();
}

Vector ProductDomain::project(const Vector& z) const {
  if (z.size() != dim_) fail(ErrorCode::DimensionMismatch, "product projection dimension mismatch");
  Vector out(z.size());
  Index off = 0;
  for (const auto& b : blocks_) {
    out.segment(off, b.dim()) = b.project(z.segment(off, b.dim()));
    off += b.dim();
  }
  return out;
}

bool ProductDomain::contains(const Vector& z, double tol) const {
  if (z.size() != dim_) fail(ErrorCode::DimensionMismatch, "product containment dimension mismatch");
  Index off = 0;
  for (const auto& b : blocks_) {
    if (!b.contains(z.segment(off, b.dim()), tol)) return false;
    off += b.dim();
  }
  return true;
}

double ProductDomain::diameter() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.diameter() * b.diameter();
  return std::sqrt(s);
}

// ---- cubic helpers --------------------------------------------------------

double cubic_value(const Vector& u, double w) {
  const double n = u.norm();
  return w * n * n * n / 3.0;
}

Vector cubic_gradient(const Vector& u, double w) { return (w * u.norm()) * u; }

Matrix cubic_hessian(const Vector& u, double w) {
  const double n = u.norm();
  Matrix H = Matrix::Zero(u.size(), u.size());
  if (n == 0.0 || w == 0.0) return H;
  H.diagonal().setConstant(w * n);
  H.noalias() += (w / n) * u * u.transpose();
  return H;
}

// ---- problem accessors ----------------------------------------------------

double SaddleProblem::value(const Vector& x, const Vector& y) const {
  const double v = f->value(x, y);
  if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "objective value is not finite");
  return v;
}

PairPoint SaddleProblem::grad(const Vector& x, const Vector& y) const {
  PairPoint g;
  f->gradient(x, y, g.x, g.y);
  require_finite(g.x, "gradient in x");
  require_finite(g.y, "gradient in y");
  return g;
}

HessianBlocks SaddleProblem::hess(const Vector& x, const Vector& y) const {
  HessianBlocks h = f->hessian(x, y);
  require_finite(h.xx, "hessian xx");
  require_finite(h.xy, "hessian xy");
  require_finite(h.yx, "hessian yx");
  require_finite(h.yy, "hessian yy");
  return h;
}

Vector MonotoneOperatorView::F(const Vector& z) const {
  const Index dx = p_->dx();
  if (z.size() != dx + p_->dy()) fail(ErrorCode::DimensionMismatch, "operator argument has wrong size");
  const PairPoint g = p_->grad(z.head(dx), z.tail(p_->dy()));
  Vector out(z.size());
  out << g.x, -g.y;
  return out;
}

Matrix MonotoneOperatorView::jacobian(const Vector& z) const {
  const Index dx = p_->dx(), dy = p_->dy();
  if (z.size() != dx + dy) fail(ErrorCode::DimensionMismatch, "operator argument has wrong size");
  const HessianBlocks h = p_->hess(z.head(dx), z.tail(dy));
  Matrix J(dx + dy, dx + dy);
  J.topLeftCorner(dx, dx) = h.xx;
  J.topRightCorner(dx, dy) = h.xy;
  J.bottomLeftCorner(dy, dx) = -h.yx;
  J.bottomRightCorner(dy, dy) = -h.yy;
  return J;
}

Vector eval_F(const MonotoneOperatorView& op, const PairPoint& z) { return op.F(z.joined()); }

// ---- objectives -----------------------------------------------------------

BilinearObjective::BilinearObjective(Matrix A, Vector b, Vector c)
    : A_(std::move(A)), b_(std::move(b)), c_(std::move(c)) {
  if (b_.size() != A_.rows() || c_.size() != A_.cols()) fail(ErrorCode::DimensionMismatch, "bilinear data sizes");
}

double BilinearObjective::value(const Vector& x, const Vector& y) const {
  return x.dot(A_ * y) + b_.dot(x) + c_.dot(y);
}

void BilinearObjective::gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  gx = A_ * y + b_;
  gy = A_.transpose() * x + c_;
}

HessianBlocks BilinearObjective::hessian(const Vector&, const Vector&) const {
  return {Matrix::Zero(dx(), dx()), A_, A_.transpose(), Matrix::Zero(dy(), dy())};
}

std::optional<Vector> BilinearObjective::affine_slope_in_y(const Vector& x) const {
  return Vector(A_.transpose() * x + c_);
}

std::optional<Vector> BilinearObjective::affine_slope_in_x(const Vector& y) const { return Vector(A_ * y + b_); }

CubicCoupledObjective::CubicCoupledObjective(double mu_x, double mu_y, Matrix A, Vector xs, Vector ys,
                                             Matrix quartic_rows)
    : mu_x_(mu_x), mu_y_(mu_y), A_(std::move(A)), xs_(std::move(xs)), ys_(std::move(ys)), q_(std::move(quartic_rows)) {
  if (A_.rows() != xs_.size() || A_.cols() != ys_.size()) fail(ErrorCode::DimensionMismatch, "coupling matrix shape");
  if (q_.size() == 0) q_ = Matrix::Zero(0, xs_.size());
  if (q_.cols() != xs_.size()) fail(ErrorCode::DimensionMismatch, "quartic rows shape");
}

double CubicCoupledObjective::value(const Vector& x, const Vector& y) const {
  const Vector u = x - xs_, w = y - ys_;
  double v = cubic_value(u, mu_x_) + u.dot(A_ * w) - cubic_value(w, mu_y_);
  if (q_.rows() > 0) v += 0.25 * (q_ * u).array().pow(4).sum();
  return v;
}

void CubicCoupledObjective::gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  const Vector u = x - xs_, w = y - ys_;
  gx = cubic_gradient(u, mu_x_) + A_ * w;
  if (q_.rows() > 0) {
    const Vector t = q_ * u;
    gx.noalias() += q_.transpose() * t.array().cube().matrix();
  }
  gy = A_.transpose() * u - cubic_gradient(w, mu_y_);
}

HessianBlocks CubicCoupledObjective::hessian(const Vector& x, const Vector& y) const {
  const Vector u = x - xs_, w = y - ys_;
  Matrix hxx = cubic_hessian(u, mu_x_);
  if (q_.rows() > 0) {
    const Vector t = q_ * u;
    hxx.noalias() += q_.transpose() * (3.0 * t.array().square()).matrix().asDiagonal() * q_;
  }
  return {hxx, A_, A_.transpose(), -cubic_hessian(w, mu_y_)};
}

std::optional<Vector> CubicCoupledObjective::affine_slope_in_y(const Vector& x) const {
  if (mu_y_ != 0.0) return std::nullopt;
  return Vector(A_.transpose() * (x - xs_));
}

std::optional<Vector> CubicCoupledObjective::affine_slope_in_x(const Vector& y) const {
  if (mu_x_ != 0.0 || q_.rows() > 0) return std::nullopt;
  return Vector(A_ * (y - ys_));
}

QuadraticObjective::QuadraticObjective(Matrix P, Matrix B, Matrix Q, Vector b, Vector c)
    : P_(std::move(P)), B_(std::move(B)), Q_(std::move(Q)), b_(std::move(b)), c_(std::move(c)) {
  if (P_.rows() != P_.cols() || Q_.rows() != Q_.cols() || B_.rows() != P_.rows() || B_.cols() != Q_.rows() ||
      b_.size() != P_.rows() || c_.size() != Q_.rows()) {
    fail(ErrorCode::DimensionMismatch, "quadratic data sizes");
  }
}

double QuadraticObjective::value(const Vector& x, const Vector& y) const {
  return 0.5 * x.dot(P_ * x) + x.dot(B_ * y) - 0.5 * y.dot(Q_ * y) + b_.dot(x) + c_.dot(y);
}

void QuadraticObjective::gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  gx = P_ * x + B_ * y + b_;
  gy = B_.transpose() * x - Q_ * y + c_;
}

HessianBlocks QuadraticObjective::hessian(const Vector&, const Vector&) const {
  return {P_, B_, B_.transpose(), -Q_};
}

std::optional<Vector> QuadraticObjective::affine_slope_in_y(const Vector& x) const {
  if (!Q_.isZero(0.0)) return std::nullopt;
  return Vector(B_.transpose() * x + c_);
}

std::optional<Vector> QuadraticObjective::affine_slope_in_x(const Vector& y) const {
  if (!P_.isZero(0.0)) return std::nullopt;
  return Vector(B_ * y + b_);
}

CubicShiftObjective::CubicShiftObjective(std::shared_ptr<const Objective> base, Vector cx, double wx, Vector cy,
                                         double wy)
    : base_(std::move(base)), cx_(std::move(cx)), cy_(std::move(cy)), wx_(wx), wy_(wy) {
  if (cx_.size() != base_->dx() || cy_.size() != base_->dy()) fail(ErrorCode::DimensionMismatch, "shift centers");
  if (wx_ < 0.0 || wy_ < 0.0) fail(ErrorCode::BadParams, "cubic weights must be >= 0");
}

double CubicShiftObjective::value(const Vector& x, const Vector& y) const {
  return base_->value(x, y) + cubic_value(x - cx_, wx_) - cubic_value(y - cy_, wy_);
}

void CubicShiftObjective::gradient(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  base_->gradient(x, y, gx, gy);
  if (wx_ != 0.0) gx += cubic_gradient(x - cx_, wx_);
  if (wy_ != 0.0) gy -= cubic_gradient(y - cy_, wy_);
}

HessianBlocks CubicShiftObjective::hessian(const Vector& x, const Vector& y) const {
  HessianBlocks h = base_->hessian(x, y);
  if (wx_ != 0.0) h.xx += cubic_hessian(x - cx_, wx_);
  if (wy_ != 0.0) h.yy -= cubic_hessian(y - cy_, wy_);
  return h;
}

std::optional<Vector> CubicShiftObjective::affine_slope_in_y(const Vector& x) const {
  if (wy_ != 0.0) return std::nullopt;
  return base_->affine_slope_in_y(x);
}

std::optional<Vector> CubicShiftObjective::affine_slope_in_x(const Vector& y) const {
  if (wx_ != 0.0) return std::nullopt;
  return base_->affine_slope_in_x(y);
}

// ---- families -------------------------------------------------------------

const char* family_name(Family f) {
  switch (f) {
    case Family::Bilinear: return "bilinear";
    case Family::CubicCoupled: return "cubic-coupled";
    case Family::QuarticCoupled: return "quartic-coupled";
    case Family::Quadratic: return "quadratic";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::Bilinear, Family::CubicCoupled, Family::QuarticCoupled, Family::Quadratic}) {
    if (name == family_name(f)) return f;
  }
  fail(ErrorCode::BadParams, "unknown problem family '" + name + "'");
}

namespace {

double sup_norm_over(const Domain& d) { return d.max_distance_from(Vector::Zero(d.dim())); }

Vector random_interior_point(const Domain& dom, double offset, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector g(dom.dim());
  for (Index i = 0; i < g.size(); ++i) g[i] = normal(rng);
  const double n = g.norm();
  if (n == 0.0 || offset == 0.0) {
    return dom.kind() == Domain::Kind::Box ? Vector(0.5 * (dom.lower() + dom.upper())) : dom.center();
  }
  if (dom.kind() == Domain::Kind::Box) {
    const Vector mid = 0.5 * (dom.lower() + dom.upper());
    const Vector half = 0.5 * (dom.upper() - dom.lower());
    Vector p(dom.dim());
    for (Index i = 0; i < p.size(); ++i) p[i] = mid[i] + offset * half[i] * (2.0 * unif(rng) - 1.0);
    return p;
  }
  return dom.center() + (offset * dom.radius() * unif(rng) / n) * g;
}

Matrix random_matrix(Index r, Index c, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) M(i, j) = normal(rng);
  const double denom = std::sqrt(static_cast<double>(std::max<Index>(1, std::max(r, c))));
  return (scale / denom) * M;
}

Domain make_domain(Index d, double r, bool box) {
  if (!(r > 0.0)) fail(ErrorCode::BadParams, "radius must be positive");
  if (box) return Domain::box(Vector::Constant(d, -r), Vector::Constant(d, r));
  return Domain::ball(Vector::Zero(d), r);
}

}  // namespace

SaddleProblem make_bilinear(const Matrix& A, const Vector& b, const Vector& c, const Domain& dom_x,
                            const Domain& dom_y, std::optional<PairPoint> saddle) {
  SaddleProblem p;
  p.f = std::make_shared<BilinearObjective>(A, b, c);
  if (dom_x.dim() != A.rows() || dom_y.dim() != A.cols()) fail(ErrorCode::DimensionMismatch, "domain sizes");
  const double a = operator_norm(A);
  const double rx = sup_norm_over(dom_x), ry = sup_norm_over(dom_y);
  const double gx = a * ry + b.norm(), gy = a * rx + c.norm();
  p.L = std::hypot(gx, gy);
  p.ell = a;
  p.rho = 0.0;
  p.dom_x = dom_x;
  p.dom_y = dom_y;
  p.known_saddle = std::move(saddle);
  p.family = family_name(Family::Bilinear);
  return p;
}

SaddleProblem make_cubic_coupled(double mu_x, double mu_y, const Matrix& A, const Vector& xs, const Vector& ys,
                                 const Domain& dom_x, const Domain& dom_y, const Matrix& quartic_rows) {
  if (mu_x < 0.0 || mu_y < 0.0) fail(ErrorCode::BadParams, "mu must be >= 0");
  if (dom_x.dim() != xs.size() || dom_y.dim() != ys.size()) fail(ErrorCode::DimensionMismatch, "domain sizes");
  SaddleProblem p;
  p.f = std::make_shared<CubicCoupledObjective>(mu_x, mu_y, A, xs, ys, quartic_rows);
  const double a = operator_norm(A);
  const double rx = dom_x.max_distance_from(xs), ry = dom_y.max_distance_from(ys);
  double q4 = 0.0;  // sum_i |q_i|^4
  for (Index i = 0; i < quartic_rows.rows(); ++i) q4 += std::pow(quartic_rows.row(i).norm(), 4);
  const double hx = 2.0 * mu_x * rx + 3.0 * q4 * rx * rx;
  const double hy = 2.0 * mu_y * ry;
  p.ell = std::max(hx, hy) + a;
  p.rho = std::max(2.0 * mu_x + 6.0 * q4 * rx, 2.0 * mu_y);
  const double gx = mu_x * rx * rx + a * ry + q4 * rx * rx * rx;
  const double gy = a * rx + mu_y * ry * ry;
  p.L = std::hypot(gx, gy);
  p.mu_x = mu_x;
  p.mu_y = mu_y;
  p.dom_x = dom_x;
  p.dom_y = dom_y;
  bool saddle_known = dom_x.contains(xs) && dom_y.contains(ys);
  if (saddle_known) p.known_saddle = PairPoint{xs, ys};
  p.family = family_name(quartic_rows.rows() > 0 ? Family::QuarticCoupled : Family::CubicCoupled);
  return p;
}

SaddleProblem make_quadratic(const Matrix& P, const Matrix& B, const Matrix& Q, const Vector& b, const Vector& c,
                             const Domain& dom_x, const Domain& dom_y, std::optional<PairPoint> saddle) {
  SaddleProblem p;
  p.f = std::make_shared<QuadraticObjective>(P, B, Q, b, c);
  if (dom_x.dim() != P.rows() || dom_y.dim() != Q.rows()) fail(ErrorCode::DimensionMismatch, "domain sizes");
  const Index dx = P.rows(), dy = Q.rows();
  Matrix H(dx + dy, dx + dy);
  H << P, B, B.transpose(), -Q;
  p.ell = operator_norm(H);
  p.rho = 0.0;
  const double rx = sup_norm_over(dom_x), ry = sup_norm_over(dom_y);
  p.L = p.ell * std::hypot(rx, ry) + std::hypot(b.norm(), c.norm());
  p.dom_x = dom_x;
  p.dom_y = dom_y;
  p.known_saddle = std::move(saddle);
  p.family = family_name(Family::Quadratic);
  return p;
}

SaddleProblem make_test_problem(Family family, Index dx, Index dy, std::uint64_t seed, const FamilyParams& params) {
  if (dx <= 0 || dy <= 0) fail(ErrorCode::BadParams, "dimensions must be positive");
  if (params.mu_x < 0.0 || params.mu_y < 0.0) fail(ErrorCode::BadParams, "mu must be >= 0");
  if (!(params.radius_x > 0.0) || !(params.radius_y > 0.0)) fail(ErrorCode::BadParams, "radius must be positive");
  if (params.coupling < 0.0 || params.saddle_offset < 0.0 || params.saddle_offset >= 1.0) {
    fail(ErrorCode::BadParams, "coupling must be >= 0 and saddle offset in [0, 1)");
  }
  std::mt19937_64 rng(seed);
  const Domain dom_x = make_domain(dx, params.radius_x, params.box);
  const Domain dom_y = make_domain(dy, params.radius_y, params.box);
  const Vector xs = random_interior_point(dom_x, params.saddle_offset, rng);
  const Vector ys = random_interior_point(dom_y, params.saddle_offset, rng);
  const Matrix A = random_matrix(dx, dy, params.coupling, rng);

  switch (family) {
    case Family::Bilinear: {
      const Vector b = -(A * ys);
      const Vector c = -(A.transpose() * xs);
      return make_bilinear(A, b, c, dom_x, dom_y, PairPoint{xs, ys});
    }
    case Family::CubicCoupled:
      return make_cubic_coupled(params.mu_x, params.mu_y, A, xs, ys, dom_x, dom_y);
    case Family::QuarticCoupled: {
      if (params.quartic_terms <= 0 || params.quartic < 0.0) fail(ErrorCode::BadParams, "quartic terms");
      const Matrix Qr = random_matrix(params.quartic_terms, dx, params.quartic, rng);
      return make_cubic_coupled(params.mu_x, params.mu_y, A, xs, ys, dom_x, dom_y, Qr);
    }
    case Family::Quadratic: {
      // Strongly monotone instance with its saddle placed at (xs, ys).
      Matrix Gx = random_matrix(dx, dx, 1.0, rng), Gy = random_matrix(dy, dy, 1.0, rng);
      Matrix P = Gx * Gx.transpose() + params.mu_x * Matrix::Identity(dx, dx);
      Matrix Q = Gy * Gy.transpose() + params.mu_y * Matrix::Identity(dy, dy);
      const Vector b = -(P * xs + A * ys);
      const Vector c = -(A.transpose() * xs - Q * ys);
      return make_quadratic(P, A, Q, b, c, dom_x, dom_y, PairPoint{xs, ys});
    }
  }
  fail(ErrorCode::BadParams, "unknown family");
}

}  // namespace mmx
