#ifndef MMX_TEST_HELPERS_HPP
#define MMX_TEST_HELPERS_HPP

#include <random>

#include "problem.hpp"

namespace mmx::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

inline Matrix mat1(double a) { return Matrix::Constant(1, 1, a); }

inline Vector gaussian(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

// Uniform sample from a ball.
inline Vector in_ball(const Vector& center, double r, std::mt19937_64& rng) {
  Vector g = gaussian(center.size(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rad = r * std::pow(u(rng), 1.0 / static_cast<double>(center.size()));
  return center + (rad / g.norm()) * g;
}

inline Vector in_domain(const Domain& d, std::mt19937_64& rng) {
  if (d.kind() == Domain::Kind::Box) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector p(d.dim());
    for (Index i = 0; i < p.size(); ++i) p[i] = d.lower()[i] + u(rng) * (d.upper()[i] - d.lower()[i]);
    return p;
  }
  return in_ball(d.center(), d.radius(), rng);
}

// f = xy over 1-D balls of radius r (FreeBall when free = true).
inline SaddleProblem xy_problem(double r = 1.0, bool free = false) {
  const Domain d = free ? Domain::free_ball(Vector::Zero(1), r) : Domain::ball(Vector::Zero(1), r);
  return make_bilinear(mat1(1.0), Vector::Zero(1), Vector::Zero(1), d, d, PairPoint{Vector::Zero(1), Vector::Zero(1)});
}

// f = a/2 x^2 - b/2 y^2 + c xy on 1-D domains.
inline SaddleProblem scalar_quadratic(double a, double b, double c, const Domain& dx, const Domain& dy) {
  return make_quadratic(mat1(a), mat1(c), mat1(b), Vector::Zero(1), Vector::Zero(1), dx, dy);
}

// A feasible start at joint distance d from the known saddle: each block moves d/sqrt(2)
// from its saddle component through the domain center.
inline Vector start_at_distance(const SaddleProblem& p, double d, std::mt19937_64& rng) {
  auto push = [&](const Vector& s, const Domain& dom) {
    Vector dir = s - dom.center();
    if (dir.norm() == 0.0) dir = gaussian(dir.size(), rng);
    return Vector(s - (d / std::sqrt(2.0)) * dir.normalized());
  };
  Vector z(p.dx() + p.dy());
  z << push(p.known_saddle->x, p.dom_x), push(p.known_saddle->y, p.dom_y);
  return z;
}

}  // namespace mmx::testing

#endif
