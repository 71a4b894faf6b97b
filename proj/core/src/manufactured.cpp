#include "svstokes/manufactured.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "svstokes/errors.hpp"

namespace svstokes {
namespace {

// g(s) = s^2 (1 - s)^2 and its derivatives.
double g0(double s) { return s * s * (1 - s) * (1 - s); }
double g1(double s) { return 2 * s - 6 * s * s + 4 * s * s * s; }
double g2(double s) { return 2 - 12 * s + 12 * s * s; }
double g3(double s) { return -12 + 24 * s; }

ManufacturedCase smooth_corner() {
  constexpr double pi = std::numbers::pi;
  ManufacturedCase c;
  c.id = "M1-smooth-corner";
  c.smoothness = std::numeric_limits<double>::infinity();
  c.u = [](const Point& x) {
    return Eigen::Vector2d(g0(x.x()) * g1(x.y()), -g1(x.x()) * g0(x.y()));
  };
  c.grad_u = [](const Point& x) {
    Eigen::Matrix2d g;
    g << g1(x.x()) * g1(x.y()), g0(x.x()) * g2(x.y()),
        -g2(x.x()) * g0(x.y()), -g1(x.x()) * g1(x.y());
    return g;
  };
  c.p = [](const Point& x) { return std::cos(pi * x.x()) * std::cos(pi * x.y()); };
  c.f = [](const Point& x) {
    const double lap1 = g2(x.x()) * g1(x.y()) + g0(x.x()) * g3(x.y());
    const double lap2 = -(g3(x.x()) * g0(x.y()) + g1(x.x()) * g2(x.y()));
    const double px = -pi * std::sin(pi * x.x()) * std::cos(pi * x.y());
    const double py = -pi * std::cos(pi * x.x()) * std::sin(pi * x.y());
    return Eigen::Vector2d(-lap1 + px, -lap2 + py);
  };
  return c;
}

ManufacturedCase polynomial(int k) {
  if (k < 1) throw InvalidParameter("M2 needs k >= 1");
  const int d = k - 1;
  ManufacturedCase c;
  c.id = "M2-polynomial";
  c.smoothness = std::numeric_limits<double>::infinity();
  c.u = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  c.grad_u = [](const Point&) { return Eigen::Matrix2d::Zero().eval(); };
  c.p = [d](const Point& x) { return std::pow(x.x(), d) - std::pow(x.y(), d); };
  c.f = [d](const Point& x) {
    if (d == 0) return Eigen::Vector2d::Zero().eval();
    return Eigen::Vector2d(d * std::pow(x.x(), d - 1), -d * std::pow(x.y(), d - 1));
  };
  return c;
}

}  // namespace

ManufacturedCase manufactured(std::string_view id, int k) {
  if (id == "M1-smooth-corner" || id == "M1") return smooth_corner();
  if (id == "M2-polynomial" || id == "M2") return polynomial(k);
  throw UnknownCase(std::string(id));
}

}  // namespace svstokes
