#pragma once

#include <string>
#include <string_view>

#include "svstokes/stokes.hpp"

namespace svstokes {

/// Exact Stokes solution with -Laplace(u) + grad(p) = f, div u = 0.
struct ManufacturedCase {
  std::string id;
  VectorField u;
  TensorField grad_u;
  ScalarField p;
  VectorField f;
  double smoothness = 0.0;  // Sobolev index s; infinity for analytic data
};

/// "M1-smooth-corner": u = curl(x^2(1-x)^2 y^2(1-y)^2), p = cos(pi x) cos(pi y)
///   on the unit square; p is nonzero at every corner.
/// "M2-polynomial": u = 0, p = x^{k-1} - y^{k-1} (degree k - 1).
/// Short aliases "M1" and "M2" are accepted. Throws UnknownCase.
ManufacturedCase manufactured(std::string_view id, int k = 4);

}  // namespace svstokes
