#pragma once

// Small fixed-step RK4 used as an integration oracle in tests.

#include <cmath>

#include "conley/complex.hpp"
#include "conley/field.hpp"

namespace oracle {

inline conley::Point rk4(const conley::PlanarField& f, conley::Point p, double t, int steps = 200) {
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const conley::Point k1 = f(p);
    const conley::Point k2 = f(p + (h / 2) * k1);
    const conley::Point k3 = f(p + (h / 2) * k2);
    const conley::Point k4 = f(p + h * k3);
    p = p + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

/// Point lies in the closed union of the squares of `n`.
inline bool in_union(const conley::CubicalSet& n, conley::Point p) {
  const auto& r = n.rect();
  const int res = n.resolution();
  const double dx = (r.x1 - r.x0) / res;
  const double dy = (r.y1 - r.y0) / res;
  const int i = static_cast<int>(std::floor((p.x - r.x0) / dx));
  const int j = static_cast<int>(std::floor((p.y - r.y0) / dy));
  for (int a = i - 1; a <= i + 1; ++a) {
    for (int b = j - 1; b <= j + 1; ++b) {
      if (!n.contains(conley::Cell::square(a, b))) continue;
      const double x0 = r.x0 + a * dx, y0 = r.y0 + b * dy;
      if (p.x >= x0 && p.x <= x0 + dx && p.y >= y0 && p.y <= y0 + dy) return true;
    }
  }
  return false;
}

}  // namespace oracle
