#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace schwarzstatic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Symmetric 3x3 tensor, packed as (00, 01, 02, 11, 12, 22).
struct Sym3 {
  std::array<double, 6> c{};

  static constexpr int slot(int i, int j) {
    if (i > j) { int t = i; i = j; j = t; }
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }
  double operator()(int i, int j) const { return c[slot(i, j)]; }
  double& operator()(int i, int j) { return c[slot(i, j)]; }

  static Sym3 diag(double a, double b, double d) { return Sym3{{a, 0, 0, b, 0, d}}; }
  static Sym3 from(const Mat3& m) {
    return Sym3{{m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)), m(1, 1),
                 0.5 * (m(1, 2) + m(2, 1)), m(2, 2)}};
  }
  Mat3 matrix() const {
    Mat3 m;
    m << c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5];
    return m;
  }
  double max_abs() const {
    double m = 0;
    for (double v : c) m = std::fmax(m, std::fabs(v));
    return m;
  }

  Sym3& operator+=(const Sym3& o) { for (int i = 0; i < 6; ++i) c[i] += o.c[i]; return *this; }
  Sym3& operator-=(const Sym3& o) { for (int i = 0; i < 6; ++i) c[i] -= o.c[i]; return *this; }
  Sym3& operator*=(double s) { for (double& v : c) v *= s; return *this; }
  friend Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
  friend Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
  friend Sym3 operator*(double s, Sym3 a) { return a *= s; }
};

/// T(a,b) = v_a^i v_b^j T_ij for three vectors v_0, v_1, v_2 (columns of V).
inline Sym3 contract(const Sym3& t, const Mat3& v) {
  return Sym3::from(v.transpose() * t.matrix() * v);
}

}  // namespace schwarzstatic
