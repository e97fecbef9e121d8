#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>

namespace hmlam {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Numerical tolerances shared by the kernel. Both are overridable from the CLI.
struct Tolerance {
  double theta = 1e-9;  // ideal-point equality, radians on the disk boundary
  double trace = 1e-9;  // |trace| vs 2 for classification
};

// An orientation-preserving isometry of the upper half-plane, stored as a
// unit-determinant real matrix [[a, b], [c, d]]. +m and -m act identically;
// the stored representative has its first (numerically) nonzero entry positive.
class Isometry {
 public:
  Isometry() = default;  // identity
  // Throws ValidationError if the entries are not finite or det <= 0.
  Isometry(double a, double b, double c, double d);

  static Isometry identity() { return {}; }

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }

  double trace() const { return m_[0] + m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  Isometry inverse() const;

  // Matrix product, renormalized to det 1.
  friend Isometry operator*(const Isometry& lhs, const Isometry& rhs);

  // Max-entry distance between the two representatives, minimized over the sign.
  double distance(const Isometry& other) const;

 private:
  struct Raw {};
  Isometry(Raw, double a, double b, double c, double d) : m_{a, b, c, d} {}
  void canonicalize();

  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

enum class IsometryClass { identity, elliptic, parabolic, hyperbolic };

const char* to_string(IsometryClass c);

IsometryClass classify_isometry(const Isometry& m, const Tolerance& tol = {});

// Point of the upper half-plane. Imaginary parts at or below 1e-12 are
// treated as boundary points and rejected.
class HPoint {
 public:
  HPoint(double x, double y);
  explicit HPoint(std::complex<double> z) : HPoint(z.real(), z.imag()) {}

  double x() const { return x_; }
  double y() const { return y_; }
  std::complex<double> z() const { return {x_, y_}; }

 private:
  double x_;
  double y_;
};

// A point of the circle at infinity, canonically its angle on the unit
// circle under the Cayley map z -> (z - i)/(z + i). Angle 0 is the
// half-plane's point at infinity.
class IdealPoint {
 public:
  IdealPoint() = default;
  static IdealPoint from_angle(double theta);
  static IdealPoint from_real(double t);
  static IdealPoint infinity() { return IdealPoint{}; }
  // The boundary point with homogeneous coordinates [x : y] (x/y on the real line).
  static IdealPoint from_projective(double x, double y);

  double angle() const { return theta_; }
  bool is_infinity(double eps = 1e-9) const;
  // Real coordinate on the boundary line; infinite when at angle 0.
  double real() const;
  // Unit-length homogeneous coordinates [x : y].
  std::pair<double, double> projective() const;
  std::complex<double> disk() const { return std::polar(1.0, theta_); }

  bool equals(const IdealPoint& other, double eps) const;

 private:
  double theta_ = 0.0;
};

// Shortest distance between two angles on the circle.
double circular_distance(double alpha, double beta);

// A complete geodesic, determined by its two endpoints. Geodesics built from
// an isometry axis are oriented repelling -> attracting (a -> b).
class Geodesic {
 public:
  Geodesic(IdealPoint a, IdealPoint b, bool oriented = false, double eps = 1e-9);

  const IdealPoint& a() const { return a_; }
  const IdealPoint& b() const { return b_; }
  bool oriented() const { return oriented_; }

  // Endpoint-set equality within eps (orientation ignored).
  bool same_as(const Geodesic& other, double eps) const;

 private:
  IdealPoint a_;
  IdealPoint b_;
  bool oriented_ = false;
};

enum class GeodesicRelation { equal, cross, disjoint, share_endpoint };

const char* to_string(GeodesicRelation r);

// Möbius action on the half-plane. Throws NumericError if |cz + d| < 1e-14.
HPoint apply_isometry(const Isometry& m, const HPoint& p);

double hyperbolic_distance(const HPoint& p, const HPoint& q);

// Throws NotHyperbolicError unless classify_isometry(m) is hyperbolic.
Geodesic axis(const Isometry& m, const Tolerance& tol = {});

double translation_length(const Isometry& m, const Tolerance& tol = {});

GeodesicRelation geodesic_relation(const Geodesic& g1, const Geodesic& g2, double eps = 1e-9);

// Throws NoIntersectionError unless the two geodesics cross.
HPoint geodesic_intersection(const Geodesic& g1, const Geodesic& g2, double eps = 1e-9);

IdealPoint boundary_action(const Isometry& m, const IdealPoint& p);

Geodesic apply_isometry(const Isometry& m, const Geodesic& g);

// Cayley map into the Poincaré disk.
std::complex<double> to_disk(const HPoint& p);
double to_disk(const IdealPoint& p);
std::pair<double, double> to_disk(const Geodesic& g);

// Inverse Cayley map of an interior disk point.
HPoint from_disk(std::complex<double> w);

}  // namespace hmlam
