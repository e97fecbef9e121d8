#include "hmlam/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "hmlam/error.hpp"

namespace hmlam {
namespace {

// a*d - b*c with a single rounding (Kahan's fma trick).
double diff_of_products(double a, double d, double b, double c) {
  const double w = b * c;
  const double e = std::fma(-b, c, w);
  const double f = std::fma(a, d, -w);
  return f + e;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Products whose entries stay below this scale get renormalized to det 1.
// Beyond it, the computed determinant is dominated by rounding of the
// entries themselves and rescaling would corrupt the trace.
constexpr double kRenormLimit = 1e4;

// Strictly inside the counterclockwise arc from s to e.
bool strictly_between(double x, double s, double e) {
  const double span = wrap_angle(e - s);
  const double off = wrap_angle(x - s);
  return off > 0.0 && off < span;
}

}  // namespace

Isometry::Isometry(double a, double b, double c, double d) : m_{a, b, c, d} {
  for (double v : m_) {
    if (!std::isfinite(v)) throw ValidationError("isometry entry is not finite");
  }
  const double det = diff_of_products(a, d, b, c);
  if (!(det > 0.0)) throw ValidationError("isometry determinant must be positive");
  const double s = std::sqrt(det);
  for (double& v : m_) v /= s;
  canonicalize();
}

void Isometry::canonicalize() {
  for (double v : m_) {
    if (std::abs(v) > 1e-14) {
      if (v < 0.0) {
        for (double& w : m_) w = -w;
      }
      return;
    }
  }
}

Isometry Isometry::inverse() const {
  Isometry r(Raw{}, m_[3], -m_[1], -m_[2], m_[0]);
  r.canonicalize();
  return r;
}

Isometry operator*(const Isometry& lhs, const Isometry& rhs) {
  const auto& p = lhs.m_;
  const auto& q = rhs.m_;
  Isometry r(Isometry::Raw{}, p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
             p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]);
  auto& m = r.m_;
  const double mag = std::abs(m[0] * m[3]) + std::abs(m[1] * m[2]);
  if (mag < kRenormLimit) {
    const double det = diff_of_products(m[0], m[3], m[1], m[2]);
    if (det > 0.0) {
      const double s = std::sqrt(det);
      for (double& v : m) v /= s;
    }
  }
  r.canonicalize();
  return r;
}

double Isometry::distance(const Isometry& other) const {
  double plus = 0.0;
  double minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(m_[i] - other.m_[i]));
    minus = std::max(minus, std::abs(m_[i] + other.m_[i]));
  }
  return std::min(plus, minus);
}

const char* to_string(IsometryClass c) {
  switch (c) {
    case IsometryClass::identity: return "identity";
    case IsometryClass::elliptic: return "elliptic";
    case IsometryClass::parabolic: return "parabolic";
    case IsometryClass::hyperbolic: return "hyperbolic";
  }
  return "?";
}

IsometryClass classify_isometry(const Isometry& m, const Tolerance& tol) {
  if (m.distance(Isometry::identity()) <= 1e-12) return IsometryClass::identity;
  const double t = std::abs(m.trace());
  if (t < 2.0 - tol.trace) return IsometryClass::elliptic;
  if (t <= 2.0 + tol.trace) return IsometryClass::parabolic;
  return IsometryClass::hyperbolic;
}

HPoint::HPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw ValidationError("point coordinate is not finite");
  if (y <= 1e-12) throw ValidationError("point lies on or below the boundary (y <= 1e-12)");
}

IdealPoint IdealPoint::from_angle(double theta) {
  if (!std::isfinite(theta)) throw ValidationError("ideal point angle is not finite");
  IdealPoint p;
  p.theta_ = wrap_angle(theta);
  return p;
}

IdealPoint IdealPoint::from_real(double t) {
  if (std::isinf(t)) return infinity();
  return from_projective(t, 1.0);
}

IdealPoint IdealPoint::from_projective(double x, double y) {
  const double n = std::hypot(x, y);
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("degenerate homogeneous boundary coordinates");
  x /= n;
  y /= n;
  return from_angle(std::atan2(-2.0 * x * y, (x - y) * (x + y)));
}

bool IdealPoint::is_infinity(double eps) const { return circular_distance(theta_, 0.0) < eps; }

double IdealPoint::real() const {
  const auto [x, y] = projective();
  if (y == 0.0) return HUGE_VAL;
  return x / y;
}

std::pair<double, double> IdealPoint::projective() const {
  return {std::cos(0.5 * theta_), -std::sin(0.5 * theta_)};
}

bool IdealPoint::equals(const IdealPoint& other, double eps) const {
  return circular_distance(theta_, other.theta_) < eps;
}

double circular_distance(double alpha, double beta) {
  const double d = wrap_angle(alpha - beta);
  return std::min(d, kTwoPi - d);
}

Geodesic::Geodesic(IdealPoint a, IdealPoint b, bool oriented, double eps)
    : a_(a), b_(b), oriented_(oriented) {
  if (a.equals(b, eps)) throw ValidationError("geodesic endpoints coincide");
}

bool Geodesic::same_as(const Geodesic& other, double eps) const {
  return (a_.equals(other.a_, eps) && b_.equals(other.b_, eps)) ||
         (a_.equals(other.b_, eps) && b_.equals(other.a_, eps));
}

const char* to_string(GeodesicRelation r) {
  switch (r) {
    case GeodesicRelation::equal: return "equal";
    case GeodesicRelation::cross: return "cross";
    case GeodesicRelation::disjoint: return "disjoint";
    case GeodesicRelation::share_endpoint: return "share_endpoint";
  }
  return "?";
}

HPoint apply_isometry(const Isometry& m, const HPoint& p) {
  const std::complex<double> z = p.z();
  const std::complex<double> den = m.c() * z + m.d();
  if (std::abs(den) < 1e-14) throw NumericError("degenerate Moebius denominator |cz+d| < 1e-14");
  const std::complex<double> w = (m.a() * z + m.b()) / den;
  // Im w = y / |cz+d|^2 for det 1; computed this way it keeps full precision.
  const double y = p.y() / std::norm(den);
  if (!(y > 1e-12)) throw NumericError("image point collapsed onto the boundary");
  return HPoint(w.real(), y);
}

double hyperbolic_distance(const HPoint& p, const HPoint& q) {
  // cosh d = 1 + |p-q|^2 / (2 y_p y_q), rewritten as 2 asinh(...) for small d.
  const double chord = std::abs(p.z() - q.z());
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y() * q.y())));
}

Geodesic axis(const Isometry& m, const Tolerance& tol) {
  if (classify_isometry(m, tol) != IsometryClass::hyperbolic) {
    throw NotHyperbolicError("axis requested for a non-hyperbolic isometry");
  }
  const double t = m.trace();
  const double s = t > 0.0 ? 1.0 : -1.0;
  const double big = 0.5 * (t + s * std::sqrt((t - 2.0) * (t + 2.0)));
  const double small = 1.0 / big;
  auto eigvec = [&](double lambda) {
    const double x1 = m.b(), y1 = lambda - m.a();
    const double x2 = lambda - m.d(), y2 = m.c();
    if (std::hypot(x1, y1) >= std::hypot(x2, y2)) return IdealPoint::from_projective(x1, y1);
    return IdealPoint::from_projective(x2, y2);
  };
  // |derivative| at the fixed point of eigenvalue lambda is 1/lambda^2.
  return Geodesic(eigvec(small), eigvec(big), true, tol.theta);
}

double translation_length(const Isometry& m, const Tolerance& tol) {
  if (classify_isometry(m, tol) != IsometryClass::hyperbolic) {
    throw NotHyperbolicError("translation length requested for a non-hyperbolic isometry");
  }
  return 2.0 * std::acosh(0.5 * std::abs(m.trace()));
}

GeodesicRelation geodesic_relation(const Geodesic& g1, const Geodesic& g2, double eps) {
  const bool aa = g1.a().equals(g2.a(), eps);
  const bool ab = g1.a().equals(g2.b(), eps);
  const bool ba = g1.b().equals(g2.a(), eps);
  const bool bb = g1.b().equals(g2.b(), eps);
  if ((aa && bb) || (ab && ba)) return GeodesicRelation::equal;
  if (aa || ab || ba || bb) return GeodesicRelation::share_endpoint;
  const double s = g1.a().angle();
  const double e = g1.b().angle();
  const bool in_a = strictly_between(g2.a().angle(), s, e);
  const bool in_b = strictly_between(g2.b().angle(), s, e);
  return in_a != in_b ? GeodesicRelation::cross : GeodesicRelation::disjoint;
}

HPoint geodesic_intersection(const Geodesic& g1, const Geodesic& g2, double eps) {
  if (geodesic_relation(g1, g2, eps) != GeodesicRelation::cross) {
    throw NoIntersectionError("geodesics do not cross");
  }
  // Geodesics are straight chords in the Klein model; intersect the chords
  // and carry the point back through the Poincaré disk.
  const std::complex<double> u1 = g1.a().disk(), v1 = g1.b().disk();
  const std::complex<double> u2 = g2.a().disk(), v2 = g2.b().disk();
  const std::complex<double> d1 = v1 - u1, d2 = v2 - u2, r = u2 - u1;
  const double den = d1.real() * d2.imag() - d1.imag() * d2.real();
  if (std::abs(den) < 1e-300) throw NumericError("parallel chords in geodesic intersection");
  const double s = (r.real() * d2.imag() - r.imag() * d2.real()) / den;
  const std::complex<double> k = u1 + s * d1;
  const double k2 = std::min(std::norm(k), 1.0);
  const std::complex<double> w = k / (1.0 + std::sqrt(1.0 - k2));
  return from_disk(w);
}

IdealPoint boundary_action(const Isometry& m, const IdealPoint& p) {
  const auto [x, y] = p.projective();
  return IdealPoint::from_projective(m.a() * x + m.b() * y, m.c() * x + m.d() * y);
}

Geodesic apply_isometry(const Isometry& m, const Geodesic& g) {
  return Geodesic(boundary_action(m, g.a()), boundary_action(m, g.b()), g.oriented(), 0.0);
}

std::complex<double> to_disk(const HPoint& p) {
  const std::complex<double> i(0.0, 1.0);
  return (p.z() - i) / (p.z() + i);
}

double to_disk(const IdealPoint& p) { return p.angle(); }

std::pair<double, double> to_disk(const Geodesic& g) { return {g.a().angle(), g.b().angle()}; }

HPoint from_disk(std::complex<double> w) {
  if (!(std::abs(w) < 1.0)) throw ValidationError("disk point is not interior");
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> z = i * (1.0 + w) / (1.0 - w);
  // Im z = (1 - |w|^2) / |1 - w|^2, evaluated without cancellation.
  const double y = (1.0 - std::norm(w)) / std::norm(1.0 - w);
  if (!(y > 1e-12)) throw NumericError("disk point too close to the boundary");
  return HPoint(z.real(), y);
}

}  // namespace hmlam
