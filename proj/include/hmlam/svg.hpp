#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hmlam/lamination.hpp"

namespace hmlam {

struct RenderStyle {
  int width = 1000;
  int height = 1000;
  double boundary_stroke = 2.0;  // pixels
  double geodesic_stroke = 1.0;
  double point_radius = 2.5;
  std::string background = "#ffffff";
  std::string boundary_color = "#000000";
  std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  bool show_boundary = true;
};

// One color group of the picture.
struct RenderLayer {
  std::string name;
  std::vector<Geodesic> geodesics;
  std::vector<std::complex<double>> points;  // disk coordinates
};

RenderLayer make_layer(const std::string& name, const GeodesicFamily& family);
RenderLayer make_layer(const std::string& name, const LaminationApprox& lam);
RenderLayer make_layer(const std::string& name, const MeagerInvariantSet& set);
RenderLayer make_layer(const std::string& name, const std::vector<std::complex<double>>& points);

// Circle carrying a geodesic in the unit disk: center C and radius r with
// |C|^2 - r^2 = 1, or a diameter when the endpoints are antipodal.
struct ArcGeometry {
  bool diameter = false;
  long double cx = 0, cy = 0, r = 0;
  std::complex<long double> p, q;  // endpoints on the unit circle
};

ArcGeometry arc_geometry(const Geodesic& g, double eps = 1e-9);

// SVG user units per unit-disk radius. The fine unit keeps 9-decimal
// output accurate for arcs with large radii.
inline constexpr long double kSvgUnitsPerRadius = 1e6L;

// Deterministic SVG 1.1 document: boundary circle, then one group per layer
// in order. Geodesics are circles clipped to the disk (lines for diameters);
// every number is printed with 9 decimals. Throws ValidationError for
// nonpositive dimensions.
std::string render_svg(const std::vector<RenderLayer>& layers, const RenderStyle& style = {}, double eps = 1e-9);

}  // namespace hmlam
