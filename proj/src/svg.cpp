#include "hmlam/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hmlam/error.hpp"

namespace hmlam {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kMargin = 1.05L;

std::string num(long double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.9Lf", v);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out += c;
    } else if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c - 'A' + 'a');
    } else if (c == '+') {
      out += "plus";
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "layer" : out;
}

}  // namespace

RenderLayer make_layer(const std::string& name, const GeodesicFamily& family) {
  RenderLayer l{name, {}, {}};
  for (const FamilyEntry& e : family.entries) l.geodesics.push_back(e.geodesic);
  return l;
}

RenderLayer make_layer(const std::string& name, const LaminationApprox& lam) {
  RenderLayer l{name, {}, {}};
  for (const Leaf& leaf : lam.leaves) l.geodesics.push_back(leaf.geodesic);
  return l;
}

RenderLayer make_layer(const std::string& name, const MeagerInvariantSet& set) {
  RenderLayer l{name, {}, {}};
  for (const MeagerPoint& p : set.points) l.points.push_back(p.disk);
  return l;
}

RenderLayer make_layer(const std::string& name, const std::vector<std::complex<double>>& points) {
  return RenderLayer{name, {}, points};
}

ArcGeometry arc_geometry(const Geodesic& g, double eps) {
  const long double ta = g.a().angle();
  const long double tb = g.b().angle();
  long double ccw = std::fmod(tb - ta + 2 * kPiL, 2 * kPiL);
  long double mid = 0;
  long double delta = 0;
  if (ccw <= kPiL) {
    delta = ccw;
    mid = ta + ccw / 2;
  } else {
    delta = 2 * kPiL - ccw;
    mid = tb + delta / 2;
  }
  ArcGeometry arc;
  arc.p = {std::cos(ta), std::sin(ta)};
  arc.q = {std::cos(tb), std::sin(tb)};
  if (kPiL - delta < eps) {
    arc.diameter = true;
    return arc;
  }
  const long double c = std::cos(delta / 2);
  arc.cx = std::cos(mid) / c;
  arc.cy = std::sin(mid) / c;
  arc.r = std::tan(delta / 2);
  return arc;
}

std::string render_svg(const std::vector<RenderLayer>& layers, const RenderStyle& style, double eps) {
  if (style.width <= 0 || style.height <= 0) throw ValidationError("render: canvas dimensions must be positive");
  if (!(style.boundary_stroke > 0) || !(style.geodesic_stroke > 0) || !(style.point_radius > 0)) {
    throw ValidationError("render: stroke widths and point radius must be positive");
  }
  if (style.palette.empty()) throw ValidationError("render: palette is empty");

  const long double u = kSvgUnitsPerRadius;
  const long double half = kMargin * u;
  // Screen pixels to user units.
  const long double px = 2 * half / static_cast<long double>(std::min(style.width, style.height));
  auto X = [&](long double x) { return num(x * u); };
  auto Y = [&](long double y) { return num(-y * u); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"" << num(-half) << ' ' << num(-half) << ' ' << num(2 * half) << ' '
     << num(2 * half) << "\">\n";
  os << "<desc>Poincare disk; " << num(u) << " user units per disk radius; disk y axis points up</desc>\n";
  os << "<defs><clipPath id=\"disk\"><circle cx=\"" << num(0) << "\" cy=\"" << num(0) << "\" r=\"" << num(u)
     << "\"/></clipPath></defs>\n";
  os << "<rect x=\"" << num(-half) << "\" y=\"" << num(-half) << "\" width=\"" << num(2 * half) << "\" height=\""
     << num(2 * half) << "\" fill=\"" << style.background << "\"/>\n";
  if (style.show_boundary) {
    os << "<circle id=\"boundary\" cx=\"" << num(0) << "\" cy=\"" << num(0) << "\" r=\"" << num(u)
       << "\" fill=\"none\" stroke=\"" << style.boundary_color << "\" stroke-width=\""
       << num(style.boundary_stroke * px) << "\"/>\n";
  }
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const RenderLayer& layer = layers[li];
    const std::string& color = style.palette[li % style.palette.size()];
    const std::string id = "l" + std::to_string(li) + "-" + slug(layer.name);
    os << "<g id=\"" << id << "\" class=\"layer\" stroke=\"" << color << "\" fill=\"none\" stroke-width=\""
       << num(style.geodesic_stroke * px) << "\">\n";
    for (std::size_t gi = 0; gi < layer.geodesics.size(); ++gi) {
      const ArcGeometry arc = arc_geometry(layer.geodesics[gi], eps);
      const std::string gid = id + "-g" + std::to_string(gi);
      if (arc.diameter) {
        os << "<line id=\"" << gid << "\" class=\"geodesic diameter\" x1=\"" << X(arc.p.real()) << "\" y1=\""
           << Y(arc.p.imag()) << "\" x2=\"" << X(arc.q.real()) << "\" y2=\"" << Y(arc.q.imag()) << "\"/>\n";
      } else {
        os << "<circle id=\"" << gid << "\" class=\"geodesic\" cx=\"" << X(arc.cx) << "\" cy=\"" << Y(arc.cy)
           << "\" r=\"" << num(arc.r * u) << "\" clip-path=\"url(#disk)\"/>\n";
      }
    }
    for (std::size_t pi = 0; pi < layer.points.size(); ++pi) {
      const auto& p = layer.points[pi];
      os << "<circle id=\"" << id << "-p" << pi << "\" class=\"point\" cx=\"" << X(p.real()) << "\" cy=\""
         << Y(p.imag()) << "\" r=\"" << num(style.point_radius * px) << "\" fill=\"" << color
         << "\" stroke=\"none\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hmlam
