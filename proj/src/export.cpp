#include "bbe/export.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bbe {

namespace {

std::string num(double v) { return formatNumber(v); }

// Fixed two-decimal output for pixel coordinates keeps the SVG stable.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* fillOf(Verdict v) {
  switch (v) {
    case Verdict::MemberSufficient: return "#2b6cb0";
    case Verdict::MemberNecessaryOnly: return "#90cdf4";
    case Verdict::Boundary: return "#f6ad55";
    case Verdict::NonMember: return "#ffffff";
  }
  return "#000000";
}

std::string xmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Round tick spacing giving roughly five intervals.
double tickStep(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (f * mag >= raw) return f * mag;
  return 10.0 * mag;
}

}  // namespace

std::string rasterCsv(const RegionRaster& r, const RunManifest& m) {
  std::ostringstream os;
  os << "# manifest: " << m.toJson().dump() << "\n";
  os << "# schema_version: " << kSchemaVersion << "\n";
  os << "s1,s2,status,undominated1,undominated2,minmax1,minmax2,sufficient1,sufficient2,investment1,investment2\n";
  for (int a = 0; a < r.resolution; ++a)
    for (int b = 0; b < r.resolution; ++b) {
      const auto& v = r.at(a, b);
      os << num(r.lo[0] + (a + 0.5) * r.step[0]) << ',' << num(r.lo[1] + (b + 0.5) * r.step[1]) << ','
         << toString(v.status);
      for (const auto* arr : {&v.undominated, &v.minmax, &v.sufficient, &v.investment})
        os << ',' << num((*arr)[0]) << ',' << num((*arr)[1]);
      os << '\n';
    }
  return os.str();
}

std::string rasterSvg(const RegionRaster& r, const RunManifest& m, const std::string& title) {
  const double W = 480, H = 480, left = 60, top = 40, right = 170, bottom = 50;
  const double cw = W / r.resolution, ch = H / r.resolution;
  auto X = [&](double s1) { return left + (s1 - r.lo[0]) / (r.hi[0] - r.lo[0]) * W; };
  auto Y = [&](double s2) { return top + H - (s2 - r.lo[1]) / (r.hi[1] - r.lo[1]) * H; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(left + W + right) << "\" height=\""
     << px(top + H + bottom) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<metadata>" << xmlEscape(m.toJson().dump()) << "</metadata>\n";
  os << "<text x=\"" << px(left) << "\" y=\"24\" font-size=\"14\">" << xmlEscape(title) << "</text>\n";

  // Cells are merged into horizontal runs of equal status per row.
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (int b = 0; b < r.resolution; ++b) {
    int a = 0;
    while (a < r.resolution) {
      const Verdict v = r.at(a, b).status;
      int end = a + 1;
      while (end < r.resolution && r.at(end, b).status == v) ++end;
      if (v != Verdict::NonMember)
        os << "<rect x=\"" << px(left + a * cw) << "\" y=\"" << px(top + H - (b + 1) * ch) << "\" width=\""
           << px((end - a) * cw) << "\" height=\"" << px(ch) << "\" fill=\"" << fillOf(v) << "\"/>\n";
      a = end;
    }
  }
  os << "</g>\n";

  os << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(W) << "\" height=\"" << px(H)
     << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = r.lo[axis], hi = r.hi[axis], step = tickStep(hi - lo);
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
      const double tv = std::abs(t) < 1e-12 ? 0.0 : t;
      if (axis == 0)
        os << "<line x1=\"" << px(X(tv)) << "\" y1=\"" << px(top + H) << "\" x2=\"" << px(X(tv)) << "\" y2=\""
           << px(top + H + 5) << "\" stroke=\"#000\"/><text x=\"" << px(X(tv)) << "\" y=\"" << px(top + H + 18)
           << "\" text-anchor=\"middle\">" << num(tv) << "</text>\n";
      else
        os << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(Y(tv)) << "\" x2=\"" << px(left) << "\" y2=\""
           << px(Y(tv)) << "\" stroke=\"#000\"/><text x=\"" << px(left - 8) << "\" y=\"" << px(Y(tv) + 4)
           << "\" text-anchor=\"end\">" << num(tv) << "</text>\n";
    }
  }
  os << "<text x=\"" << px(left + W / 2) << "\" y=\"" << px(top + H + 40) << "\" text-anchor=\"middle\">s1</text>\n";
  os << "<text x=\"" << px(left - 40) << "\" y=\"" << px(top + H / 2) << "\" text-anchor=\"middle\">s2</text>\n";

  for (const auto& mk : r.markers) {
    const bool nash = mk.label == "nash";
    os << "<circle cx=\"" << px(X(mk.s1)) << "\" cy=\"" << px(Y(mk.s2)) << "\" r=\"5\" fill=\""
       << (nash ? "#c53030" : "#2f855a") << "\" stroke=\"#000\"><title>" << xmlEscape(mk.label) << " ("
       << num(mk.s1) << ", " << num(mk.s2) << ")</title></circle>\n";
  }

  const double lx = left + W + 20;
  double ly = top + 10;
  for (Verdict v : {Verdict::MemberSufficient, Verdict::MemberNecessaryOnly, Verdict::Boundary, Verdict::NonMember}) {
    os << "<rect x=\"" << px(lx) << "\" y=\"" << px(ly) << "\" width=\"14\" height=\"14\" fill=\"" << fillOf(v)
       << "\" stroke=\"#000\"/><text x=\"" << px(lx + 20) << "\" y=\"" << px(ly + 11) << "\">" << toString(v)
       << "</text>\n";
    ly += 22;
  }
  for (const auto& [label, color] : {std::pair{"nash", "#c53030"}, std::pair{"stackelberg", "#2f855a"}}) {
    os << "<circle cx=\"" << px(lx + 7) << "\" cy=\"" << px(ly + 7) << "\" r=\"5\" fill=\"" << color
       << "\" stroke=\"#000\"/><text x=\"" << px(lx + 20) << "\" y=\"" << px(ly + 11) << "\">" << label
       << "</text>\n";
    ly += 22;
  }
  os << "</svg>\n";
  return os.str();
}

Json rasterSummary(const RegionRaster& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["resolution"] = r.resolution;
  j["lo"] = Json::array({r.lo[0], r.lo[1]});
  j["hi"] = Json::array({r.hi[0], r.hi[1]});
  Json counts = Json::object();
  for (Verdict v : {Verdict::MemberSufficient, Verdict::MemberNecessaryOnly, Verdict::Boundary, Verdict::NonMember})
    counts[toString(v)] = 0;
  for (const auto& c : r.cells) counts[toString(c.status)] = counts[toString(c.status)].get<int>() + 1;
  j["counts"] = counts;
  Json mk = Json::array();
  for (const auto& m : r.markers) mk.push_back({{"label", m.label}, {"s1", m.s1}, {"s2", m.s2}});
  j["markers"] = mk;
  return j;
}

}  // namespace bbe
