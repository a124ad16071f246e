#include "resonant/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace resonant {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

/// 1-2-5 step giving roughly n intervals over [lo, hi].
double nice_step(double lo, double hi, int n) {
  const double raw = (hi - lo) / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) lo = -1.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double d = 0.05 * (hi - lo);
    lo -= d;
    hi += d;
  }
};

}  // namespace

void write_svg(std::ostream& os, const Plot& plot, int width, int height) {
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  Range rx, ry;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) rx.add(s.x[i]), ry.add(s.y[i]);
  rx.pad();
  ry.pad();
  auto X = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double v) { return top + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << px(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(plot.title) << "</text>\n";

  const double sx = nice_step(rx.lo, rx.hi, 6), sy = nice_step(ry.lo, ry.hi, 6);
  for (double v = std::ceil(rx.lo / sx) * sx; v <= rx.hi; v += sx) {
    os << "<line x1=\"" << px(X(v)) << "\" y1=\"" << px(top) << "\" x2=\"" << px(X(v)) << "\" y2=\""
       << px(top + ph) << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << px(X(v)) << "\" y=\"" << px(top + ph + 16) << "\" text-anchor=\"middle\">"
       << tick_label(v) << "</text>\n";
  }
  for (double v = std::ceil(ry.lo / sy) * sy; v <= ry.hi; v += sy) {
    os << "<line x1=\"" << px(left) << "\" y1=\"" << px(Y(v)) << "\" x2=\"" << px(left + pw) << "\" y2=\""
       << px(Y(v)) << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << px(left - 6) << "\" y=\"" << px(Y(v) + 4) << "\" text-anchor=\"end\">" << tick_label(v)
       << "</text>\n";
  }
  if (ry.lo < 0 && ry.hi > 0)
    os << "<line x1=\"" << px(left) << "\" y1=\"" << px(Y(0)) << "\" x2=\"" << px(left + pw) << "\" y2=\""
       << px(Y(0)) << "\" stroke=\"#888\"/>\n";
  os << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(height - 10.0) << "\" text-anchor=\"middle\">"
     << xml_escape(plot.xlabel) << "</text>\n";
  os << "<text transform=\"translate(16," << px(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << xml_escape(plot.ylabel) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen = false;
        continue;
      }
      d += (pen ? "L" : "M") + px(X(s.x[i])) + "," + px(Y(s.y[i]));
      pen = true;
    }
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(k);
    os << "<line x1=\"" << px(left + pw + 10) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(left + pw + 34)
       << "\" y2=\"" << px(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    os << "<text x=\"" << px(left + pw + 40) << "\" y=\"" << px(ly + 4) << "\">" << xml_escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
}

void write_plot_csv(std::ostream& os, const Plot& plot) {
  os << "series," << (plot.xlabel.empty() ? "x" : plot.xlabel) << ',' << (plot.ylabel.empty() ? "y" : plot.ylabel)
     << '\n';
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      os << s.name << ',' << format_number(s.x[i]) << ',' << format_number(s.y[i]) << '\n';
}

void write_loop_csv(std::ostream& os, const PeaLoop& loop) {
  os << "x,G_plus,G_minus,G_mid,G_arc\n";
  for (std::size_t i = 0; i < loop.x().size(); ++i)
    os << format_number(loop.x()[i]) << ',' << format_number(loop.g_plus()[i]) << ','
       << format_number(loop.g_minus()[i]) << ',' << format_number(loop.g_mid()[i]) << ','
       << format_number(loop.g_arc()[i]) << '\n';
}

void write_loop_csv(std::ostream& os, const SeaLoop& loop) {
  os << "F,X_plus,X_minus,Xprime_plus,Xprime_minus\n";
  for (std::size_t i = 0; i < loop.f().size(); ++i)
    os << format_number(loop.f()[i]) << ',' << format_number(loop.x_plus()[i]) << ','
       << format_number(loop.x_minus()[i]) << ',' << format_number(loop.xprime_plus()[i]) << ','
       << format_number(loop.xprime_minus()[i]) << '\n';
}

Plot loop_plot(const PeaLoop& loop) {
  Plot p{"PEA work loop", "x", "G", {}};
  p.series.push_back({"G+", loop.x(), loop.g_plus(), "#d62728", false});
  p.series.push_back({"G-", loop.x(), loop.g_minus(), "#1f77b4", false});
  return p;
}

Plot loop_plot(const SeaLoop& loop) {
  Plot p{"SEA work loop", "F", "x", {}};
  p.series.push_back({"X+", loop.f(), loop.x_plus(), "#d62728", false});
  p.series.push_back({"X-", loop.f(), loop.x_minus(), "#1f77b4", false});
  return p;
}

}  // namespace resonant
