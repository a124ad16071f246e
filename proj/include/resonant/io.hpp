#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resonant/workloop.hpp"

namespace resonant {

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
};

/// Standalone SVG with axes, ticks and a legend. Non-finite samples break
/// the polyline.
void write_svg(std::ostream& os, const Plot& plot, int width = 720, int height = 480);
/// The plotted samples in long form: series,x,y.
void write_plot_csv(std::ostream& os, const Plot& plot);

/// x, G_plus, G_minus, G_mid, G_arc.
void write_loop_csv(std::ostream& os, const PeaLoop& loop);
/// F, X_plus, X_minus, Xprime_plus, Xprime_minus.
void write_loop_csv(std::ostream& os, const SeaLoop& loop);

/// G+(x) and G-(x).
Plot loop_plot(const PeaLoop& loop);
/// X+(F) and X-(F).
Plot loop_plot(const SeaLoop& loop);

}  // namespace resonant
