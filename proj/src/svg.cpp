#include "geoeval/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "geoeval/errors.hpp"

namespace geoeval {

namespace {

std::string fmt(double v, const char* format = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice;
  if (frac <= 1.0)
    nice = 1.0;
  else if (frac <= 2.0)
    nice = 2.0;
  else if (frac <= 5.0)
    nice = 5.0;
  else
    nice = 10.0;
  return nice * mag;
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& x_label,
                        const std::string& y_label, bool zero_line) {
  std::size_t n_points = 0;
  for (const ScatterSeries& s : series) n_points += s.points.size();
  if (n_points == 0) throw ValueError("scatter plot needs at least one point");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const ScatterSeries& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (zero_line) {
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
  }
  if (xmax == xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax == ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double W = 800, H = 560;
  const double L = 78, R = W - 168, T = 28, B = H - 56;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
  auto py = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
         "viewBox=\"0 0 800 560\">\n";
  out += "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n";
  out += "<rect x=\"" + fmt(L) + "\" y=\"" + fmt(T) + "\" width=\"" + fmt(R - L) +
         "\" height=\"" + fmt(B - T) + "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xstep = nice_step(xmax - xmin), ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    out += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(B) + "\" x2=\"" + fmt(px(t)) +
           "\" y2=\"" + fmt(B + 5) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(B + 19) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt(t, "%g") + "</text>\n";
  }
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    out += "<line x1=\"" + fmt(L - 5) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(L) +
           "\" y2=\"" + fmt(py(t)) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fmt(L - 9) + "\" y=\"" + fmt(py(t) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           fmt(t, "%g") + "</text>\n";
  }

  out += "<text x=\"" + fmt((L + R) / 2) + "\" y=\"" + fmt(H - 14) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt((T + B) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 20 " +
         fmt((T + B) / 2) + ")\">" + y_label + "</text>\n";

  if (zero_line && ymin < 0.0 && ymax > 0.0)
    out += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(py(0.0)) + "\" x2=\"" + fmt(R) +
           "\" y2=\"" + fmt(py(0.0)) + "\" stroke=\"#222\" stroke-dasharray=\"6 4\"/>\n";

  for (const ScatterSeries& s : series)
    for (const auto& [x, y] : s.points)
      out += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
             "\" r=\"3.5\" fill=\"" + s.color + "\" fill-opacity=\"0.65\"/>\n";

  double ly = T + 16;
  for (const ScatterSeries& s : series) {
    out += "<circle cx=\"" + fmt(R + 18) + "\" cy=\"" + fmt(ly - 4) + "\" r=\"5\" fill=\"" +
           s.color + "\"/>\n";
    out += "<text x=\"" + fmt(R + 30) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + s.name + "</text>\n";
    ly += 20;
  }

  out += "</svg>\n";
  return out;
}

}  // namespace geoeval
