#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qrep/analysis.hpp"

namespace qrep {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double format failure");
  return std::string(buf, ptr);
}

std::string table_to_csv(const std::vector<SweepPoint>& table) {
  std::ostringstream os;
  os << "code_id,n,p_t,trials,failures,p_l,ci_lo,ci_hi\n";
  for (const SweepPoint& p : table) {
    os << p.code_id << ',' << p.n << ',' << format_double(p.p_t) << ',' << p.trials << ','
       << p.failures << ',' << format_double(p.p_l) << ',' << format_double(p.ci_lo) << ','
       << format_double(p.ci_hi) << '\n';
  }
  return os.str();
}

std::vector<SweepPoint> table_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
  std::vector<SweepPoint> table;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    SweepPoint p;
    std::getline(ls, p.code_id, ',');
    std::getline(ls, field, ',');
    p.n = std::stoul(field);
    std::getline(ls, field, ',');
    p.p_t = std::stod(field);
    std::getline(ls, field, ',');
    p.trials = std::stoull(field);
    std::getline(ls, field, ',');
    p.failures = std::stoull(field);
    std::getline(ls, field, ',');
    p.p_l = std::stod(field);
    std::getline(ls, field, ',');
    p.ci_lo = std::stod(field);
    std::getline(ls, field, ',');
    p.ci_hi = std::stod(field);
    p.accepted = p.trials;
    table.push_back(std::move(p));
  }
  return table;
}

namespace {

struct LogScale {
  double lo, hi, px0, px1;
  double map(double v) const {
    return px0 + (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo)) * (px1 - px0);
  }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

SvgDiagnostics write_svg_plot(const std::string& path, const std::vector<SweepPoint>& table,
                              const FitParams* fit) {
  if (table.empty()) throw std::invalid_argument("empty table");
  const double width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 20, mb = 50;

  double x_lo = 1e300, x_hi = 0, y_lo = 1e300, y_hi = 0;
  for (const SweepPoint& p : table) {
    x_lo = std::min(x_lo, p.p_t);
    x_hi = std::max(x_hi, p.p_t);
    double lo = p.ci_lo > 0 ? p.ci_lo : (p.p_l > 0 ? p.p_l : 1e-7);
    y_lo = std::min(y_lo, lo);
    y_hi = std::max(y_hi, p.ci_hi > 0 ? p.ci_hi : 1.0);
  }
  y_lo = std::max(y_lo * 0.5, 1e-9);
  y_hi = std::min(y_hi * 2.0, 1.0);
  LogScale xs{x_lo, x_hi, ml, width - mr};
  LogScale ys_raw{y_lo, y_hi, 0, 1};
  auto ymap = [&](double v) {
    return height - mb - ys_raw.map(std::max(v, 1e-12)) * (height - mt - mb);
  };

  std::map<size_t, std::vector<const SweepPoint*>> by_n;
  for (const SweepPoint& p : table) by_n[p.n].push_back(&p);
  for (auto& [n, pts] : by_n)
    std::sort(pts.begin(), pts.end(),
              [](const SweepPoint* a, const SweepPoint* b) { return a->p_t < b->p_t; });

  size_t in_ci = 0, total = 0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-size=\"14\">total physical error p_t</text>\n";
  os << "<text x=\"16\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 " << height / 2
     << ")\">logical error p_L</text>\n";
  // axes box
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
     << "\" height=\"" << height - mt - mb
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  size_t ci = 0;
  double legend_y = mt + 16;
  for (auto& [n, pts] : by_n) {
    const char* color = kPalette[ci % 7];
    std::ostringstream poly;
    for (const SweepPoint* p : pts) {
      double x = xs.map(p->p_t);
      poly << x << ',' << ymap(p->p_l) << ' ';
      if (p->ci_hi > p->ci_lo && p->ci_lo >= 0) {
        os << "<line x1=\"" << x << "\" y1=\"" << ymap(std::max(p->ci_lo, y_lo))
           << "\" x2=\"" << x << "\" y2=\"" << ymap(p->ci_hi) << "\" stroke=\"" << color
           << "\" stroke-width=\"1\"/>\n";
      }
      os << "<circle cx=\"" << x << "\" cy=\"" << ymap(p->p_l) << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
    }
    os << "<polyline points=\"" << poly.str() << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    if (fit) {
      std::ostringstream fpoly;
      for (int i = 0; i <= 60; ++i) {
        double pt = std::exp(std::log(x_lo) + (std::log(x_hi) - std::log(x_lo)) * i / 60.0);
        double pl = fit_predict(*fit, n, pt);
        if (pl < y_lo / 4 || pl > 1.0) continue;
        fpoly << xs.map(pt) << ',' << ymap(pl) << ' ';
      }
      os << "<polyline points=\"" << fpoly.str() << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1\" stroke-dasharray=\"5,3\"/>\n";
      for (const SweepPoint* p : pts) {
        double pl = fit_predict(*fit, n, p->p_t);
        ++total;
        if (pl >= p->ci_lo && pl <= p->ci_hi) ++in_ci;
      }
    }
    os << "<text x=\"" << width - mr - 120 << "\" y=\"" << legend_y
       << "\" font-size=\"13\" fill=\"" << color << "\">n = " << n << "</text>\n";
    legend_y += 16;
    ++ci;
  }
  if (fit) {
    os << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 << "\" font-size=\"12\">fit: p0 = "
       << format_double(fit->p0) << ", alpha = " << format_double(fit->alpha)
       << ", delta = " << format_double(fit->delta) << "</text>\n";
  }
  os << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << os.str();

  SvgDiagnostics diag;
  diag.fit_within_ci_fraction = total ? double(in_ci) / double(total) : 1.0;
  return diag;
}

}  // namespace qrep
