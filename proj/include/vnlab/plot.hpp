#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vnlab/errors.hpp"

namespace vnlab {

struct PlotPoint {
  double n = 0, loss = 0, lo = 0, hi = 0;
  std::optional<double> ref;
};

struct PlotSeries {
  std::string label;
  std::vector<PlotPoint> points;
};

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  if (quoted) throw ParseError(lineno, "unterminated quote");
  return out;
}

/// Series keyed by (model, scheme), points sorted by n. Comment lines
/// (leading '#') are skipped; the bayes_ref column is optional.
inline std::vector<PlotSeries> read_result_csv(std::istream& in) {
  static const std::vector<std::string> required{"scenario", "model", "scheme", "n",    "m",      "c",
                                                 "k",        "trials", "seed",  "loss", "ci_low", "ci_high"};
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line, lineno);
    break;
  }
  if (header.empty()) throw ParseError(lineno, "missing CSV header");
  const bool has_ref = header.size() == required.size() + 1 && header.back() == "bayes_ref";
  if (!(header.size() == required.size() || has_ref) ||
      !std::equal(required.begin(), required.end(), header.begin()))
    throw ParseError(lineno, "header does not match the result schema");
  std::map<std::string, PlotSeries> by_key;
  std::vector<std::string> key_order;
  auto number = [&](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return x;
    } catch (const std::logic_error&) {
      throw ParseError(lineno, std::string("bad ") + what + " value '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != header.size()) throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields");
    PlotPoint p{number(f[3], "n"), number(f[9], "loss"), number(f[10], "ci_low"), number(f[11], "ci_high"), {}};
    if (has_ref && !f[12].empty()) p.ref = number(f[12], "bayes_ref");
    const std::string key = f[1] + " / " + f[2];
    auto [it, fresh] = by_key.try_emplace(key);
    if (fresh) {
      it->second.label = key;
      key_order.push_back(key);
    }
    it->second.points.push_back(p);
  }
  std::vector<PlotSeries> out;
  for (const auto& k : key_order) {
    auto s = by_key[k];
    std::stable_sort(s.points.begin(), s.points.end(), [](const PlotPoint& a, const PlotPoint& b) { return a.n < b.n; });
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string svg_escape(const std::string& s) {
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

/// Loss against n with a shaded interval band per series and a dashed
/// reference line where bayes_ref is present.
inline std::string render_plot_svg(const std::vector<PlotSeries>& series, const std::string& title = "loss vs n") {
  if (series.empty()) throw InvalidInput("no rows to plot");
  const double W = 760, H = 480, left = 70, right = 250, top = 40, bottom = 60;
  double xmin = series.front().points.front().n, xmax = xmin;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      xmin = std::min(xmin, p.n);
      xmax = std::max(xmax, p.n);
    }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](double n) { return left + (n - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) { return top + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << svg_escape(title)
     << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = t / 4.0;
    os << "<line x1=\"" << left << "\" y1=\"" << Y(y) << "\" x2=\"" << left + pw << "\" y2=\"" << Y(y)
       << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << Y(y) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << y << "</text>\n";
  }
  std::vector<double> xs;
  for (const auto& s : series)
    for (const auto& p : s.points) xs.push_back(p.n);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double n : xs)
    os << "<text x=\"" << X(n) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << n << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">loss</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* col = palette[i % (sizeof palette / sizeof *palette)];
    os << "<g>\n";
    if (s.points.size() > 1) {
      os << "<polygon fill=\"" << col << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (const auto& p : s.points) os << X(p.n) << ',' << Y(p.hi) << ' ';
      for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) os << X(it->n) << ',' << Y(it->lo) << ' ';
      os << "\"/>\n";
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : s.points) os << X(p.n) << ',' << Y(p.loss) << ' ';
      os << "\"/>\n";
    }
    for (const auto& p : s.points) {
      os << "<line x1=\"" << X(p.n) << "\" y1=\"" << Y(p.lo) << "\" x2=\"" << X(p.n) << "\" y2=\"" << Y(p.hi)
         << "\" stroke=\"" << col << "\" stroke-opacity=\"0.5\"/>\n";
      os << "<circle cx=\"" << X(p.n) << "\" cy=\"" << Y(p.loss) << "\" r=\"3.5\" fill=\"" << col << "\"/>\n";
    }
    std::vector<const PlotPoint*> refs;
    for (const auto& p : s.points)
      if (p.ref) refs.push_back(&p);
    if (!refs.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-dasharray=\"6 4\" stroke-width=\"1.2\" points=\"";
      for (const auto* p : refs) os << X(p->n) << ',' << Y(*p->ref) << ' ';
      os << "\"/>\n";
      for (const auto* p : refs)
        os << "<rect x=\"" << X(p->n) - 3 << "\" y=\"" << Y(*p->ref) - 3 << "\" width=\"6\" height=\"6\" fill=\"none\" "
           << "stroke=\"" << col << "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << left + pw + 14 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 34 << "\" y2=\"" << ly
       << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << svg_escape(s.label) << (refs.empty() ? "" : " (dashed: ref)") << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void emit_plot(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path);
  if (!in) throw InvalidInput("cannot read " + csv_path);
  const auto series = read_result_csv(in);
  std::ofstream out(svg_path);
  if (!out) throw InvalidInput("cannot write " + svg_path);
  out << render_plot_svg(series, csv_path);
}

}  // namespace vnlab
