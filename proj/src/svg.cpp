#include "openns/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "openns/errors.hpp"
#include "openns/harness.hpp"

namespace openns {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct AxisRange {
  double lo = 0.0, hi = 1.0;

  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string render_panel(const PlotSpec& spec, int width, int height) {
  const double ml = 62, mr = 16, mt = 34, mb = 46;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;

  AxisRange xr, yr;
  bool any_point = false;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& [x, y] = s.points[i];
      if (!any_point) {
        xr.lo = xr.hi = x;
        yr.lo = yr.hi = y;
        any_point = true;
      }
      xr.expand(x);
      yr.expand(y);
      if (i < s.errors.size()) {
        yr.expand(y - s.errors[i]);
        yr.expand(y + s.errors[i]);
      }
    }
  }
  if (spec.has_vertical_marker) xr.expand(spec.vertical_marker);
  xr.finalize();
  yr.finalize();

  const auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

  // axes
  out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(ml + pw)
      << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
      << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // ticks
  for (int t = 0; t <= 4; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
        << fmt(sx(fx)) << "\" y2=\"" << fmt(mt + ph + 4) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(mt + ph + 17)
        << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(fx)
        << "</text>\n";
    out << "<line x1=\"" << fmt(ml - 4) << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\"" << fmt(ml)
        << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << fmt(ml - 7) << "\" y=\"" << fmt(sy(fy) + 3)
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(fy)
        << "</text>\n";
  }

  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"18\" font-size=\"13\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << spec.title << "</text>\n";
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 8)
      << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << spec.x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt(mt + ph / 2)
      << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 14 "
      << fmt(mt + ph / 2) << ")\">" << spec.y_label << "</text>\n";

  if (spec.has_vertical_marker) {
    out << "<line x1=\"" << fmt(sx(spec.vertical_marker)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(sx(spec.vertical_marker)) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.points.size() && i < s.errors.size(); ++i) {
      const double x = sx(s.points[i].first);
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(sy(s.points[i].second - s.errors[i]))
          << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(sy(s.points[i].second + s.errors[i]))
          << "\" stroke=\"" << s.color << "\" stroke-width=\"1\"/>\n";
    }
    if (s.draw_line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) out << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
      out << "\"/>\n";
    }
    if (s.draw_markers) {
      for (const auto& [x, y] : s.points) {
        out << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
            << "\" r=\"2.2\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  // legend
  double ly = mt + 6;
  for (const auto& s : spec.series) {
    if (s.label.empty()) continue;
    out << "<line x1=\"" << fmt(ml + pw - 110) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(ml + pw - 92) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(ml + pw - 88) << "\" y=\"" << fmt(ly + 3)
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    ly += 14;
  }

  out << "</svg>\n";
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field(const std::string& s, int line_no) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io,
                "results CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> plot_results_csv(const std::string& csv_text) {
  std::istringstream ss(csv_text);
  std::string line;
  if (!std::getline(ss, line))
    throw Error(ErrorCode::Io, "results CSV line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "domain,speed,algorithm,trial,predicted,truth,error,flags")
    throw Error(ErrorCode::Io, "results CSV line 1: unexpected header '" + line + "'");

  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw Error(ErrorCode::Io, "results CSV line " + std::to_string(line_no) +
                                     ": expected 8 fields, got " + std::to_string(fields.size()));
    ResultRow r;
    r.domain = fields[0];
    r.speed = parse_field(fields[1], line_no);
    r.algorithm = fields[2];
    r.trial = static_cast<int>(parse_field(fields[3], line_no));
    r.predicted = parse_field(fields[4], line_no);
    r.truth = parse_field(fields[5], line_no);
    r.error = parse_field(fields[6], line_no);
    r.flags = fields[7];
    r.ok = std::isfinite(r.predicted);
    rows.push_back(std::move(r));
  }

  std::vector<std::pair<std::string, std::string>> files;
  if (rows.empty()) {
    PlotSpec bias{"absolute bias", "speed", "|bias|", {}, 0.0, false};
    PlotSpec mse{"mean squared error", "speed", "MSE", {}, 0.0, false};
    files.emplace_back("bias_all.svg", render_panel(bias));
    files.emplace_back("mse_all.svg", render_panel(mse));
    return files;
  }

  const std::vector<AggregateRow> aggregates = aggregate_rows(rows);
  std::set<std::string> domains;
  std::vector<std::string> algo_order;
  for (const auto& a : aggregates) {
    domains.insert(a.domain);
    if (std::find(algo_order.begin(), algo_order.end(), a.algorithm) == algo_order.end())
      algo_order.push_back(a.algorithm);
  }

  for (const auto& domain : domains) {
    PlotSpec bias{"absolute bias: " + domain, "speed", "|bias|", {}, 0.0, false};
    PlotSpec mse{"mean squared error: " + domain, "speed", "MSE", {}, 0.0, false};
    int color_idx = 0;
    for (const auto& algo : algo_order) {
      PlotSeries sb, sm;
      sb.label = sm.label = algo;
      sb.color = sm.color = kPalette[color_idx % 8];
      ++color_idx;
      for (const auto& a : aggregates) {
        if (a.domain != domain || a.algorithm != algo || a.n_ok == 0) continue;
        sb.points.emplace_back(a.speed, a.abs_bias);
        sb.errors.push_back(a.se_bias);
        sm.points.emplace_back(a.speed, a.mse);
        sm.errors.push_back(a.se_mse);
      }
      if (!sb.points.empty()) {
        bias.series.push_back(std::move(sb));
        mse.series.push_back(std::move(sm));
      }
    }
    files.emplace_back("bias_" + domain + ".svg", render_panel(bias));
    files.emplace_back("mse_" + domain + ".svg", render_panel(mse));
  }
  return files;
}

}  // namespace openns
