#include "arrl/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace arrl {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double curve_value_at(const std::vector<std::pair<long, double>>& curve,
                      long step) {
  // Best-so-far is a right-continuous step function of env steps.
  double v = curve.front().second;
  for (const auto& [s, b] : curve) {
    if (s > step) break;
    v = b;
  }
  return v;
}

}  // namespace

std::vector<AggregateCurve> aggregate_runs(const std::vector<LoadedRun>& runs,
                                           int grid_points) {
  if (runs.empty()) throw MissingRuns("no runs to aggregate");
  std::map<std::string, std::vector<const LoadedRun*>> by_method;
  long max_step = 0;
  for (const auto& r : runs) {
    if (r.best_curve.empty())
      throw MissingRuns("run has no episodes: " + r.dir.string());
    by_method[r.method.tag()].push_back(&r);
    max_step = std::max(max_step, r.best_curve.back().first);
  }

  std::vector<AggregateCurve> out;
  for (const auto& [tag, group] : by_method) {
    AggregateCurve c;
    c.method = tag;
    c.gait = group.front()->method.gait ? gait_name(*group.front()->method.gait)
                                        : "-";
    for (int i = 0; i < grid_points; ++i) {
      long step = max_step * (i + 1) / grid_points;
      double sum = 0.0, lo = 1e300, hi = -1e300;
      for (const LoadedRun* r : group) {
        double v = curve_value_at(r->best_curve, step);
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      c.steps.push_back(step);
      c.mean.push_back(sum / group.size());
      c.lo.push_back(lo);
      c.hi.push_back(hi);
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateCurve>& curves) {
  std::ofstream os(path, std::ios::trunc);
  os << "method,gait,env_step,mean,lo,hi\n";
  char buf[64];
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", c.mean[i], c.lo[i],
                    c.hi[i]);
      os << c.method << ',' << c.gait << ',' << c.steps[i] << ',' << buf << '\n';
    }
  }
}

std::string render_curves_svg(const std::vector<AggregateCurve>& curves) {
  if (curves.empty()) throw MissingRuns("no curves to plot");

  std::set<std::string> gaits;
  for (const auto& c : curves)
    if (c.gait != "-") gaits.insert(c.gait);
  if (gaits.empty()) gaits.insert("-");

  const double pw = 330, ph = 240, ml = 58, mt = 36, gap = 26, mb = 52;
  int n = static_cast<int>(gaits.size());
  double width = ml + n * pw + (n - 1) * gap + 20;
  double height = mt + ph + mb + 18.0 * curves.size();

  std::map<std::string, int> color_of;
  for (const auto& c : curves)
    color_of.emplace(c.method, static_cast<int>(color_of.size()));

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int panel = 0;
  for (const std::string& gait : gaits) {
    std::vector<const AggregateCurve*> members;
    for (const auto& c : curves)
      if (c.gait == gait || c.gait == "-") members.push_back(&c);

    PanelTransform tr;
    tr.px = ml + panel * (pw + gap);
    tr.py = mt;
    tr.pw = pw;
    tr.ph = ph;
    tr.x0 = 0;
    tr.x1 = 1;
    tr.y0 = 1e300;
    tr.y1 = -1e300;
    for (const auto* c : members) {
      tr.x1 = std::max(tr.x1, static_cast<double>(c->steps.back()));
      for (std::size_t i = 0; i < c->steps.size(); ++i) {
        tr.y0 = std::min(tr.y0, c->lo[i]);
        tr.y1 = std::max(tr.y1, c->hi[i]);
      }
    }
    double pad = 0.05 * (tr.y1 - tr.y0 + 1e-9);
    tr.y0 -= pad;
    tr.y1 += pad;

    svg += "<rect x=\"" + fmt(tr.px) + "\" y=\"" + fmt(tr.py) + "\" width=\"" +
           fmt(tr.pw) + "\" height=\"" + fmt(tr.ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(tr.px + pw / 2) + "\" y=\"" + fmt(mt - 12) +
           "\" text-anchor=\"middle\" font-size=\"14\">gait: " + gait +
           "</text>\n";

    for (int tick = 0; tick <= 4; ++tick) {
      double xv = tr.x0 + (tr.x1 - tr.x0) * tick / 4.0;
      double yv = tr.y0 + (tr.y1 - tr.y0) * tick / 4.0;
      svg += "<text x=\"" + fmt(tr.x_to_px(xv)) + "\" y=\"" +
             fmt(tr.py + ph + 16) +
             "\" text-anchor=\"middle\" font-size=\"10\">" +
             std::to_string(static_cast<long>(xv)) + "</text>\n";
      svg += "<text x=\"" + fmt(tr.px - 6) + "\" y=\"" +
             fmt(tr.y_to_px(yv) + 3) +
             "\" text-anchor=\"end\" font-size=\"10\">" +
             fmt(yv) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(tr.px + pw / 2) + "\" y=\"" +
           fmt(tr.py + ph + 34) +
           "\" text-anchor=\"middle\" font-size=\"11\">env steps</text>\n";

    for (const auto* c : members) {
      const char* col = kPalette[color_of[c->method] % 8];
      // min/max band
      std::string band = "<polygon fill=\"" + std::string(col) +
                         "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < c->steps.size(); ++i)
        band += fmt(tr.x_to_px(c->steps[i])) + "," + fmt(tr.y_to_px(c->hi[i])) + " ";
      for (std::size_t i = c->steps.size(); i-- > 0;)
        band += fmt(tr.x_to_px(c->steps[i])) + "," + fmt(tr.y_to_px(c->lo[i])) + " ";
      band += "\"/>\n";
      svg += band;

      std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(col) +
                         "\" stroke-width=\"1.5\" data-method=\"" + c->method +
                         "\" data-gait=\"" + gait + "\" points=\"";
      for (std::size_t i = 0; i < c->steps.size(); ++i)
        line += fmt(tr.x_to_px(c->steps[i])) + "," +
                fmt(tr.y_to_px(c->mean[i])) + " ";
      line += "\"/>\n";
      svg += line;
    }
    ++panel;
  }

  // Legend under the panels; methods keep the per-panel color order.
  std::set<std::string> seen;
  int row = 0;
  for (const auto& c : curves) {
    if (!seen.insert(c.method).second) continue;
    double y = mt + ph + mb + 18.0 * row;
    svg += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(y - 9) +
           "\" width=\"12\" height=\"12\" fill=\"" +
           kPalette[color_of[c.method] % 8] + "\"/>\n";
    svg += "<text x=\"" + fmt(ml + 18) + "\" y=\"" + fmt(y + 1) +
           "\" font-size=\"12\">" + c.method + "</text>\n";
    ++row;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace arrl
