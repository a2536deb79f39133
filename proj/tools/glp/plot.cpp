#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "capi.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "store.hpp"

namespace glpcli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSummaryHeader = {"experiment_id", "d",      "family", "params",  "n",       "m",
                                                 "replicas",      "mean",   "stderr", "ci_low",  "ci_high", "exact_fraction"};

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Point {
  double x;
  double y;
  double lo;
  double hi;
  double extra_lo;  // lower end of a secondary bar; equals lo when absent
};

struct Series {
  std::string label;
  std::vector<Point> points;
};

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::fabs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

std::string svg_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, const std::string& footnote) {
  const double W = 640, H = 420, L = 70, R = 150, T = 40, B = 60;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min({ymin, p.lo, p.extra_lo, p.y});
      ymax = std::max({ymax, p.hi, p.y});
    }
  }
  if (xmin == xmax) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax - ymin < 1e-9) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.08 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  const double xpad = 0.05 * (xmax - xmin);
  xmin -= xpad;
  xmax += xpad;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double t : ticks(xmin, xmax)) {
    o << "<line x1=\"" << sx(t) << "\" y1=\"" << H - B << "\" x2=\"" << sx(t) << "\" y2=\"" << H - B + 5
      << "\" stroke=\"#444\"/>\n";
    o << "<text x=\"" << sx(t) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : ticks(ymin, ymax)) {
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << W - R << "\" y2=\"" << sy(t)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << L - 8 << "\" y=\"" << sy(t) + 4 << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  o << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (const auto& p : s.points) pts += fmt(sx(p.x)) + "," + fmt(sy(p.y)) + " ";
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    for (const auto& p : s.points) {
      if (p.extra_lo < p.lo) {
        o << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.extra_lo) << "\" x2=\"" << sx(p.x) << "\" y2=\""
          << sy(p.lo) << "\" stroke=\"" << color << "\" stroke-dasharray=\"3,3\" opacity=\"0.6\"/>\n";
      }
      o << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.lo) << "\" x2=\"" << sx(p.x) << "\" y2=\"" << sy(p.hi)
        << "\" stroke=\"" << color << "\"/>\n";
      o << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = T + 14 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 32 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
  }
  if (!footnote.empty()) {
    o << "<text x=\"" << L << "\" y=\"" << H - 4 << "\" font-size=\"10\" fill=\"#555\">" << footnote << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

int run_plot(const Common& common, std::ostream& out) {
  const fs::path root(common.out);
  const fs::path results = root / "results";
  std::vector<fs::path> summaries;
  if (fs::is_directory(results)) {
    for (const auto& e : fs::directory_iterator(results)) {
      if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
      const CsvTable t = read_csv(e.path());
      if (t.header == kSummaryHeader && !t.rows.empty()) summaries.push_back(e.path());
    }
  }
  if (summaries.empty()) {
    throw std::runtime_error("no estimate results under " + results.string() + "; run 'glp estimate' first");
  }
  std::sort(summaries.begin(), summaries.end());

  // Render everything before touching the output directory.
  struct Output {
    std::string rel;
    std::string content;
    std::string input_hash;
  };
  std::vector<Output> files;
  for (const auto& path : summaries) {
    const CsvTable t = read_csv(path);
    const std::string input_hash = hex64(fnv1a64(read_file(path)));
    const std::string id = t.rows.front()[0];
    std::string dist = t.rows.front()[2] + ":" + t.rows.front()[3];
    std::replace(dist.begin(), dist.end(), ';', ',');
    const std::string where = path.string();

    std::map<double, std::vector<glp_estimate_row>> by_m;
    std::vector<glp_estimate_row> all;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const std::string at = where + ":" + std::to_string(t.lines[i]);
      glp_estimate_row row{};
      row.n = static_cast<int>(parse_number(r[4], at));
      row.m = parse_number(r[5], at);
      row.replicas = static_cast<std::uint64_t>(parse_number(r[6], at));
      row.mean = parse_number(r[7], at);
      row.stderr_ = parse_number(r[8], at);
      row.ci_low = parse_number(r[9], at);
      row.ci_high = parse_number(r[10], at);
      row.exact_fraction = parse_number(r[11], at);
      by_m[row.m].push_back(row);
      all.push_back(row);
    }

    std::vector<Series> growth;
    std::string tidy = csv_line({"experiment_id", "m", "n", "mean", "ci_low", "ci_high"});
    for (auto& [m, rows] : by_m) {
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
      Series s{std::isinf(m) ? "m = inf" : "m = " + fmt(m), {}};
      for (const auto& r : rows) {
        s.points.push_back({static_cast<double>(r.n), r.mean, r.ci_low, r.ci_high, r.ci_low});
        tidy += csv_line({id, format_number(m), std::to_string(r.n), format_number(r.mean), format_number(r.ci_low),
                          format_number(r.ci_high)});
      }
      growth.push_back(std::move(s));
    }
    files.push_back({"plots/" + id + ".mn.svg",
                     svg_chart("M_n / n vs n (" + dist + ")", "n", "mean of M_n / n", growth,
                               "bars: 95% normal intervals"),
                     input_hash});
    files.push_back({"plots/" + id + ".mn.csv", tidy, input_hash});

    char* raw = nullptr;
    check(glp_limit_estimate(dist.c_str(), all.data(), all.size(), 0.0, &raw));
    const auto limit = nlohmann::json::parse(take_string(raw));
    Series curve{"estimate", {}};
    std::string limit_csv = csv_line({"experiment_id", "m", "estimate", "halfwidth", "bias_bar"});
    for (const auto& e : limit["per_m"]) {
      if (e["m"].is_string()) continue;
      const double m = e["m"].get<double>();
      const double est = e["estimate"].get<double>();
      const double hw = e["halfwidth"].get<double>();
      double overshoot = INFINITY;
      if (glp_overshoot_mean(dist.c_str(), m, &overshoot) != GLP_OK) overshoot = INFINITY;
      const double bias = 4.0 * overshoot;
      curve.points.push_back({m, est, est - hw, est + hw, std::isfinite(bias) ? est - hw - bias : est - hw});
      limit_csv += csv_line({id, format_number(m), format_number(est), format_number(hw), format_number(bias)});
    }
    if (!curve.points.empty()) {
      files.push_back({"plots/" + id + ".limit.svg",
                       svg_chart("truncated constants vs m (" + dist + ")", "m", "estimate at largest n", {curve},
                                 "solid: z*stderr + drift; dashed: 4 E(-m-X)1[X&lt;=-m] truncation bias"),
                       input_hash});
      files.push_back({"plots/" + id + ".limit.csv", limit_csv, input_hash});
    }
  }

  Manifest manifest(root);
  for (const auto& f : files) {
    const fs::path p = root / f.rel;
    if (!(fs::exists(p) && read_file(p) == f.content)) write_file_atomic(p, f.content);
    manifest.record(f.rel, {{"kind", "plot"}, {"config_hash", f.input_hash}, {"complete", true}});
    out << "wrote " << p.string() << "\n";
  }
  manifest.save();
  return 0;
}

}  // namespace glpcli
