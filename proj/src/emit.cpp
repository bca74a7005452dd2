#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "varexp/error.hpp"
#include "varexp/harness.hpp"

namespace varexp {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::string to_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "trial,group,family,variant,seed,scale,resolution,translation,lhs,rhs,ratio,ok,error\n";
  for (const auto& t : r.rows) {
    os << t.trial << ',' << t.group << ',' << csv_field(t.family) << ','
       << csv_field(t.variant) << ',' << t.seed << ',' << fmt(t.scale) << ','
       << fmt(t.resolution) << ',' << fmt(t.translation) << ',' << fmt(t.lhs) << ','
       << fmt(t.rhs) << ',' << fmt(t.ratio) << ',' << (t.ok ? 1 : 0) << ','
       << csv_field(t.error) << '\n';
  }
  return os.str();
}

std::string to_svg(const SweepReport& r) {
  // Series per resolution: the largest ratio at each scale.
  std::map<double, std::map<double, double>> series;
  for (const auto& t : r.rows) {
    if (!t.error.empty() || !(t.ratio > 0.0) || !std::isfinite(t.ratio) || !(t.scale > 0.0)) {
      continue;
    }
    auto& s = series[t.resolution];
    auto it = s.find(t.scale);
    if (it == s.end()) {
      s.emplace(t.scale, t.ratio);
    } else {
      it->second = std::max(it->second, t.ratio);
    }
  }
  const double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
  double x0 = 1, x1 = 1, y0 = 1, y1 = 1;
  bool first = true;
  for (const auto& [res, pts] : series) {
    for (const auto& [x, y] : pts) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  // Log axes, padded so that a single value still gets a visible range.
  const double lx0 = std::log10(x0) - 0.15, lx1 = std::log10(x1) + 0.15;
  const double ly0 = std::log10(y0) - 0.15, ly1 = std::log10(y1) + 0.15;
  auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << xml_escape(r.scenario.name)
     << " (" << xml_escape(r.scenario.check) << ")</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\">scale (log)</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\" text-anchor=\"middle\">ratio (log)</text>\n";
  if (!first) {
    os << "<text x=\"" << px(x0) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << short_fmt(x0) << "</text>\n";
    if (x1 != x0) {
      os << "<text x=\"" << px(x1) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
         << short_fmt(x1) << "</text>\n";
    }
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(y0) + 4 << "\" text-anchor=\"end\">"
       << short_fmt(y0) << "</text>\n";
    if (y1 != y0) {
      os << "<text x=\"" << L - 6 << "\" y=\"" << py(y1) + 4 << "\" text-anchor=\"end\">"
         << short_fmt(y1) << "</text>\n";
    }
  }
  std::size_t k = 0;
  for (const auto& [res, pts] : series) {
    const char* c = colors[k % (sizeof colors / sizeof colors[0])];
    os << "<g class=\"series\" data-resolution=\"" << fmt(res) << "\">\n";
    if (pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
      for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
      os << "\"/>\n";
    }
    for (const auto& [x, y] : pts) {
      os << "<circle class=\"point\" cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
         << c << "\"/>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (k + 1) << "\" fill=\"" << c
       << "\">h=" << short_fmt(res) << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> emit(const SweepReport& r, const std::filesystem::path& dir,
                                        const std::set<std::string>& formats) {
  for (const auto& f : formats) {
    if (f != "json" && f != "csv" && f != "svg") throw Error("unknown output format '" + f + "'");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  const std::string stem = r.scenario.name.empty() ? "report" : r.scenario.name;
  if (formats.count("json")) {
    written.push_back(dir / (stem + ".json"));
    write_text(written.back(), to_json(r).dump(2) + "\n");
  }
  if (formats.count("csv")) {
    written.push_back(dir / (stem + ".csv"));
    write_text(written.back(), to_csv(r));
  }
  if (formats.count("svg")) {
    written.push_back(dir / (stem + ".svg"));
    write_text(written.back(), to_svg(r));
  }
  return written;
}

}  // namespace varexp
