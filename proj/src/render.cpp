#include <cstdio>
#include <string>

#include "json.hpp"
#include "pulsemine/analytics.hpp"

namespace pulsemine {

namespace {

using nlohmann::ordered_json;

constexpr std::array<const char*, kNumLabels> kLabelKeys = {"positive", "negative", "neutral"};
constexpr std::array<const char*, kNumLabels> kLabelColors = {"#2ca02c", "#d62728", "#7f7f7f"};

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string date_label(Instant t, Bucket b) {
  const std::string iso = format_iso8601(t);
  return b == Bucket::day ? iso.substr(0, 10) : iso.substr(0, 13) + "h";
}

// Chart frame shared by both chart kinds.
constexpr double kWidth = 640, kHeight = 360, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;

std::string svg_open(std::string_view title) {
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
      "viewBox=\"0 0 640 360\" font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"640\" height=\"360\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) +
       "</text>\n";
  return s;
}

std::string svg_axes(double y_max, int ticks, std::string_view unit) {
  std::string s;
  for (int i = 0; i <= ticks; ++i) {
    const double v = y_max * i / ticks;
    const double y = kTop + kPlotH - kPlotH * i / ticks;
    s += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(y, 2) + "\" x2=\"" +
         fixed(kLeft + kPlotW, 2) + "\" y2=\"" + fixed(y, 2) + "\" stroke=\"#e0e0e0\"/>\n";
    s += "<text x=\"" + fixed(kLeft - 6, 2) + "\" y=\"" + fixed(y + 4, 2) +
         "\" text-anchor=\"end\">" + fixed(v, 0) + std::string(unit) + "</text>\n";
  }
  s += "<line x1=\"60.00\" y1=\"" + fixed(kTop + kPlotH, 2) + "\" x2=\"" + fixed(kLeft + kPlotW, 2) +
       "\" y2=\"" + fixed(kTop + kPlotH, 2) + "\" stroke=\"#000000\"/>\n";
  s += "<line x1=\"60.00\" y1=\"" + fixed(kTop, 2) + "\" x2=\"60.00\" y2=\"" +
       fixed(kTop + kPlotH, 2) + "\" stroke=\"#000000\"/>\n";
  return s;
}

std::string x_label(double x, std::string_view text) {
  return "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(kTop + kPlotH + 18, 2) +
         "\" text-anchor=\"middle\">" + xml_escape(text) + "</text>\n";
}

double nice_ceiling(double v) {
  if (v <= 0) return 1;
  double step = 1;
  while (step * 10 <= v) step *= 10;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * step >= v) return m * step;
  }
  return 10 * step;
}

std::string volume_svg(const VolumeSeries& s) {
  std::string out = svg_open("Documents per " + std::string(bucket_name(s.bucket)) +
                             " for entity \"" + s.entity_id + "\"");
  std::uint64_t peak = 0;
  for (const auto& p : s.points) peak = std::max(peak, p.count);
  const double y_max = nice_ceiling(static_cast<double>(peak));
  out += svg_axes(y_max, 5, "");
  const std::size_t n = s.points.size();
  std::string poly;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kLeft + kPlotW * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double y = kTop + kPlotH - kPlotH * static_cast<double>(s.points[i].count) / y_max;
    if (!poly.empty()) poly += ' ';
    poly += fixed(x, 2) + "," + fixed(y, 2);
    out += "<circle cx=\"" + fixed(x, 2) + "\" cy=\"" + fixed(y, 2) +
           "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    out += "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y - 8, 2) +
           "\" text-anchor=\"middle\">" + std::to_string(s.points[i].count) + "</text>\n";
    out += x_label(x, date_label(s.points[i].bucket_start, s.bucket));
  }
  if (n > 0) {
    out += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string shares_svg(const std::vector<PolarityShare>& rows) {
  std::string out = svg_open("Share of documents per polarity");
  out += svg_axes(100.0, 5, "%");
  const std::size_t n = rows.size();
  const double group_w = n > 0 ? kPlotW / static_cast<double>(n) : kPlotW;
  const double bar_w = group_w * 0.8 / kNumLabels;
  for (std::size_t g = 0; g < n; ++g) {
    const double x0 = kLeft + group_w * static_cast<double>(g) + group_w * 0.1;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const double h = kPlotH * rows[g].pct[k] / 100.0;
      const double x = x0 + bar_w * static_cast<double>(k);
      const double y = kTop + kPlotH - h;
      out += "<rect x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) + "\" width=\"" +
             fixed(bar_w - 2, 2) + "\" height=\"" + fixed(h, 2) + "\" fill=\"" + kLabelColors[k] +
             "\"/>\n";
      out += "<text x=\"" + fixed(x + (bar_w - 2) / 2, 2) + "\" y=\"" + fixed(y - 4, 2) +
             "\" text-anchor=\"middle\">" + fixed(rows[g].pct[k], 1) + "%</text>\n";
    }
    const std::string from = format_iso8601(rows[g].window.from);
    out += x_label(x0 + bar_w * 1.5, from.substr(0, 10));
  }
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    const double x = kLeft + 10 + 100 * static_cast<double>(k);
    out += "<rect x=\"" + fixed(x, 2) + "\" y=\"335.00\" width=\"10.00\" height=\"10.00\" fill=\"" +
           kLabelColors[k] + "\"/>\n";
    out += "<text x=\"" + fixed(x + 14, 2) + "\" y=\"344.00\">" + kLabelKeys[k] + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string shares_csv(const std::vector<PolarityShare>& rows) {
  std::string out = "window_from,window_to,total,positive_pct,negative_pct,neutral_pct\n";
  for (const auto& r : rows) {
    out += format_iso8601(r.window.from) + "," + format_iso8601(r.window.to) + "," +
           std::to_string(r.total);
    for (double p : r.pct) out += "," + fixed(p, 3);
    out += "\n";
  }
  return out;
}

ordered_json share_json(const PolarityShare& s, bool with_window) {
  ordered_json j;
  if (with_window) {
    j["window_from"] = format_iso8601(s.window.from);
    j["window_to"] = format_iso8601(s.window.to);
  }
  j["total"] = s.total;
  j["positive_pct"] = s.pct[0];
  j["negative_pct"] = s.pct[1];
  j["neutral_pct"] = s.pct[2];
  return j;
}

ordered_json label_object(const auto& values) {
  ordered_json j;
  for (std::size_t k = 0; k < kNumLabels; ++k) j[kLabelKeys[k]] = values[k];
  return j;
}

[[noreturn]] void unsupported(std::string_view report, std::string_view format) {
  throw ConfigError("no " + std::string(format) + " renderer for " + std::string(report) +
                    " reports");
}

struct Renderer {
  Format format;

  std::string operator()(const VolumeSeries& s) const {
    if (format == Format::csv) {
      std::string out = "bucket_start,count\n";
      for (const auto& p : s.points) {
        out += format_iso8601(p.bucket_start) + "," + std::to_string(p.count) + "\n";
      }
      return out;
    }
    if (format == Format::json) {
      ordered_json j;
      j["entity"] = s.entity_id;
      j["bucket"] = bucket_name(s.bucket);
      j["points"] = ordered_json::array();
      for (const auto& p : s.points) {
        j["points"].push_back({{"bucket_start", format_iso8601(p.bucket_start)}, {"count", p.count}});
      }
      return j.dump(2) + "\n";
    }
    return volume_svg(s);
  }

  std::string operator()(const PolarityShare& s) const {
    if (format == Format::csv) return shares_csv({s});
    if (format == Format::json) return share_json(s, false).dump(2) + "\n";
    return shares_svg({s});
  }

  std::string operator()(const ShareTable& t) const {
    if (format == Format::csv) return shares_csv(t.rows);
    if (format == Format::json) {
      ordered_json j;
      j["windows"] = ordered_json::array();
      for (const auto& r : t.rows) j["windows"].push_back(share_json(r, true));
      return j.dump(2) + "\n";
    }
    return shares_svg(t.rows);
  }

  std::string operator()(const DeltaReport& d) const {
    if (format == Format::json) {
      ordered_json j;
      j["exact"] = label_object(d.exact);
      j["rounded"] = label_object(d.rounded);
      return j.dump(2) + "\n";
    }
    if (format == Format::csv) {
      std::string out = "polarity,exact_pp,rounded_pp\n";
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        out += std::string(kLabelKeys[k]) + "," + fixed(d.exact[k], 3) + "," +
               std::to_string(d.rounded[k]) + "\n";
      }
      return out;
    }
    unsupported("delta", "svg");
  }

  std::string operator()(const AspectReport& r) const {
    if (format == Format::csv) {
      std::string out = "term,mentions,positive,negative,neutral\n";
      for (const auto& row : r.rows) {
        out += row.term + "," + std::to_string(row.mentions);
        for (auto c : row.by_polarity) out += "," + std::to_string(c);
        out += "\n";
      }
      return out;
    }
    if (format == Format::json) {
      ordered_json j;
      j["aspects"] = ordered_json::array();
      for (const auto& row : r.rows) {
        ordered_json item;
        item["term"] = row.term;
        item["mentions"] = row.mentions;
        item["by_polarity"] = label_object(row.by_polarity);
        j["aspects"].push_back(std::move(item));
      }
      return j.dump(2) + "\n";
    }
    unsupported("aspect", "svg");
  }
};

}  // namespace

std::string render_report(const Report& report, Format format) {
  return std::visit(Renderer{format}, report);
}

}  // namespace pulsemine
