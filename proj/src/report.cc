// Copyright 2026 The reidbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reidbench/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "reidbench/csv.h"
#include "reidbench/errors.h"

namespace reidbench {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

double X(double precision) {
  return kLeft + precision * (kWidth - kLeft - kRight);
}
double Y(double fraction) {
  return kHeight - kBottom - fraction * (kHeight - kTop - kBottom);
}

std::string Header(const std::string& title, const std::string& config_hash) {
  std::string s =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
      Fixed(kWidth) + "\" height=\"" + Fixed(kHeight) + "\">\n";
  s += "<!-- config_hash " + Escape(config_hash) + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + Fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"15\">" +
       Escape(title) + "</text>\n";
  return s;
}

// Frame with ticks at 0, .25, ..., 1 on both unit axes.
std::string UnitAxes(const std::string& x_label, const std::string& y_label) {
  std::string s;
  s += "<rect x=\"" + Fixed(kLeft) + "\" y=\"" + Fixed(kTop) + "\" width=\"" +
       Fixed(kWidth - kLeft - kRight) + "\" height=\"" +
       Fixed(kHeight - kTop - kBottom) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s += "<line x1=\"" + Fixed(X(v)) + "\" y1=\"" + Fixed(Y(0)) + "\" x2=\"" +
         Fixed(X(v)) + "\" y2=\"" + Fixed(Y(0) + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + Fixed(X(v)) + "\" y=\"" + Fixed(Y(0) + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         Fixed(v) + "</text>\n";
    s += "<line x1=\"" + Fixed(kLeft - 5) + "\" y1=\"" + Fixed(Y(v)) +
         "\" x2=\"" + Fixed(kLeft) + "\" y2=\"" + Fixed(Y(v)) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + Fixed(kLeft - 8) + "\" y=\"" + Fixed(Y(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         Fixed(v) + "</text>\n";
  }
  s += "<text x=\"" + Fixed((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
       Fixed(kHeight - 20) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\">" +
       Escape(x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + Fixed((kTop + kHeight - kBottom) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 18 " +
       Fixed((kTop + kHeight - kBottom) / 2) + ")\">" + Escape(y_label) +
       "</text>\n";
  return s;
}

std::string LegendEntry(int index, const std::string& color,
                        const std::string& label, bool marker) {
  const double y = kTop + 10 + 18 * index;
  const double x = kWidth - kRight + 12;
  std::string s;
  if (marker) {
    s += "<circle cx=\"" + Fixed(x + 9) + "\" cy=\"" + Fixed(y) +
         "\" r=\"4\" fill=\"" + color + "\"/>\n";
  } else {
    s += "<line x1=\"" + Fixed(x) + "\" y1=\"" + Fixed(y) + "\" x2=\"" +
         Fixed(x + 18) + "\" y2=\"" + Fixed(y) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
  }
  s += "<text x=\"" + Fixed(x + 24) + "\" y=\"" + Fixed(y + 4) +
       "\" font-family=\"sans-serif\" font-size=\"11\">" + Escape(label) +
       "</text>\n";
  return s;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

std::string UpperField(const BlockSizeBin& bin) {
  return bin.upper ? std::to_string(*bin.upper) : std::string();
}

}  // namespace

std::vector<ReferencePoint> BureauReferencePoints() {
  return {{0.75, 0.85, "reconstruction attack, all blocks"},
          {0.92, 0.17, "reconstruction attack, 10-49"},
          {0.97, 0.015, "reconstruction attack, 1-9"}};
}

CdfSeries PrecisionCdf(const PrecisionRecordSet& set, std::string label) {
  if (set.entries.empty() || set.total_population <= 0) {
    throw ValidationError("precision CDF of an empty record set");
  }
  std::map<double, std::int64_t> weight;
  for (const auto& e : set.entries) weight[e.precision()] += e.bc_gt;
  CdfSeries series;
  series.label = std::move(label);
  std::int64_t cumulative = 0;
  for (const auto& [p, w] : weight) {
    cumulative += w;
    series.points.push_back({p, static_cast<double>(cumulative) /
                                    static_cast<double>(set.total_population)});
  }
  return series;
}

double CdfAt(const CdfSeries& series, double precision) {
  double f = 0;
  for (const auto& pt : series.points) {
    if (pt.precision > precision) break;
    f = pt.cum_fraction;
  }
  return f;
}

WhiskerReport PerBinWhiskers(const PrecisionRecordSet& set,
                             const BlockSizeBins& bins) {
  std::vector<std::vector<WeightedValue>> per_bin(bins.size());
  for (const auto& e : set.entries) {
    if (auto i = bins.IndexOf(e.bc_gt)) {
      per_bin[*i].push_back(
          {e.precision(), static_cast<double>(e.bc_gt)});
    }
  }
  WhiskerReport report;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (per_bin[i].empty()) {
      report.notes.push_back("bin " + bins.bins()[i].Label() +
                             " has no records; omitted");
      continue;
    }
    BinWhiskers w;
    w.bin = bins.bins()[i];
    for (const auto& v : per_bin[i]) {
      w.population += static_cast<std::int64_t>(v.weight);
    }
    w.stats = Summarize(std::move(per_bin[i]));
    report.bins.push_back(w);
  }
  return report;
}

void WriteCdfCsv(const CdfSeries& series, const std::filesystem::path& path) {
  std::ofstream out = OpenOut(path);
  out << "precision,cum_fraction\n";
  for (const auto& pt : series.points) {
    out << FormatDouble(pt.precision) << ',' << FormatDouble(pt.cum_fraction)
        << '\n';
  }
  Finish(out, path);
}

CdfSeries ReadCdfCsv(const std::filesystem::path& path, std::string label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      SplitCsvLine(line) !=
          std::vector<std::string>{"precision", "cum_fraction"}) {
    throw SchemaError(path.string() + ": expected precision,cum_fraction");
  }
  CdfSeries series;
  series.label = std::move(label);
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    auto p = f.size() == 2 ? ParseDouble(f[0]) : std::nullopt;
    auto c = f.size() == 2 ? ParseDouble(f[1]) : std::nullopt;
    if (!p || !c) {
      throw DataError(path.string() + " row " + std::to_string(row) +
                      ": malformed CDF point");
    }
    series.points.push_back({*p, *c});
  }
  return series;
}

void WriteWhiskersCsv(const WhiskerReport& report,
                      const std::filesystem::path& path) {
  std::ofstream out = OpenOut(path);
  out << "bin_lower,bin_upper,min,q1,median,q3,max\n";
  for (const auto& b : report.bins) {
    out << b.bin.lower << ',' << UpperField(b.bin) << ','
        << FormatDouble(b.stats.min) << ',' << FormatDouble(b.stats.q1) << ','
        << FormatDouble(b.stats.median) << ',' << FormatDouble(b.stats.q3)
        << ',' << FormatDouble(b.stats.max) << '\n';
  }
  Finish(out, path);
}

void WriteCountErrorCsv(const CountErrorReport& report,
                        const std::filesystem::path& path) {
  std::ofstream out = OpenOut(path);
  out << "bin_lower,bin_upper,n,mean,sd,min,q1,median,q3,max\n";
  for (const auto& b : report.bins) {
    out << b.bin.lower << ',' << UpperField(b.bin) << ',' << b.n << ','
        << FormatDouble(b.mean) << ',' << FormatDouble(b.sd) << ','
        << FormatDouble(b.min) << ',' << FormatDouble(b.q1) << ','
        << FormatDouble(b.median) << ',' << FormatDouble(b.q3) << ','
        << FormatDouble(b.max) << '\n';
  }
  Finish(out, path);
}

std::string RenderCdfSvg(const std::vector<CdfSeries>& series,
                         const std::vector<ReferencePoint>& references,
                         const std::string& title,
                         const std::string& config_hash) {
  std::string s = Header(title, config_hash);
  s += UnitAxes("precision", "cumulative fraction of records");
  int legend = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string color = kPalette[i % std::size(kPalette)];
    std::string pts = Fixed(X(0)) + "," + Fixed(Y(0));
    double prev = 0;
    for (const auto& pt : series[i].points) {
      pts += " " + Fixed(X(pt.precision)) + "," + Fixed(Y(prev));
      pts += " " + Fixed(X(pt.precision)) + "," + Fixed(Y(pt.cum_fraction));
      prev = pt.cum_fraction;
    }
    pts += " " + Fixed(X(1)) + "," + Fixed(Y(prev));
    s += "<polyline fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    s += LegendEntry(legend++, color, series[i].label, false);
  }
  for (const auto& ref : references) {
    s += "<circle cx=\"" + Fixed(X(ref.precision)) + "\" cy=\"" +
         Fixed(Y(1 - ref.recall)) + "\" r=\"5\" fill=\"black\"><title>" +
         Escape(ref.label) + "</title></circle>\n";
  }
  if (!references.empty()) {
    s += LegendEntry(legend, "black", "reconstruction attack", true);
  }
  s += "</svg>\n";
  return s;
}

std::string RenderWhiskersSvg(const std::vector<LabeledWhiskers>& groups,
                              const std::string& title,
                              const std::string& config_hash) {
  std::vector<BlockSizeBin> bins;
  for (const auto& g : groups) {
    for (const auto& b : g.report.bins) {
      if (std::find(bins.begin(), bins.end(), b.bin) == bins.end()) {
        bins.push_back(b.bin);
      }
    }
  }
  std::sort(bins.begin(), bins.end(),
            [](const auto& a, const auto& b) { return a.lower < b.lower; });
  std::string s = Header(title, config_hash);
  const double plot_w = kWidth - kLeft - kRight;
  const double slot = bins.empty() ? plot_w : plot_w / bins.size();
  const double box_w =
      groups.empty() ? 0 : std::min(24.0, slot * 0.8 / groups.size());
  s += "<rect x=\"" + Fixed(kLeft) + "\" y=\"" + Fixed(kTop) + "\" width=\"" +
       Fixed(plot_w) + "\" height=\"" + Fixed(kHeight - kTop - kBottom) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s += "<text x=\"" + Fixed(kLeft - 8) + "\" y=\"" + Fixed(Y(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         Fixed(v) + "</text>\n";
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const double center = kLeft + slot * (b + 0.5);
    s += "<text x=\"" + Fixed(center) + "\" y=\"" + Fixed(Y(0) + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         Escape(bins[b].Label()) + "</text>\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& gb = groups[g].report.bins;
      auto it = std::find_if(gb.begin(), gb.end(),
                             [&](const auto& w) { return w.bin == bins[b]; });
      if (it == gb.end()) continue;
      const std::string color = kPalette[g % std::size(kPalette)];
      const double x =
          center + (g - (groups.size() - 1) / 2.0) * (box_w + 4) - box_w / 2;
      const auto& st = it->stats;
      const std::string mid = Fixed(x + box_w / 2);
      s += "<line x1=\"" + mid + "\" y1=\"" + Fixed(Y(st.min)) + "\" x2=\"" +
           mid + "\" y2=\"" + Fixed(Y(st.max)) + "\" stroke=\"" + color +
           "\"/>\n";
      s += "<rect x=\"" + Fixed(x) + "\" y=\"" + Fixed(Y(st.q3)) +
           "\" width=\"" + Fixed(box_w) + "\" height=\"" +
           Fixed(Y(st.q1) - Y(st.q3)) + "\" fill=\"white\" stroke=\"" + color +
           "\"/>\n";
      s += "<line x1=\"" + Fixed(x) + "\" y1=\"" + Fixed(Y(st.median)) +
           "\" x2=\"" + Fixed(x + box_w) + "\" y2=\"" + Fixed(Y(st.median)) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    s += LegendEntry(static_cast<int>(g), kPalette[g % std::size(kPalette)],
                     groups[g].label, false);
  }
  s += "<text x=\"" + Fixed((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
       Fixed(kHeight - 20) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\">block size (persons)</text>\n";
  s += "</svg>\n";
  return s;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = OpenOut(path);
  out << text;
  Finish(out, path);
}

}  // namespace reidbench
