#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dfax/io.hpp"

namespace dfax::io {

namespace {

std::string fixed(double v, int decimals) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, v);
  return buffer;
}

std::string full(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void emit_curve_plot(const std::vector<NamedCurve>& curves, const std::string& path) {
  if (curves.empty()) throw InvalidParameter("plot needs at least one curve");
  for (const auto& named : curves)
    if (named.curve.xs.size() != named.curve.ys.size() || named.curve.xs.size() < 2)
      throw InvalidData("curve '" + named.label + "' is malformed");

  // Fixed 640x480 canvas, [0,1]^2 data axes.
  const double left = 60, right = 620, top = 20, bottom = 430;
  const auto px = [&](double x) { return left + x * (right - left); };
  const auto py = [&](double y) { return bottom - y * (bottom - top); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";

  // Grid and tick labels every 0.25.
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = tick * 0.25;
    out << "<line x1=\"" << fixed(px(t), 2) << "\" y1=\"" << fixed(py(0), 2) << "\" x2=\""
        << fixed(px(t), 2) << "\" y2=\"" << fixed(py(1), 2)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fixed(px(0), 2) << "\" y1=\"" << fixed(py(t), 2) << "\" x2=\""
        << fixed(px(1), 2) << "\" y2=\"" << fixed(py(t), 2)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fixed(px(t), 2) << "\" y=\"" << fixed(py(0) + 18, 2)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fixed(t, 2) << "</text>\n";
    out << "<text x=\"" << fixed(px(0) - 8, 2) << "\" y=\"" << fixed(py(t) + 4, 2)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fixed(t, 2) << "</text>\n";
  }
  out << "<line x1=\"" << fixed(px(0), 2) << "\" y1=\"" << fixed(py(0), 2) << "\" x2=\""
      << fixed(px(1), 2) << "\" y2=\"" << fixed(py(0), 2)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<line x1=\"" << fixed(px(0), 2) << "\" y1=\"" << fixed(py(0), 2) << "\" x2=\""
      << fixed(px(0), 2) << "\" y2=\"" << fixed(py(1), 2)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<text x=\"" << fixed((px(0) + px(1)) / 2, 2) << "\" y=\"466\" font-size=\"13\" "
         "text-anchor=\"middle\">fraction of features</text>\n";
  out << "<text x=\"16\" y=\"" << fixed((py(0) + py(1)) / 2, 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fixed((py(0) + py(1)) / 2, 2) << ")\">target-class probability</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c].curve;
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (Index i = 0; i < curve.xs.size(); ++i) {
      if (i) out << ' ';
      out << fixed(px(curve.xs[i]), 2) << ',' << fixed(py(curve.ys[i]), 2);
    }
    out << "\"/>\n";
    out << "<text x=\"" << fixed(px(0) + 10, 2) << "\" y=\"" << fixed(top + 16 + 16 * c, 2)
        << "\" font-size=\"12\" fill=\"" << color << "\">" << escape_xml(curves[c].label)
        << " (AUC=" << fixed(curve.auc(), 3) << ")</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing " + path);
}

void save_report_tsv(const std::string& path, const eval::BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "# dfax-benchmark v1\n";
  for (std::size_t mi = 0; mi < report.method_names.size(); ++mi)
    for (std::size_t di = 0; di < report.dataset_names.size(); ++di) {
      const auto& cell = report.cell(mi, di);
      if (!cell.ok)
        out << "# error\t" << report.method_names[mi] << '\t' << report.dataset_names[di]
            << '\t' << cell.error << '\n';
    }

  const auto matrix_block = [&](const char* metric, auto score_of) {
    for (std::size_t di = 0; di < report.dataset_names.size(); ++di) {
      out << metric << '\t' << report.dataset_names[di];
      for (std::size_t mi = 0; mi < report.method_names.size(); ++mi) {
        const auto& cell = report.cell(mi, di);
        out << '\t' << (cell.ok ? full(score_of(cell)) : "nan");
      }
      out << '\n';
    }
  };

  out << "metric\tdataset";
  for (const auto& name : report.method_names) out << '\t' << name;
  out << '\n';
  matrix_block("deletion", [](const eval::BenchmarkCell& c) { return c.deletion_mean; });
  matrix_block("insertion", [](const eval::BenchmarkCell& c) { return c.insertion_mean; });

  const auto summary_row = [&](const char* metric, const char* tag,
                               const std::vector<double>& values) {
    out << metric << '\t' << tag;
    for (double v : values) out << '\t' << (std::isnan(v) ? std::string("nan") : full(v));
    out << '\n';
  };
  summary_row("deletion", "AVERAGE", report.deletion_avg);
  summary_row("deletion", "AVG_RANK", report.deletion_avg_rank);
  summary_row("insertion", "AVERAGE", report.insertion_avg);
  summary_row("insertion", "AVG_RANK", report.insertion_avg_rank);

  out << "flag\tBELOW_RANDOM";
  for (std::uint8_t flag : report.below_random) out << '\t' << (flag ? 1 : 0);
  out << '\n';
  out << "flag\tEXTERNAL";
  for (std::uint8_t flag : report.method_external) out << '\t' << (flag ? 1 : 0);
  out << '\n';
  out << "flag\tSUPPORTED";
  for (std::uint8_t flag : report.method_supported) out << '\t' << (flag ? 1 : 0);
  out << '\n';
  if (!out) throw IoError("failed writing " + path);
}

void save_report_json(const std::string& path, const eval::BenchmarkReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "dfax-benchmark";
  doc["version"] = 1;
  doc["methods"] = report.method_names;
  doc["datasets"] = report.dataset_names;

  nlohmann::ordered_json scores = nlohmann::ordered_json::object();
  for (const char* metric : {"deletion", "insertion"}) {
    nlohmann::ordered_json per_dataset = nlohmann::ordered_json::object();
    for (std::size_t di = 0; di < report.dataset_names.size(); ++di) {
      nlohmann::ordered_json row = nlohmann::ordered_json::object();
      for (std::size_t mi = 0; mi < report.method_names.size(); ++mi) {
        const auto& cell = report.cell(mi, di);
        if (cell.ok)
          row[report.method_names[mi]] = std::string(metric) == "deletion"
                                             ? cell.deletion_mean
                                             : cell.insertion_mean;
        else
          row[report.method_names[mi]] = nullptr;
      }
      per_dataset[report.dataset_names[di]] = std::move(row);
    }
    scores[metric] = std::move(per_dataset);
  }
  doc["scores"] = std::move(scores);

  const auto number_list = [](const std::vector<double>& values) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (double v : values) {
      if (std::isnan(v))
        list.push_back(nullptr);
      else
        list.push_back(v);
    }
    return list;
  };
  doc["deletion_average"] = number_list(report.deletion_avg);
  doc["insertion_average"] = number_list(report.insertion_avg);
  doc["deletion_avg_rank"] = number_list(report.deletion_avg_rank);
  doc["insertion_avg_rank"] = number_list(report.insertion_avg_rank);
  doc["below_random"] = report.below_random;
  doc["external"] = report.method_external;
  doc["distribution_supported"] = report.method_supported;

  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (std::size_t mi = 0; mi < report.method_names.size(); ++mi)
    for (std::size_t di = 0; di < report.dataset_names.size(); ++di) {
      const auto& cell = report.cell(mi, di);
      if (!cell.ok)
        errors.push_back({{"method", report.method_names[mi]},
                          {"dataset", report.dataset_names[di]},
                          {"error", cell.error}});
    }
  doc["errors"] = std::move(errors);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

void save_timings_tsv(const std::string& path, const eval::BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "dataset\tmethod\tfit_seconds\tseconds_per_attribution\n";
  for (std::size_t di = 0; di < report.dataset_names.size(); ++di)
    for (std::size_t mi = 0; mi < report.method_names.size(); ++mi) {
      const auto& cell = report.cell(mi, di);
      out << report.dataset_names[di] << '\t' << report.method_names[mi] << '\t'
          << (cell.ok ? full(cell.fit_seconds) : "nan") << '\t'
          << (cell.ok ? full(cell.seconds_per_attribution) : "nan") << '\n';
    }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace dfax::io
