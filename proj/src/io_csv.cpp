#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "dfax/io.hpp"

namespace dfax::io {

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t begin = 0;
  while (begin < s.size() && is_space(static_cast<unsigned char>(s[begin]))) ++begin;
  return s.substr(begin);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = line.find(delim, begin);
    if (end == std::string::npos) {
      cells.push_back(line.substr(begin));
      return cells;
    }
    cells.push_back(line.substr(begin, end - begin));
    begin = end + 1;
  }
}

bool parse_double(const std::string& cell, double* out) {
  const std::string text = trim(cell);
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, *out);
  return result.ec == std::errc{} && result.ptr == end && std::isfinite(*out);
}

bool parse_int(const std::string& cell, long long* out) {
  const std::string text = trim(cell);
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, *out);
  return result.ec == std::errc{} && result.ptr == end;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

CsvData load_csv(const std::string& path, const std::string& label_column, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ParseError(path + ": file is empty");

  std::vector<std::string> header;
  std::size_t first_data_line = 0;
  if (has_header) {
    header = split(lines[0], ',');
    for (auto& h : header) h = trim(h);
    first_data_line = 1;
    if (lines.size() == 1) throw ParseError(path + ": header but no data rows");
  }
  const std::size_t columns = split(lines[first_data_line], ',').size();
  if (has_header && header.size() != columns)
    throw ParseError(path + ": line 2: expected " + std::to_string(header.size()) + " cells");

  // Resolve the label column: empty = last, integer = index, else header name.
  std::size_t label_index = columns - 1;
  if (!label_column.empty()) {
    long long parsed = 0;
    if (parse_int(label_column, &parsed)) {
      if (parsed < 0 || parsed >= static_cast<long long>(columns))
        throw ParseError(path + ": label column index " + label_column + " out of range");
      label_index = static_cast<std::size_t>(parsed);
    } else {
      if (!has_header)
        throw ParseError("label column '" + label_column + "' needs a header row");
      const auto found = std::find(header.begin(), header.end(), label_column);
      if (found == header.end())
        throw ParseError(path + ": no column named '" + label_column + "'");
      label_index = static_cast<std::size_t>(found - header.begin());
    }
  }
  if (columns < 2) throw ParseError(path + ": need at least one feature and the label column");

  const std::size_t n_rows = lines.size() - first_data_line;
  const std::size_t n_features = columns - 1;
  CsvData data;
  data.features.resize(static_cast<Index>(n_rows), static_cast<Index>(n_features));
  std::vector<std::string> raw_labels(n_rows);

  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t line_number = first_data_line + r + 1;  // 1-based for messages
    const std::vector<std::string> cells = split(lines[first_data_line + r], ',');
    if (cells.size() != columns)
      throw ParseError(path + ": line " + std::to_string(line_number) + ": expected " +
                       std::to_string(columns) + " cells, found " +
                       std::to_string(cells.size()));
    std::size_t feature = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_index) {
        raw_labels[r] = trim(cells[c]);
        continue;
      }
      double value = 0.0;
      if (!parse_double(cells[c], &value))
        throw ParseError(path + ": line " + std::to_string(line_number) + ", column " +
                         std::to_string(c + 1) + ": '" + trim(cells[c]) +
                         "' is not a finite number");
      data.features(static_cast<Index>(r), static_cast<Index>(feature++)) = value;
    }
  }

  if (has_header) {
    for (std::size_t c = 0; c < columns; ++c)
      if (c != label_index) data.feature_names.push_back(header[c]);
  } else {
    data.feature_names = Dataset::default_names(static_cast<Index>(n_features));
  }

  // Dense label mapping: numeric order when every label is an integer,
  // lexicographic otherwise. The mapping is returned for persistence.
  std::vector<std::string> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  bool all_integer = true;
  for (const auto& label : distinct) {
    long long ignored = 0;
    if (!parse_int(label, &ignored)) {
      all_integer = false;
      break;
    }
  }
  if (all_integer) {
    std::sort(distinct.begin(), distinct.end(), [](const std::string& a, const std::string& b) {
      long long va = 0, vb = 0;
      parse_int(a, &va);
      parse_int(b, &vb);
      return va < vb;
    });
  }
  std::map<std::string, int> mapping;
  for (std::size_t i = 0; i < distinct.size(); ++i)
    mapping[distinct[i]] = static_cast<int>(i);
  data.label_names = distinct;
  data.num_classes = static_cast<int>(distinct.size());
  data.labels.reserve(n_rows);
  for (const auto& label : raw_labels) data.labels.push_back(mapping[label]);
  return data;
}

void save_csv(const std::string& path, const Matrix& features,
              const std::vector<std::string>& feature_names, const std::vector<int>& labels,
              const std::string& label_name) {
  if (static_cast<Index>(labels.size()) != features.rows())
    throw DimensionMismatch("label count does not match feature rows");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (Index j = 0; j < features.cols(); ++j) out << feature_names[static_cast<std::size_t>(j)] << ',';
  out << label_name << '\n';
  for (Index i = 0; i < features.rows(); ++i) {
    for (Index j = 0; j < features.cols(); ++j) out << format_double(features(i, j)) << ',';
    out << labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::uint64_t dataset_hash(const Matrix& rows) {
  constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t hash = kOffset;
  const auto mix = [&](std::uint64_t value) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (value >> (8 * b)) & 0xFF;
      hash *= kPrime;
    }
  };
  mix(static_cast<std::uint64_t>(rows.rows()));
  mix(static_cast<std::uint64_t>(rows.cols()));
  for (Index i = 0; i < rows.rows(); ++i)
    for (Index j = 0; j < rows.cols(); ++j) {
      std::uint64_t bits = 0;
      const double value = rows(i, j);
      static_assert(sizeof(bits) == sizeof(value));
      std::memcpy(&bits, &value, sizeof(bits));
      mix(bits);
    }
  return hash;
}

namespace {

std::string hash_to_hex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::uint64_t hex_to_hash(const std::string& hex) {
  std::uint64_t value = 0;
  const auto result = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (result.ec != std::errc{} || result.ptr != hex.data() + hex.size())
    throw ParseError("bad hash field '" + hex + "'");
  return value;
}

}  // namespace

void save_attributions(const std::string& path, const AttributionFile& file,
                       const std::vector<std::string>& feature_names) {
  if (file.scores.cols() != file.header.d)
    throw DimensionMismatch("score width does not match header d");
  if (static_cast<Index>(file.ids.size()) != file.scores.rows())
    throw DimensionMismatch("id count does not match score rows");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "# dfax-attribution v1\n";
  out << "# method=" << file.header.method << '\n';
  out << "# dataset_hash=" << hash_to_hex(file.header.dataset_hash) << '\n';
  out << "# d=" << file.header.d << '\n';
  out << "# seed=" << file.header.seed << '\n';
  out << "# supported=" << (file.header.distribution_supported ? "true" : "false") << '\n';
  out << "# source=" << file.header.source << '\n';
  out << "id";
  for (Index j = 0; j < file.header.d; ++j) out << '\t' << feature_names[static_cast<std::size_t>(j)];
  out << '\n';
  for (Index i = 0; i < file.scores.rows(); ++i) {
    out << file.ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < file.scores.cols(); ++j) out << '\t' << format_double(file.scores(i, j));
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

AttributionFile load_attributions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  AttributionFile file;
  std::map<std::string, std::string> fields;
  std::vector<std::string> data_lines;
  bool saw_magic = false;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body == "dfax-attribution v1") {
        saw_magic = true;
        continue;
      }
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos) fields[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    data_lines.push_back(line);
  }
  if (!saw_magic) throw ParseError(path + ": missing attribution file marker");
  if (data_lines.empty()) throw ParseError(path + ": no column header row");

  file.header.method = fields.count("method") ? fields["method"] : "unknown";
  if (fields.count("dataset_hash")) file.header.dataset_hash = hex_to_hash(fields["dataset_hash"]);
  if (fields.count("seed")) {
    long long seed = 0;
    parse_int(fields["seed"], &seed);
    file.header.seed = static_cast<std::uint64_t>(seed);
  }
  file.header.distribution_supported =
      !fields.count("supported") || fields["supported"] == "true";
  if (fields.count("source")) file.header.source = fields["source"];

  const std::vector<std::string> columns = split(data_lines[0], '\t');
  if (columns.size() < 2 || columns[0] != "id")
    throw ParseError(path + ": column header must start with 'id'");
  file.header.d = static_cast<Index>(columns.size() - 1);
  if (fields.count("d")) {
    long long declared = 0;
    parse_int(fields["d"], &declared);
    if (declared != file.header.d)
      throw ParseError(path + ": header d=" + fields["d"] + " but " +
                       std::to_string(file.header.d) + " score columns");
  }

  const std::size_t n_rows = data_lines.size() - 1;
  file.scores.resize(static_cast<Index>(n_rows), file.header.d);
  file.ids.resize(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::vector<std::string> cells = split(data_lines[r + 1], '\t');
    if (cells.size() != columns.size())
      throw ParseError(path + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(columns.size()));
    file.ids[r] = cells[0];
    for (Index j = 0; j < file.header.d; ++j) {
      double value = 0.0;
      if (!parse_double(cells[static_cast<std::size_t>(j) + 1], &value))
        throw ParseError(path + ": row " + std::to_string(r + 1) + ": bad score cell");
      file.scores(static_cast<Index>(r), j) = value;
    }
  }
  return file;
}

void save_curves(const std::string& path, const std::vector<NamedCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "curve\tlabel\tx\ty\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    std::string label = curves[c].label;
    for (char& ch : label)
      if (ch == '\t' || ch == '\n') ch = ' ';
    const auto& curve = curves[c].curve;
    for (Index i = 0; i < curve.xs.size(); ++i)
      out << c << '\t' << label << '\t' << format_double(curve.xs[i]) << '\t'
          << format_double(curve.ys[i]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<NamedCurve> load_curves(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || trim(header) != "curve\tlabel\tx\ty")
    throw ParseError(path + ": not a curve file");

  std::vector<NamedCurve> curves;
  std::vector<std::vector<double>> xs, ys;
  long long current = -1;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, '\t');
    if (cells.size() != 4) throw ParseError(path + ": malformed curve row");
    long long index = 0;
    double x = 0.0, y = 0.0;
    if (!parse_int(cells[0], &index) || !parse_double(cells[2], &x) ||
        !parse_double(cells[3], &y))
      throw ParseError(path + ": malformed curve row");
    if (index != current) {
      if (index != current + 1) throw ParseError(path + ": curve indices must be contiguous");
      current = index;
      curves.push_back(NamedCurve{cells[1], {}});
      xs.emplace_back();
      ys.emplace_back();
    }
    xs.back().push_back(x);
    ys.back().push_back(y);
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    curves[c].curve.xs = Eigen::Map<const Vector>(xs[c].data(), static_cast<Index>(xs[c].size()));
    curves[c].curve.ys = Eigen::Map<const Vector>(ys[c].data(), static_cast<Index>(ys[c].size()));
  }
  if (curves.empty()) throw ParseError(path + ": no curves");
  return curves;
}

}  // namespace dfax::io
