#include "skewmix/io.hpp"

#include "skewmix/em.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace skewmix {
namespace {

struct Record {
  std::vector<std::string> fields;
  Index line = 0;
};

// Reads one logical record; returns false at end of input.
bool next_record(std::istream& in, char delim, Index& line, Record& rec) {
  rec.fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  bool field_was_quoted = false;
  rec.line = line + 1;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) {
        throw CsvError("quote inside an unquoted field", line + 1);
      }
      quoted = true;
      field_was_quoted = true;
    } else if (c == delim) {
      rec.fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      rec.fields.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field", rec.line);
  if (!any) return false;
  ++line;
  if (!field.empty() || field_was_quoted || !rec.fields.empty()) {
    rec.fields.push_back(std::move(field));
  }
  return true;
}

bool blank(const Record& r) {
  return r.fields.empty() || (r.fields.size() == 1 && r.fields[0].empty());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

int resolve_label_column(const std::string& spec,
                         const std::vector<std::string>& names, Index line) {
  if (spec.empty()) return -1;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == spec) return static_cast<int>(c);
  }
  int index = 0;
  const auto [ptr, ec] =
      std::from_chars(spec.data(), spec.data() + spec.size(), index);
  if (ec == std::errc() && ptr == spec.data() + spec.size() && index >= 1 &&
      index <= static_cast<int>(names.size())) {
    return index - 1;
  }
  throw CsvError("label column '" + spec + "' not found", line);
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
  Index line = 0;
  Record rec;
  std::vector<Record> rows;
  while (next_record(in, options.delimiter, line, rec)) {
    if (!blank(rec)) rows.push_back(rec);
  }
  if (rows.empty()) throw CsvError("empty file", 1);

  std::vector<std::string> names;
  std::size_t first_data = 0;
  const std::size_t width = rows.front().fields.size();
  if (options.header) {
    for (const auto& f : rows.front().fields) names.push_back(trim(f));
    first_data = 1;
  } else {
    for (std::size_t c = 0; c < width; ++c) {
      names.push_back("V" + std::to_string(c + 1));
    }
  }
  if (first_data >= rows.size()) {
    throw CsvError("no data rows", rows.front().line);
  }
  const int label_col =
      resolve_label_column(options.label_column, names, rows.front().line);

  Dataset ds;
  for (std::size_t c = 0; c < width; ++c) {
    if (static_cast<int>(c) != label_col) ds.column_names.push_back(names[c]);
  }
  const Index n = static_cast<Index>(rows.size() - first_data);
  const Index p = static_cast<Index>(ds.column_names.size());
  if (p == 0) throw CsvError("no feature columns", rows.front().line);
  ds.matrix.resize(n, p);
  std::vector<int> labels;
  std::map<std::string, int> codes;

  for (Index j = 0; j < n; ++j) {
    const Record& r = rows[first_data + static_cast<std::size_t>(j)];
    if (r.fields.size() != width) {
      throw CsvError("expected " + std::to_string(width) + " fields, found " +
                         std::to_string(r.fields.size()),
                     r.line);
    }
    Index col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) == label_col) {
        const std::string v = trim(r.fields[c]);
        if (v == options.missing_label || v.empty()) {
          labels.push_back(kUnknownLabel);
        } else {
          auto [it, fresh] =
              codes.emplace(v, static_cast<int>(ds.label_names.size()) + 1);
          if (fresh) ds.label_names.push_back(v);
          labels.push_back(it->second);
        }
        continue;
      }
      double value = 0.0;
      if (!parse_double(r.fields[c], value) || !std::isfinite(value)) {
        throw CsvError("non-numeric value '" + r.fields[c] + "' in column '" +
                           names[c] + "'",
                       r.line);
      }
      ds.matrix(j, col++) = value;
    }
  }
  if (label_col >= 0) ds.labels = std::move(labels);
  return ds;
}

Dataset ingest_csv(const std::filesystem::path& path,
                   const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_csv(in, options);
}

Dataset scale_columns(const Dataset& ds) {
  if (ds.rows() < 2) throw InputError("scaling needs at least two rows");
  Dataset out = unscale(ds);
  out.center = out.matrix.colwise().mean().transpose();
  out.matrix.rowwise() -= out.center.transpose();
  out.spread = (out.matrix.colwise().squaredNorm().transpose() /
                static_cast<double>(ds.rows() - 1))
                   .cwiseSqrt();
  for (Index c = 0; c < out.cols(); ++c) {
    if (!(out.spread(c) > 0.0)) {
      throw InputError("column '" + ds.column_names[c] +
                       "' has zero variance");
    }
  }
  out.matrix.array().rowwise() /= out.spread.transpose().array();
  out.scaled = true;
  return out;
}

Dataset unscale(const Dataset& ds) {
  Dataset out = ds;
  if (!ds.scaled) return out;
  out.matrix.array().rowwise() *= ds.spread.transpose().array();
  out.matrix.rowwise() += ds.center.transpose();
  out.scaled = false;
  out.center.resize(0);
  out.spread.resize(0);
  return out;
}

ComponentParams unscale_params(const ComponentParams& params,
                               const Dataset& scaled) {
  if (!scaled.scaled) return params;
  const auto s = scaled.spread.asDiagonal();
  ComponentParams out = params;
  out.xi = scaled.center + s * params.xi;
  out.omega = s * params.omega * s;
  out.skew = s * params.skew;
  return out;
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << "row,label\n";
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << j + 1 << ',' << labels[j] << '\n';
  }
}

}  // namespace skewmix
