#include "gio/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gio/error.hpp"

namespace gio {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line << ": ";
  return os.str();
}

double parse_component(std::string_view text, std::string_view source, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(where(source, line) + "cannot parse '" + std::string(text) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw DataError(where(source, line) + "non-finite component '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

DataFormat parse_data_format(std::string_view name) {
  if (name == "vectors-csv") return DataFormat::VectorsCsv;
  if (name == "tabular-tsv") return DataFormat::TabularTsv;
  throw ConfigError("unknown data format '" + std::string(name) + "' (expected vectors-csv or tabular-tsv)");
}

std::string_view to_string(DataFormat format) {
  return format == DataFormat::VectorsCsv ? "vectors-csv" : "tabular-tsv";
}

VectorDataset::VectorDataset(std::size_t dim, std::vector<double> values, Metadata metadata)
    : dim_(dim), values_(std::move(values)), meta_(std::move(metadata)) {
  if (dim_ == 0 && !values_.empty()) throw DataError("dataset with points must have dim >= 1");
  if (dim_ != 0 && values_.size() % dim_ != 0) throw DataError("value count is not a multiple of dim");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("non-finite component in point " + std::to_string(i / dim_));
    }
  }
  const std::size_t n = size();
  auto check = [n](const std::vector<std::string>& v, const char* what) {
    if (!v.empty() && v.size() != n) {
      throw DataError(std::string(what) + " count " + std::to_string(v.size()) + " does not match point count " +
                      std::to_string(n));
    }
  };
  check(meta_.ids, "id");
  check(meta_.payloads, "payload");
  check(meta_.source_rows, "source row");
}

VectorDataset VectorDataset::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw DataError("row " + std::to_string(i) + " has inconsistent dimension");
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return VectorDataset(dim, std::move(values));
}

std::string VectorDataset::id(std::size_t i) const {
  if (has_ids()) return meta_.ids.at(i);
  return std::to_string(i);
}

VectorDataset VectorDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * dim_);
  Metadata meta;
  for (const std::size_t i : indices) {
    if (i >= size()) throw DataError("subset index " + std::to_string(i) + " out of range");
    const auto p = point(i);
    values.insert(values.end(), p.begin(), p.end());
    if (has_ids()) meta.ids.push_back(meta_.ids[i]);
    if (has_payloads()) meta.payloads.push_back(meta_.payloads[i]);
    if (has_source_rows()) meta.source_rows.push_back(meta_.source_rows[i]);
  }
  return VectorDataset(dim_, std::move(values), std::move(meta));
}

VectorDataset VectorDataset::concat(const VectorDataset& a, const VectorDataset& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.dim() != b.dim()) {
    throw DataError("cannot concatenate datasets of dim " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
  std::vector<double> values(a.values_);
  values.insert(values.end(), b.values_.begin(), b.values_.end());
  Metadata meta;
  auto join = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
    std::vector<std::string> out;
    if (!x.empty() && !y.empty()) {
      out = x;
      out.insert(out.end(), y.begin(), y.end());
    }
    return out;
  };
  meta.ids = join(a.meta_.ids, b.meta_.ids);
  meta.payloads = join(a.meta_.payloads, b.meta_.payloads);
  meta.source_rows = join(a.meta_.source_rows, b.meta_.source_rows);
  return VectorDataset(a.dim(), std::move(values), std::move(meta));
}

Vector VectorDataset::mean() const {
  Vector m(dim_, 0.0);
  const std::size_t n = size();
  if (n == 0) return m;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = point(i);
    for (std::size_t j = 0; j < dim_; ++j) m[j] += p[j];
  }
  for (auto& x : m) x /= static_cast<double>(n);
  return m;
}

VectorDataset parse_dataset(std::istream& in, DataFormat format, std::string_view source_name) {
  std::size_t dim = 0;
  std::vector<double> values;
  VectorDataset::Metadata meta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<double> row;
    if (format == DataFormat::VectorsCsv) {
      for (const auto field : split(line, ',')) row.push_back(parse_component(field, source_name, line_no));
    } else {
      const auto cols = split(line, '\t');
      if (cols.size() < 2) {
        throw DataError(where(source_name, line_no) + "expected at least 2 tab-separated columns, found " +
                        std::to_string(cols.size()));
      }
      std::istringstream vec{std::string(cols.back())};
      std::string tok;
      while (vec >> tok) row.push_back(parse_component(tok, source_name, line_no));
      std::string payload;
      for (std::size_t c = 1; c + 1 < cols.size(); ++c) {
        if (c > 1) payload.push_back('\t');
        payload.append(cols[c]);
      }
      meta.ids.emplace_back(cols.front());
      meta.payloads.push_back(std::move(payload));
    }
    if (row.empty()) throw DataError(where(source_name, line_no) + "row has no vector components");
    if (dim == 0) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw DataError(where(source_name, line_no) + "dimension mismatch: row has " + std::to_string(row.size()) +
                      " components, expected " + std::to_string(dim));
    }
    values.insert(values.end(), row.begin(), row.end());
    meta.source_rows.push_back(line);
  }
  return VectorDataset(dim, std::move(values), std::move(meta));
}

VectorDataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_dataset(in, format, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const VectorDataset& ds, DataFormat format) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.has_source_rows()) {
      out << ds.source_row(i) << '\n';
      continue;
    }
    const auto p = ds.point(i);
    if (format == DataFormat::VectorsCsv) {
      for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << format_double(p[j]);
    } else {
      out << ds.id(i) << '\t';
      if (ds.has_payloads()) out << ds.payload(i) << '\t';
      for (std::size_t j = 0; j < p.size(); ++j) out << (j ? " " : "") << format_double(p[j]);
    }
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const VectorDataset& ds, DataFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dataset(out, ds, format);
  if (!out) throw DataError("write failed for " + path.string());
}

VectorDataset normalize_rows(const VectorDataset& ds) {
  std::vector<double> values(ds.values().begin(), ds.values().end());
  const std::size_t d = ds.dim();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm += values[i * d + j] * values[i * d + j];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw DataError("cannot normalize zero vector at index " + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) values[i * d + j] /= norm;
  }
  VectorDataset::Metadata meta;
  meta.ids = ds.metadata().ids;
  meta.payloads = ds.metadata().payloads;
  return VectorDataset(d, std::move(values), std::move(meta));
}

SubsetIndices random_subset_indices(std::size_t n, double fraction, SeededRng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("subset fraction must lie in [0, 1]");
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  SubsetIndices out;
  out.chosen = rng.sample_without_replacement(n, count);
  std::vector<char> taken(n, 0);
  for (const auto i : out.chosen) taken[i] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) out.rest.push_back(i);
  }
  return out;
}

std::pair<VectorDataset, VectorDataset> random_subset(const VectorDataset& ds, double fraction, SeededRng& rng) {
  const auto idx = random_subset_indices(ds.size(), fraction, rng);
  return {ds.subset(idx.chosen), ds.subset(idx.rest)};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_distance(a, b)); }

}  // namespace gio
