#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gio/rng.hpp"

namespace gio {

using Vector = std::vector<double>;

// Non-owning row-major view over `size()` points of dimension `dim`.
struct PointsView {
  std::span<const double> values;
  std::size_t dim = 0;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  bool empty() const { return size() == 0; }
  std::span<const double> row(std::size_t i) const { return values.subspan(i * dim, dim); }
};

enum class DataFormat { VectorsCsv, TabularTsv };

DataFormat parse_data_format(std::string_view name);
std::string_view to_string(DataFormat format);

// Ordered collection of d-dimensional points with optional record ids,
// payloads, and the verbatim source rows they were parsed from.
//
// An empty dataset may have dim() == 0 (e.g. loaded from an empty file).
// Otherwise dim() >= 1 and every component is finite.
class VectorDataset {
 public:
  struct Metadata {
    std::vector<std::string> ids;
    std::vector<std::string> payloads;
    std::vector<std::string> source_rows;
  };

  VectorDataset() = default;
  VectorDataset(std::size_t dim, std::vector<double> values, Metadata metadata = {});

  static VectorDataset from_rows(const std::vector<Vector>& rows);

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> point(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> values() const { return values_; }
  PointsView view() const { return {values_, dim_}; }
  operator PointsView() const { return view(); }  // NOLINT(google-explicit-constructor)

  bool has_ids() const { return !meta_.ids.empty(); }
  // Record id; the 0-based row index when the source carried none.
  std::string id(std::size_t i) const;
  bool has_payloads() const { return !meta_.payloads.empty(); }
  const std::string& payload(std::size_t i) const { return meta_.payloads.at(i); }
  bool has_source_rows() const { return !meta_.source_rows.empty(); }
  const std::string& source_row(std::size_t i) const { return meta_.source_rows.at(i); }
  const Metadata& metadata() const { return meta_; }

  // Rows at `indices` in the given order; repeats are allowed.
  VectorDataset subset(std::span<const std::size_t> indices) const;
  // Rows of `a` followed by rows of `b`. Metadata kept only if both carry it.
  static VectorDataset concat(const VectorDataset& a, const VectorDataset& b);

  Vector mean() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  Metadata meta_;
};

VectorDataset parse_dataset(std::istream& in, DataFormat format, std::string_view source_name = "<stream>");
VectorDataset load_dataset(const std::filesystem::path& path, DataFormat format);

// Writes one row per point. Rows that came from a file are reproduced
// verbatim; other rows are formatted with shortest round-trip decimals.
void write_dataset(std::ostream& out, const VectorDataset& ds, DataFormat format);
void save_dataset(const std::filesystem::path& path, const VectorDataset& ds, DataFormat format);

std::string format_double(double value);

VectorDataset normalize_rows(const VectorDataset& ds);

struct SubsetIndices {
  std::vector<std::size_t> chosen;  // draw order
  std::vector<std::size_t> rest;    // ascending
};

SubsetIndices random_subset_indices(std::size_t n, double fraction, SeededRng& rng);
std::pair<VectorDataset, VectorDataset> random_subset(const VectorDataset& ds, double fraction, SeededRng& rng);

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace gio
