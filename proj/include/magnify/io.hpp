#pragma once

#include "magnify/magnitude_diff.hpp"
#include "magnify/metric_core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace magnify::io {

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

/// Parsed RFC-4180 CSV: rows of fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// One row per point, numeric columns. A header row is detected when any of
/// its fields is non-numeric; a header column named "id" becomes the ids.
/// Leading '#' lines are skipped.
PointCloud point_cloud_from_csv(const std::string& text);
PointCloud read_point_cloud(const std::string& path);

/// n x n numeric CSV (optional header).
Matrix matrix_from_csv(const std::string& text);

/// Little-endian: u64 rows, u64 cols, then rows*cols f64 in row-major order.
void write_matrix_binary(std::ostream& out, const Matrix& m);
Matrix read_matrix_binary(std::istream& in);

/// Reads a precomputed distance matrix; binary when the path ends in .bin,
/// CSV otherwise.
Matrix read_matrix(const std::string& path);

void write_point_cloud_csv(std::ostream& out, const PointCloud& pc);

/// Columns: s, value.
void write_magnitude_profile_csv(std::ostream& out, const MagnitudeProfile& profile);
/// Columns: s, w_1..w_n (or the point ids when present).
void write_weight_profile_csv(std::ostream& out, const WeightProfile& profile);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace magnify::io
