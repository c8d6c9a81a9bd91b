#include "magnify/io.hpp"

#include "magnify/config.hpp"
#include "magnify/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace magnify::io {

namespace {

bool parse_number(const std::string& field, double& out) {
  std::size_t begin = 0;
  std::size_t end = field.size();
  while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
  while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t')) --end;
  if (begin == end) return false;
  if (field[begin] == '+') ++begin;
  auto [ptr, ec] = std::from_chars(field.data() + begin, field.data() + end, out);
  return ec == std::errc() && ptr == field.data() + end;
}

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Leading lines starting with '#' carry run metadata in our own outputs.
std::string strip_comment_preamble(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    const auto eol = text.find('\n', pos);
    if (eol == std::string::npos) return {};
    pos = eol + 1;
  }
  return text.substr(pos);
}

NumericTable split_header(std::vector<std::vector<std::string>> rows) {
  if (rows.empty()) throw Error(ErrorKind::invalid_input, "empty input");
  NumericTable table;
  double tmp = 0.0;
  const bool has_header = std::any_of(rows.front().begin(), rows.front().end(),
                                      [&](const std::string& f) { return !parse_number(f, tmp); });
  if (has_header) {
    table.header = std::move(rows.front());
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw Error(ErrorKind::invalid_input, "no data rows");
  const std::size_t width = table.header.empty() ? rows.front().size() : table.header.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(ErrorKind::invalid_input, "row " + std::to_string(r + 1) + " has " +
                                                std::to_string(rows[r].size()) + " fields, expected " +
                                                std::to_string(width));
    }
  }
  table.rows = std::move(rows);
  return table;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(v >> (8 * b));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw Error(ErrorKind::invalid_input, "truncated binary matrix");
  }
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[b];
  return v;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        row_has_content = false;
        break;
      default:
        field += c;
        row_has_content = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::invalid_input, "unterminated quoted field");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

PointCloud point_cloud_from_csv(const std::string& text) {
  NumericTable table = split_header(parse_csv(strip_comment_preamble(text)));
  std::ptrdiff_t id_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == "id") id_col = static_cast<std::ptrdiff_t>(c);
  }
  const std::size_t width = table.rows.front().size();
  const std::size_t dims = width - (id_col >= 0 ? 1 : 0);
  if (dims == 0) throw Error(ErrorKind::invalid_input, "no numeric columns");

  Matrix pts(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(dims));
  std::optional<std::vector<std::string>> ids;
  if (id_col >= 0) ids.emplace();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Eigen::Index c_out = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<std::ptrdiff_t>(c) == id_col) {
        ids->push_back(table.rows[r][c]);
        continue;
      }
      double v = 0.0;
      if (!parse_number(table.rows[r][c], v)) {
        throw Error(ErrorKind::invalid_input, "non-numeric value '" + table.rows[r][c] + "' in data row " +
                                                  std::to_string(r + 1));
      }
      pts(static_cast<Eigen::Index>(r), c_out++) = v;
    }
  }
  return PointCloud(std::move(pts), std::move(ids));
}

PointCloud read_point_cloud(const std::string& path) { return point_cloud_from_csv(read_file(path)); }

Matrix matrix_from_csv(const std::string& text) {
  NumericTable table = split_header(parse_csv(strip_comment_preamble(text)));
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(table.rows.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& f = table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (!parse_number(f, m(r, c))) throw Error(ErrorKind::invalid_input, "non-numeric matrix entry '" + f + "'");
    }
  }
  return m;
}

void write_matrix_binary(std::ostream& out, const Matrix& m) {
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_u64(out, std::bit_cast<std::uint64_t>(m(r, c)));
  }
}

Matrix read_matrix_binary(std::istream& in) {
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;
  if (rows == 0 || cols == 0 || rows > kMaxEntries / cols) {
    throw Error(ErrorKind::invalid_input, "implausible binary matrix shape");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = std::bit_cast<double>(get_u64(in));
  }
  return m;
}

Matrix read_matrix(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
    return read_matrix_binary(in);
  }
  return matrix_from_csv(read_file(path));
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& pc) {
  const auto& ids = pc.ids();
  if (ids) out << "id,";
  for (Eigen::Index c = 0; c < pc.dims(); ++c) out << (c ? "," : "") << 'x' << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < pc.size(); ++r) {
    if (ids) out << csv_field((*ids)[static_cast<std::size_t>(r)]) << ',';
    for (Eigen::Index c = 0; c < pc.dims(); ++c) out << (c ? "," : "") << format_real(pc.points()(r, c));
    out << '\n';
  }
}

void write_magnitude_profile_csv(std::ostream& out, const MagnitudeProfile& profile) {
  out << "s,value\n";
  const auto& s = profile.grid.s_values();
  for (std::size_t j = 0; j < profile.values.size(); ++j) {
    out << format_real(s[j]) << ',' << format_real(profile.values[j]) << '\n';
  }
}

void write_weight_profile_csv(std::ostream& out, const WeightProfile& profile) {
  out << 's';
  for (Eigen::Index k = 0; k < profile.n; ++k) {
    out << ',' << (profile.ids ? csv_field((*profile.ids)[static_cast<std::size_t>(k)]) : "w_" + std::to_string(k + 1));
  }
  out << '\n';
  const auto& s = profile.grid.s_values();
  for (Eigen::Index j = 0; j < profile.weights.cols(); ++j) {
    out << format_real(s[static_cast<std::size_t>(j)]);
    for (Eigen::Index k = 0; k < profile.n; ++k) out << ',' << format_real(profile.weights(k, j));
    out << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace magnify::io
