#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swh/mesh.hpp"

namespace swh {

/// Numeric table serialized as CSV: '#'-prefixed header comments, a column
/// name row, then rows with 17 significant digits, '.' decimal separator,
/// '\n' line endings.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_g17(double x);
std::string render_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

void write_text_file(const std::string& path, const std::string& content);

/// gnuplot "nonuniform matrix" layout: first row holds nt and the theta
/// nodes, each following row holds r and the nodal values at that radius.
std::string render_gnuplot_matrix(const Mesh2D& mesh,
                                  const std::vector<double>& field,
                                  const std::vector<std::string>& comments);

/// FNV-1a 64-bit hash, used for config fingerprints in output headers.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);

}  // namespace swh
