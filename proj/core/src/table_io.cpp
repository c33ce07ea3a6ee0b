#include "swh/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace swh {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (const std::string& c : table.comments) out += "# " + c + "\n";
  for (size_t k = 0; k < table.columns.size(); ++k) {
    if (k) out += ',';
    out += table.columns[k];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("csv row width mismatch");
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_g17(row[k]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void write_csv(const std::string& path, const CsvTable& table) {
  write_text_file(path, render_csv(table));
}

std::string render_gnuplot_matrix(const Mesh2D& mesh,
                                  const std::vector<double>& field,
                                  const std::vector<std::string>& comments) {
  std::string out;
  for (const std::string& c : comments) out += "# " + c + "\n";
  out += format_g17(mesh.nt());
  for (double th : mesh.theta_nodes) out += ' ' + format_g17(th);
  out += '\n';
  for (int j = 0; j < mesh.nr(); ++j) {
    out += format_g17(mesh.r_nodes[j]);
    for (int i = 0; i < mesh.nt(); ++i)
      out += ' ' + format_g17(field[mesh.index(i, j)]);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace swh
