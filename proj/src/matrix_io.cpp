#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <zlib.h>

#include "orcalab/envgen.hpp"

namespace orcalab {

void write_matrix(std::ostream& out, const PreferenceMatrix& m) {
  out << m.users() << ' ' << m.items() << '\n';
  std::string line(m.items(), '0');
  for (std::size_t i = 0; i < m.users(); ++i) {
    for (std::size_t j = 0; j < m.items(); ++j) line[j] = m.at(i, j) ? '1' : '0';
    out << line << '\n';
  }
}

PreferenceMatrix read_matrix(std::istream& in) {
  std::size_t users = 0;
  std::size_t items = 0;
  if (!(in >> users >> items)) throw FormatError("matrix header must be 'M N'");
  if (users == 0 || items == 0) throw FormatError("matrix dimensions must be positive");
  PreferenceMatrix m(users, items);
  std::string line;
  for (std::size_t i = 0; i < users; ++i) {
    if (!(in >> line)) throw FormatError("matrix ends after " + std::to_string(i) + " rows");
    if (line.size() != items) {
      throw FormatError("row " + std::to_string(i) + " has " + std::to_string(line.size()) + " entries, expected " +
                        std::to_string(items));
    }
    for (std::size_t j = 0; j < items; ++j) {
      if (line[j] == '1') {
        m.set(i, j, true);
      } else if (line[j] != '0') {
        throw FormatError("row " + std::to_string(i) + " contains '" + std::string(1, line[j]) + "'");
      }
    }
  }
  if (in >> line) throw FormatError("trailing data after " + std::to_string(users) + " rows");
  return m;
}

PreferenceMatrix read_matrix_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open " + path);
  std::string data;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof buf)) > 0) data.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(f, &err);
  const std::string detail = msg != nullptr ? msg : "";
  gzclose(f);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END)) throw IoError("read error in " + path + ": " + detail);
  std::istringstream in(std::move(data));
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const PreferenceMatrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  const std::string data = std::move(out).str();
  const bool gz = path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  gzFile f = gzopen(path.c_str(), gz ? "wb" : "wbT");
  if (f == nullptr) throw IoError("cannot open " + path + " for writing");
  const int written = data.empty() ? 0 : gzwrite(f, data.data(), static_cast<unsigned>(data.size()));
  const int closed = gzclose(f);
  if (written != static_cast<int>(data.size()) || closed != Z_OK) throw IoError("write error in " + path);
}

}  // namespace orcalab
