#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/gp.hpp"
#include "bosegas/grid.hpp"

// Deterministic file emission. Every floating-point value is printed with 17
// significant decimal digits (enough to round-trip a double exactly), JSON
// objects keep their keys sorted, and nothing records wall-clock time, so a
// re-run with the same inputs reproduces each output byte for byte.
namespace bosegas::io {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --- hashing ------------------------------------------------------------

// FNV-1a, 64-bit; used to fingerprint canonicalized configs in manifests.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

// --- minimal JSON emitter -------------------------------------------------

// Output-only JSON tree. std::map keeps object keys sorted; doubles go
// through format_double so the 17-digit contract holds everywhere. (Config
// *parsing* uses a full JSON library; this type only exists because no
// mainstream serializer prints floats with a fixed significant-digit count.)
class JsonNode {
 public:
  JsonNode() : kind_(Kind::null) {}
  JsonNode(double v) : kind_(Kind::real), real_(v) {}
  JsonNode(long long v) : kind_(Kind::integer), int_(v) {}
  JsonNode(int v) : kind_(Kind::integer), int_(v) {}
  JsonNode(std::uint64_t v) : kind_(Kind::integer), int_(static_cast<long long>(v)) {}
  JsonNode(bool v) : kind_(Kind::boolean), bool_(v) {}
  JsonNode(std::string v) : kind_(Kind::string), string_(std::move(v)) {}
  JsonNode(const char* v) : kind_(Kind::string), string_(v) {}

  static JsonNode object() {
    JsonNode n;
    n.kind_ = Kind::object;
    return n;
  }
  static JsonNode array() {
    JsonNode n;
    n.kind_ = Kind::array;
    return n;
  }

  JsonNode& operator[](const std::string& key) {
    if (kind_ == Kind::null) kind_ = Kind::object;
    if (kind_ != Kind::object) throw IoError("JSON node is not an object");
    return members_[key];
  }
  void push_back(JsonNode v) {
    if (kind_ == Kind::null) kind_ = Kind::array;
    if (kind_ != Kind::array) throw IoError("JSON node is not an array");
    items_.push_back(std::move(v));
  }

  std::string dump(int indent = 2) const {
    std::ostringstream out;
    write(out, indent, 0);
    out << '\n';
    return out.str();
  }

 private:
  enum class Kind { null, object, array, string, real, integer, boolean };

  void write(std::ostringstream& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
      case Kind::null:
        out << "null";
        break;
      case Kind::boolean:
        out << (bool_ ? "true" : "false");
        break;
      case Kind::integer:
        out << int_;
        break;
      case Kind::real:
        if (!std::isfinite(real_))
          throw IoError("refusing to serialize a non-finite number");
        out << format_double(real_);
        break;
      case Kind::string:
        write_string(out, string_);
        break;
      case Kind::object: {
        if (members_.empty()) {
          out << "{}";
          break;
        }
        out << "{\n";
        bool first = true;
        for (const auto& [key, value] : members_) {
          if (!first) out << ",\n";
          first = false;
          out << pad;
          write_string(out, key);
          out << ": ";
          value.write(out, indent, depth + 1);
        }
        out << '\n' << close << '}';
        break;
      }
      case Kind::array: {
        if (items_.empty()) {
          out << "[]";
          break;
        }
        out << "[\n";
        bool first = true;
        for (const auto& value : items_) {
          if (!first) out << ",\n";
          first = false;
          out << pad;
          value.write(out, indent, depth + 1);
        }
        out << '\n' << close << ']';
        break;
      }
    }
  }

  static void write_string(std::ostringstream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
      switch (c) {
        case '"': out << "\\\""; break;
        case '\\': out << "\\\\"; break;
        case '\n': out << "\\n"; break;
        case '\t': out << "\\t"; break;
        case '\r': out << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out << buf;
          } else {
            out << c;
          }
      }
    }
    out << '"';
  }

  Kind kind_;
  double real_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string string_;
  std::map<std::string, JsonNode> members_;
  std::vector<JsonNode> items_;
};

// --- plain text and CSV ---------------------------------------------------

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw IoError("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  write_text(path, out.str());
}

struct CsvTable {
  std::vector<std::string> header;          // empty if the file had none
  std::vector<std::vector<double>> rows;
};

// Comma-separated numeric table; '#' lines are comments, a non-numeric first
// row is treated as the header. Ragged rows or unparsable cells are errors
// with the offending line number.
inline CsvTable read_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  CsvTable table;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream split(line);
    std::string cell;
    while (std::getline(split, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");

    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (const std::string& c : cells) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(c, &used);
      } catch (const std::exception&) {
        numeric = false;
      }
      if (used != c.size() &&
          c.find_first_not_of(" \t", used) != std::string::npos)
        numeric = false;
      if (!numeric) break;
      row.push_back(value);
    }
    if (!numeric) {
      if (table.rows.empty() && table.header.empty()) {
        table.header = cells;  // header row
        width = cells.size();
        continue;
      }
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": non-numeric cell in CSV data");
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(width) + " columns, got " +
                       std::to_string(row.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

// --- binary fields with JSON sidecars --------------------------------------

// A complex lattice field is stored as raw little-endian doubles,
// interleaved re,im in row-major site order, next to a sidecar
// `<base>.json` describing the grid. The pair is enough to re-load the
// field without any out-of-band knowledge.
inline JsonNode grid_sidecar(const GridSpec& g, std::size_t count) {
  JsonNode meta = JsonNode::object();
  meta["layout"] = "row-major interleaved re,im float64 little-endian";
  meta["dim"] = g.dim;
  JsonNode n = JsonNode::array(), length = JsonNode::array(),
           origin = JsonNode::array(), spacing = JsonNode::array();
  for (int a = 0; a < g.dim; ++a) {
    n.push_back(g.n[a]);
    length.push_back(g.length[a]);
    origin.push_back(g.origin[a]);
    spacing.push_back(g.spacing(a));
  }
  meta["n"] = std::move(n);
  meta["length"] = std::move(length);
  meta["origin"] = std::move(origin);
  meta["spacing"] = std::move(spacing);
  meta["complex_count"] = count;
  return meta;
}

inline void write_field(const std::filesystem::path& base, const GridSpec& g,
                        const gp::Field& phi) {
  static_assert(sizeof(std::complex<double>) == 16);
  if (std::endian::native != std::endian::little)
    throw IoError("binary field files require a little-endian host");
  if (phi.size() != g.size())
    throw GeometryError("field size does not match the grid");
  std::filesystem::path data = base;
  data += ".f64";
  std::ofstream out(data, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + data.string());
  out.write(reinterpret_cast<const char*>(phi.data()),
            static_cast<std::streamsize>(phi.size() * sizeof(phi[0])));
  if (!out) throw IoError("write failed: " + data.string());
  std::filesystem::path side = base;
  side += ".json";
  write_text(side, grid_sidecar(g, phi.size()).dump());
}

// Reads a field written by write_field; the caller supplies the grid it
// expects and the byte count is validated against it.
inline gp::Field read_field(const std::filesystem::path& base, const GridSpec& g) {
  if (std::endian::native != std::endian::little)
    throw IoError("binary field files require a little-endian host");
  std::filesystem::path data = base;
  data += ".f64";
  std::ifstream in(data, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open for reading: " + data.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != g.size() * sizeof(std::complex<double>))
    throw IoError("field file size does not match the expected grid: " +
                  data.string());
  gp::Field phi(g.size());
  in.seekg(0);
  in.read(reinterpret_cast<char*>(phi.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed: " + data.string());
  return phi;
}

// Flattened CSV view of a field: a shape comment, then one row per site.
inline void write_field_csv(const std::filesystem::path& path, const GridSpec& g,
                            const gp::Field& phi) {
  if (phi.size() != g.size())
    throw GeometryError("field size does not match the grid");
  std::ostringstream out;
  out << "# dim=" << g.dim;
  out << " n=";
  for (int a = 0; a < g.dim; ++a) out << (a ? "," : "") << g.n[a];
  out << " length=";
  for (int a = 0; a < g.dim; ++a)
    out << (a ? "," : "") << format_double(g.length[a]);
  out << " origin=";
  for (int a = 0; a < g.dim; ++a)
    out << (a ? "," : "") << format_double(g.origin[a]);
  out << "\nindex,re,im\n";
  for (std::size_t i = 0; i < phi.size(); ++i)
    out << i << ',' << format_double(phi[i].real()) << ','
        << format_double(phi[i].imag()) << '\n';
  write_text(path, out.str());
}

}  // namespace bosegas::io
