#include "weakhyp/output.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "weakhyp/expr.hpp"

namespace weakhyp {

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("Table::add_row: cell count != column count");
  rows.push_back(std::move(cells));
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) os << ',';
    os << t.columns[c];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << row[c];
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') {
      out += '\\';
      out += ch;
    } else if (ch == '\n') {
      out += "\\n";
    } else {
      out += ch;
    }
  }
  return out;
}

// Numeric cells pass through bare; everything else is quoted.
bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string json_value(const std::string& s) {
  if (s == "true" || s == "false") return s;
  if (looks_numeric(s)) return s;
  return "\"" + json_escape(s) + "\"";
}

}  // namespace

std::string to_json(const Table& t) {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << "  {";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) os << ", ";
      os << '"' << json_escape(t.columns[c]) << "\": " << json_value(t.rows[r][c]);
    }
    os << (r + 1 < t.rows.size() ? "},\n" : "}\n");
  }
  os << "]\n";
  return os.str();
}

void KeyValueDoc::add(const std::string& key, const std::string& value) {
  items.emplace_back(key, value);
}
void KeyValueDoc::add(const std::string& key, double value) {
  items.emplace_back(key, format_double(value));
}
void KeyValueDoc::add(const std::string& key, long value) {
  items.emplace_back(key, std::to_string(value));
}
void KeyValueDoc::add(const std::string& key, bool value) {
  items.emplace_back(key, value ? "true" : "false");
}

std::string to_text(const KeyValueDoc& d) {
  std::ostringstream os;
  for (const auto& [k, v] : d.items) os << k << " = " << v << '\n';
  return os.str();
}

std::string to_json(const KeyValueDoc& d) {
  std::ostringstream os;
  os << "{\n";
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    os << "  \"" << json_escape(d.items[i].first) << "\": " << json_value(d.items[i].second);
    os << (i + 1 < d.items.size() ? ",\n" : "\n");
  }
  os << "}\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string manifest_to_json(const RunManifest& m) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"config_hash\": \"" << m.config_hash << "\",\n";
  os << "  \"version\": \"" << m.version << "\",\n";
  os << "  \"timings_s\": {";
  for (std::size_t i = 0; i < m.timings_s.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(m.timings_s[i].first) << "\": " << format_double(m.timings_s[i].second);
  }
  os << "},\n";
  os << "  \"files\": [\n";
  for (std::size_t i = 0; i < m.files.size(); ++i) {
    os << "    {\"path\": \"" << json_escape(m.files[i].path) << "\", \"checksum\": \""
       << m.files[i].checksum << "\"}";
    os << (i + 1 < m.files.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void Emitter::write(const std::string& rel_path, const std::string& content) {
  write_file(root_ + "/" + rel_path, content);
  files_.push_back({rel_path, hex64(fnv1a64(content))});
}

}  // namespace weakhyp
