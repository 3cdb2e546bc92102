#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace weakhyp {

enum class OutputFormat { csv, json };

// Columnar table; every cell is already formatted text so emission is
// byte-deterministic.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

std::string to_csv(const Table& t);
std::string to_json(const Table& t);  // array of objects, keys in column order

// Small ordered key-value document (summaries, weight plans, fit reports).
struct KeyValueDoc {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add(const std::string& key, bool value);
};

std::string to_text(const KeyValueDoc& d);  // "key = value" lines
std::string to_json(const KeyValueDoc& d);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

struct ManifestEntry {
  std::string path;      // relative to the output dir
  std::string checksum;  // fnv1a64 of the file content
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<std::pair<std::string, double>> timings_s;  // per stage, not checksummed
  std::vector<ManifestEntry> files;
};

std::string manifest_to_json(const RunManifest& m);

// Serialized emitter: writes content, records (path, checksum) in order.
class Emitter {
 public:
  explicit Emitter(std::string root) : root_(std::move(root)) {}

  const std::string& root() const { return root_; }
  void write(const std::string& rel_path, const std::string& content);
  const std::vector<ManifestEntry>& files() const { return files_; }

 private:
  std::string root_;
  std::vector<ManifestEntry> files_;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace weakhyp
