#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace degenlab {

using Json = nlohmann::ordered_json;

std::uint32_t crc32(const std::string& bytes);

/// Files written under one output root, each recorded with its CRC-32 for the manifest.
/// Safe to write from several threads.
class OutputBundle {
 public:
  explicit OutputBundle(std::string root);

  const std::string& root() const noexcept { return root_; }
  /// Writes `content` to root/relative (parent directories created) and records it.
  void write(const std::string& relative, const std::string& content);
  void write_json(const std::string& relative, const Json& value);

  struct Entry {
    std::string path;
    std::uint32_t crc = 0;
    std::size_t bytes = 0;
  };
  /// Recorded entries sorted by path.
  std::vector<Entry> entries() const;

  /// manifest.json: `run` plus {"files": [{path, crc32, bytes}]} over every file written so far.
  void write_manifest(const Json& run);

 private:
  std::string root_;
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

/// Fixed key order: theorem, beta, domain, estimate, window, verdict, tolerances.
Json theorem_record(const std::string& theorem, double beta, const std::string& domain, Json estimate,
                    Json window, const std::string& verdict, Json tolerances);

std::string json_text(const Json& value);

std::string hex32(std::uint32_t v);

}  // namespace degenlab
