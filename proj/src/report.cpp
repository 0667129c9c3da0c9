#include "degenlab/report.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "degenlab/errors.hpp"

namespace degenlab {

std::uint32_t crc32(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string json_text(const Json& value) { return value.dump(2) + "\n"; }

OutputBundle::OutputBundle(std::string root) : root_(std::move(root)) {}

void OutputBundle::write(const std::string& relative, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(root_) / relative;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw ConfigurationError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw ConfigurationError("cannot write " + path.string());
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.path == relative; }),
                 entries_.end());
  entries_.push_back({relative, crc32(content), content.size()});
}

void OutputBundle::write_json(const std::string& relative, const Json& value) { write(relative, json_text(value)); }

std::vector<OutputBundle::Entry> OutputBundle::entries() const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto copy = entries_;
  std::sort(copy.begin(), copy.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
  return copy;
}

void OutputBundle::write_manifest(const Json& run) {
  Json m = run;
  Json files = Json::array();
  for (const Entry& e : entries()) {
    if (e.path == "manifest.json") continue;
    files.push_back({{"path", e.path}, {"crc32", hex32(e.crc)}, {"bytes", e.bytes}});
  }
  m["files"] = files;
  write_json("manifest.json", m);
}

Json theorem_record(const std::string& theorem, double beta, const std::string& domain, Json estimate, Json window,
                    const std::string& verdict, Json tolerances) {
  Json r;
  r["theorem"] = theorem;
  r["beta"] = beta;
  r["domain"] = domain;
  r["estimate"] = std::move(estimate);
  r["window"] = std::move(window);
  r["verdict"] = verdict;
  r["tolerances"] = std::move(tolerances);
  return r;
}

}  // namespace degenlab
