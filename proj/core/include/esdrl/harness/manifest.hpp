#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace esdrl::harness {

inline constexpr const char* kToolVersion = "0.1.0";

// Run provenance: written as <out_dir>/manifest.json at the end of every
// command. Summaries are pre-serialized JSON blobs keyed by name.
class RunManifest {
 public:
  RunManifest(std::string config_hash, std::vector<std::uint64_t> seeds);

  void add_artifact(const std::string& relative_path);
  void add_summary(const std::string& name, const std::string& json_blob);

  // Serialize; verifies every artifact exists under out_dir first.
  void write(const std::string& out_dir) const;

  const std::vector<std::string>& artifacts() const { return artifacts_; }

 private:
  std::string config_hash_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> artifacts_;
  std::vector<std::pair<std::string, std::string>> summaries_;
};

// Small file helpers shared by commands (atomic-ish write: temp + rename).
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace esdrl::harness
