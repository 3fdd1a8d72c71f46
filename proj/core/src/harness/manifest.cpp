#include "esdrl/harness/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "src/internal/json_out.hpp"

namespace esdrl::harness {

RunManifest::RunManifest(std::string config_hash,
                         std::vector<std::uint64_t> seeds)
    : config_hash_(std::move(config_hash)), seeds_(std::move(seeds)) {}

void RunManifest::add_artifact(const std::string& relative_path) {
  artifacts_.push_back(relative_path);
}

void RunManifest::add_summary(const std::string& name,
                              const std::string& json_blob) {
  summaries_.emplace_back(name, json_blob);
}

void RunManifest::write(const std::string& out_dir) const {
  for (const auto& a : artifacts_) {
    if (!std::filesystem::exists(std::filesystem::path(out_dir) / a)) {
      throw std::runtime_error("manifest: artifact missing: " + a);
    }
  }
  internal::JsonEmitter e;
  e.begin_object();
  e.key("tool_version").value(kToolVersion);
  e.key("config_hash").value(config_hash_);
  e.key("seeds").begin_array();
  for (auto s : seeds_) e.value(static_cast<std::size_t>(s));
  e.end_array();
  e.key("artifacts").begin_array();
  for (const auto& a : artifacts_) e.value(a);
  e.end_array();
  e.key("summaries").begin_object();
  std::string body = e.take();
  for (std::size_t i = 0; i < summaries_.size(); ++i) {
    if (i) body += ',';
    internal::JsonEmitter key;
    key.value(summaries_[i].first);
    body += key.take();
    body += ':';
    body += summaries_[i].second;
  }
  body += "}}";
  write_text_file((std::filesystem::path(out_dir) / "manifest.json").string(),
                  body + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("short write to " + path);
  }
  std::filesystem::rename(tmp, p);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace esdrl::harness
