#pragma once
// Content-addressed stage cache: payloads stored under the SHA-256 of their
// key text, written atomically so interrupted runs never leave torn files.

#include <optional>
#include <string>

namespace tb {

std::string sha256_hex(const std::string& data);

class StageCache {
 public:
  // empty dir disables the cache (loads miss, stores are dropped)
  explicit StageCache(std::string dir);

  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& payload) const;

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::string path_for(const std::string& key) const;
};

}  // namespace tb
