#include "tb/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tb {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; i++) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

StageCache::StageCache(std::string dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string StageCache::path_for(const std::string& key) const {
  return dir_ + "/" + sha256_hex(key) + ".stage";
}

std::optional<std::string> StageCache::load(const std::string& key) const {
  if (dir_.empty()) return std::nullopt;
  std::ifstream is(path_for(key), std::ios::binary);
  if (!is) return std::nullopt;
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void StageCache::store(const std::string& key, const std::string& payload) const {
  if (dir_.empty()) return;
  std::string final_path = path_for(key);
  std::string tmp = final_path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << payload;
    if (!os) throw std::runtime_error("cache write failed: " + tmp);
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace tb
