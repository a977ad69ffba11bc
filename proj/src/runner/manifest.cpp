#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "mmt/runner.hpp"

namespace mmt::runner {

const char* artifact_version() { return MMT_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  nlohmann::json j{{"command", command},
                   {"config_echo", config_echo},
                   {"artifact_version", artifact_version},
                   {"started", started},
                   {"finished", finished},
                   {"outputs", outs},
                   {"status", status}};
  if (failure_time) j["failure_time"] = *failure_time;
  return j;
}

RunDir::RunDir(std::filesystem::path dir, std::string command, nlohmann::json config_echo) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  manifest_.command = std::move(command);
  manifest_.config_echo = std::move(config_echo);
  manifest_.artifact_version = runner::artifact_version();
  manifest_.started = utc_timestamp();
}

void RunDir::write(const std::string& name, const std::string& bytes) {
  write_atomic(dir_ / name, bytes);
  manifest_.outputs.push_back({name, sha256_hex(bytes), bytes.size()});
}

void RunDir::finish(const std::string& status, std::optional<double> failure_time) {
  manifest_.status = status;
  manifest_.failure_time = failure_time;
  manifest_.finished = utc_timestamp();
  write_atomic(dir_ / "manifest.json", manifest_.to_json().dump(2) + "\n");
}

}  // namespace mmt::runner
