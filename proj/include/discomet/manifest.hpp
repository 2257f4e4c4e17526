// Copyright 2026 The discomet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "discomet/config.hpp"
#include "discomet/error.hpp"

namespace discomet {

inline constexpr const char *kVersion = "0.1.0";

inline std::string Sha256Hex(const std::string &data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kInternal, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

inline std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string FileDigest(const std::string &path) { return Sha256Hex(ReadFile(path)); }

inline std::string UtcTimestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Provenance of one command run. Every report the run writes is listed with
// its digest; JSON reports point back to the manifest file.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // file name -> sha256
  // Values derived from the config, e.g. the significance gate in force.
  std::map<std::string, std::string> parameters;
  std::optional<uint64_t> seed;
  std::string version = kVersion;
  std::string started_at;
  std::string finished_at;

  void AddInput(const std::string &path) { inputs[path] = FileDigest(path); }

  // Everything except the timestamps.
  nlohmann::ordered_json Content() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = version;
    j["config"] = config;
    if (seed) j["seed"] = *seed;
    if (!parameters.empty()) j["parameters"] = parameters;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j;
  }

  // Digest of Content(); equal across reruns on identical inputs.
  std::string Digest() const { return Sha256Hex(Content().dump()); }

  nlohmann::ordered_json ToJson() const {
    nlohmann::ordered_json j = Content();
    j["digest"] = Digest();
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    return j;
  }
};

}  // namespace discomet
