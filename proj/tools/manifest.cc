// tools/manifest.cc

// Copyright 2026  The nlsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "manifest.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "nlsd/common.h"
#include "nlsd/io.h"

namespace nlsd {

namespace fs = std::filesystem;

std::string Sha256File(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "' for checksumming");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("sha256 initialization failed");
  std::array<char, 1 << 16> buf;
  while (is) {
    is.read(buf.data(), buf.size());
    if (is.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount())) != 1)
      throw Error("sha256 update failed");
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("sha256 finalization failed");
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

std::string FindManifestFor(const std::string &artifact) {
  const std::string own = artifact + ".manifest.json";
  if (fs::exists(own)) return own;
  const fs::path dir = fs::path(artifact).parent_path();
  const fs::path shared = dir / "manifest.json";
  if (fs::exists(shared)) return shared.string();
  return {};
}

std::string RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto &[k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  nlohmann::ordered_json args = nlohmann::ordered_json::object();
  for (const auto &[k, v] : arguments) args[k] = v;
  j["arguments"] = args;
  j["seeds"] = nlohmann::ordered_json(seeds);
  auto files = [](const std::vector<std::string> &paths, bool upstream) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &p : paths) {
      nlohmann::ordered_json e;
      e["path"] = p;
      e["sha256"] = Sha256File(p);
      if (upstream) {
        const std::string m = FindManifestFor(p);
        if (!m.empty()) {
          e["manifest"] = m;
          e["manifest_sha256"] = Sha256File(m);
        }
      }
      arr.push_back(e);
    }
    return arr;
  };
  j["inputs"] = files(inputs, true);
  j["outputs"] = files(outputs, false);
  return j.dump(2) + "\n";
}

void RunManifest::Write(const std::string &path) const { WriteFileText(path, ToJson()); }

RunManifest RunManifest::Read(const std::string &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFileText(path));
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::vector<std::string>>>();
    m.arguments = j.at("arguments").get<std::map<std::string, std::vector<std::string>>>();
    m.seeds = j.at("seeds").get<std::map<std::string, std::string>>();
    for (const auto &e : j.at("inputs")) m.inputs.push_back(e.at("path").get<std::string>());
    for (const auto &e : j.at("outputs")) m.outputs.push_back(e.at("path").get<std::string>());
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(path + ": malformed manifest: " + e.what());
  }
}

}  // namespace nlsd
