// tools/manifest.h

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

// Run manifests: one JSON document per command invocation recording the
// parameters, seeds and SHA-256 checksums of every input and output. Paths
// are stored exactly as given and nothing time-dependent is written, so a
// rerun with the same arguments gives a byte-identical manifest.

#ifndef NLSD_TOOLS_MANIFEST_H_
#define NLSD_TOOLS_MANIFEST_H_

#include <map>
#include <string>
#include <vector>

namespace nlsd {

std::string Sha256File(const std::string &path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::vector<std::string>> parameters;  // resolved values
  std::map<std::string, std::vector<std::string>> arguments;   // as given on the command line
  std::map<std::string, std::string> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  /// Checksums are taken here, so call after the outputs are written.
  std::string ToJson() const;
  void Write(const std::string &path) const;
  static RunManifest Read(const std::string &path);
};

/// The manifest that describes `artifact`: "<artifact>.manifest.json", or
/// "manifest.json" in the same directory. Empty when neither exists.
std::string FindManifestFor(const std::string &artifact);

}  // namespace nlsd

#endif  // NLSD_TOOLS_MANIFEST_H_
