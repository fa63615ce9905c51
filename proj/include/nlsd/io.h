// include/nlsd/io.h

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

// Text formats of the pipeline artifacts. Numbers are written with 17
// significant digits so a write/read cycle reproduces every double exactly.
// Lines starting with '#' are comments, except that score files carry
// "# key<TAB>value" metadata lines which the reader keeps.

#ifndef NLSD_IO_H_
#define NLSD_IO_H_

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsd/affine.h"
#include "nlsd/common.h"
#include "nlsd/scoring.h"
#include "nlsd/sim.h"
#include "nlsd/stats.h"
#include "nlsd/transform.h"

namespace nlsd {

std::string FormatDouble(double v);
double ParseDouble(std::string_view text);

// utt<TAB>speaker<TAB>condition<TAB>v1,v2,...,vd
VectorSet ReadVectorSet(std::istream &is);
void WriteVectorSet(std::ostream &os, std::span<const LabeledVector> vectors);

ConditionStats ReadConditionStats(std::istream &is);
void WriteConditionStats(std::ostream &os, const ConditionStats &stats);

AffineTransform ReadTransform(std::istream &is);
void WriteTransform(std::ostream &os, const AffineTransform &t, Objective objective);

// speaker<TAB>utt<TAB>target|nontarget
std::vector<Trial> ReadTrials(std::istream &is);
void WriteTrials(std::ostream &os, std::span<const Trial> trials);

struct ScoreFile {
  std::map<std::string, std::string> meta;
  std::vector<ScoreRecord> scores;
};

// speaker<TAB>utt<TAB>score
ScoreFile ReadScores(std::istream &is);
void WriteScores(std::ostream &os, std::span<const ScoreRecord> scores,
                 const std::map<std::string, std::string> &meta = {});

void WriteGroundTruth(std::ostream &os, const GroundTruth &truth);
GroundTruth ReadGroundTruth(std::istream &is);

/// File wrappers; throw Error naming the path on failure.
std::string ReadFileText(const std::string &path);
void WriteFileText(const std::string &path, const std::string &text);

/// Runs `reader` over the contents of `path`, prefixing errors with the path.
template <class Fn>
auto ReadFile(const std::string &path, Fn &&reader) {
  std::istringstream is(ReadFileText(path));
  try {
    return reader(is);
  } catch (const Error &e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace nlsd

#endif  // NLSD_IO_H_
