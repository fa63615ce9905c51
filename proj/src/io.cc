// src/io.cc

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

#include "nlsd/io.h"

#include <charconv>
#include <fstream>
#include <set>
#include <unordered_set>

namespace nlsd {

namespace {

std::vector<std::string_view> SplitOn(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool Skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

std::string AtLine(std::size_t n) { return "line " + std::to_string(n) + ": "; }

void WriteRow(std::ostream &os, const auto &values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) os << '\t' << FormatDouble(values[i]);
  os << '\n';
}

void WriteVectorKey(std::ostream &os, const char *key, const Vector &v) {
  os << key;
  WriteRow(os, v);
}

void WriteMatrixKey(std::ostream &os, const char *key, const Matrix &m) {
  os << key << '\t' << m.rows() << '\t' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "\t" : "") << FormatDouble(m(r, c));
    os << '\n';
  }
}

std::size_t ParseCount(std::string_view text) {
  std::size_t v = 0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error("bad count '" + std::string(text) + "'");
  return v;
}

// Key-value document: each record is a key followed by tab-separated
// values; a matrix key is "name<TAB>rows<TAB>cols" followed by `rows` lines.
class KeyValueDoc {
 public:
  explicit KeyValueDoc(std::istream &is) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
      ++n;
      const auto view = StripCr(line);
      if (Skippable(view)) continue;
      std::vector<std::string> fields;
      for (auto f : SplitOn(view, '\t')) fields.emplace_back(f);
      lines_.push_back({n, std::move(fields)});
    }
    for (std::size_t i = 0; i < lines_.size(); ++i) index_.emplace(lines_[i].fields[0], i);
  }

  bool Has(const std::string &key) const { return index_.contains(key); }

  const std::vector<std::string> &Fields(const std::string &key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw Error("missing key '" + key + "'");
    return lines_[it->second].fields;
  }

  std::string String(const std::string &key) const {
    const auto &f = Fields(key);
    if (f.size() != 2) throw Error("key '" + key + "' expects one value");
    return f[1];
  }

  std::size_t Count(const std::string &key) const { return ParseCount(String(key)); }
  double Double(const std::string &key) const { return ParseDouble(String(key)); }

  Vector Values(const std::string &key) const {
    const auto &f = Fields(key);
    Vector v(static_cast<Eigen::Index>(f.size() - 1));
    for (std::size_t i = 1; i < f.size(); ++i) v[static_cast<Eigen::Index>(i - 1)] = ParseDouble(f[i]);
    return v;
  }

  Matrix Rows(const std::string &key) const {
    const auto &f = Fields(key);
    if (f.size() != 3) throw Error("matrix key '" + key + "' expects rows and cols");
    const std::size_t rows = ParseCount(f[1]), cols = ParseCount(f[2]);
    const std::size_t at = index_.at(key);
    if (at + rows >= lines_.size())
      throw Error("matrix '" + key + "' is truncated");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto &line = lines_[at + 1 + r];
      if (line.fields.size() != cols)
        throw Error(AtLine(line.number) + "matrix '" + key + "' row has " +
                    std::to_string(line.fields.size()) + " values, expected " +
                    std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = ParseDouble(line.fields[c]);
    }
    return m;
  }

 private:
  struct Line {
    std::size_t number;
    std::vector<std::string> fields;
  };
  std::vector<Line> lines_;
  std::map<std::string, std::size_t> index_;
};

void CheckLength(const Vector &v, Eigen::Index n, const char *what) {
  if (v.size() != n)
    throw Error(std::string(what) + " has " + std::to_string(v.size()) + " values, expected " +
                std::to_string(n));
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view text) {
  double v = 0.0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error("bad number '" + std::string(text) + "'");
  return v;
}

VectorSet ReadVectorSet(std::istream &is) {
  VectorSet out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto view = StripCr(line);
    if (Skippable(view)) continue;
    const auto fields = SplitOn(view, '\t');
    if (fields.size() != 4)
      throw Error(AtLine(n) + "expected 4 tab-separated fields, found " +
                  std::to_string(fields.size()));
    LabeledVector v{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), {}};
    if (v.utt_id.empty() || v.speaker.empty() || v.condition.empty())
      throw Error(AtLine(n) + "empty label field");
    const auto values = SplitOn(fields[3], ',');
    v.vec.resize(static_cast<Eigen::Index>(values.size()));
    try {
      for (std::size_t i = 0; i < values.size(); ++i)
        v.vec[static_cast<Eigen::Index>(i)] = ParseDouble(values[i]);
    } catch (const Error &e) {
      throw Error(AtLine(n) + e.what());
    }
    if (!out.empty() && v.vec.size() != out.front().vec.size())
      throw Error(AtLine(n) + "dimension " + std::to_string(v.vec.size()) + " differs from " +
                  std::to_string(out.front().vec.size()));
    if (!ids.insert(v.utt_id).second)
      throw Error(AtLine(n) + "duplicate utterance id '" + v.utt_id + "'");
    out.push_back(std::move(v));
  }
  return out;
}

void WriteVectorSet(std::ostream &os, std::span<const LabeledVector> vectors) {
  for (const auto &v : vectors) {
    os << v.utt_id << '\t' << v.speaker << '\t' << v.condition << '\t';
    for (Eigen::Index i = 0; i < v.vec.size(); ++i) os << (i ? "," : "") << FormatDouble(v.vec[i]);
    os << '\n';
  }
}

ConditionStats ReadConditionStats(std::istream &is) {
  const KeyValueDoc doc(is);
  ConditionStats s;
  s.condition = doc.String("condition");
  s.n_speakers = doc.Count("n_speakers");
  s.n_vectors = doc.Count("n_vectors");
  s.frame.source_condition = doc.String("frame_condition");
  s.frame.matrix = doc.Rows("frame");
  const auto d = s.frame.matrix.rows();
  s.mean = doc.Values("mean");
  s.between = doc.Values("between");
  s.within = doc.Values("within");
  CheckLength(s.mean, d, "mean");
  CheckLength(s.between, d, "between");
  CheckLength(s.within, d, "within");
  if ((s.between.array() <= 0).any() || (s.within.array() <= 0).any())
    throw Error("variances must be strictly positive");
  return s;
}

void WriteConditionStats(std::ostream &os, const ConditionStats &s) {
  os << "# nlsd condition stats\n";
  os << "condition\t" << s.condition << '\n';
  os << "frame_condition\t" << s.frame.source_condition << '\n';
  os << "n_speakers\t" << s.n_speakers << '\n';
  os << "n_vectors\t" << s.n_vectors << '\n';
  WriteMatrixKey(os, "frame", s.frame.matrix);
  WriteVectorKey(os, "mean", s.mean);
  WriteVectorKey(os, "between", s.between);
  WriteVectorKey(os, "within", s.within);
}

AffineTransform ReadTransform(std::istream &is) {
  const KeyValueDoc doc(is);
  AffineTransform t;
  t.source_condition = doc.String("source_condition");
  t.target_condition = doc.String("target_condition");
  t.objective = doc.Double("objective");
  t.condition_number = doc.Double("condition_number");
  t.m = doc.Rows("m");
  t.b = doc.Values("b");
  CheckLength(t.b, t.m.rows(), "b");
  if (!t.m.allFinite() || !t.b.allFinite()) throw Error("transform has non-finite entries");
  return t;
}

void WriteTransform(std::ostream &os, const AffineTransform &t, Objective objective) {
  os << "# nlsd affine transform (x_enroll = m x_test + b)\n";
  os << "source_condition\t" << t.source_condition << '\n';
  os << "target_condition\t" << t.target_condition << '\n';
  os << "objective_kind\t" << ObjectiveName(objective) << '\n';
  os << "objective\t" << FormatDouble(t.objective) << '\n';
  os << "condition_number\t" << FormatDouble(t.condition_number) << '\n';
  WriteMatrixKey(os, "m", t.m);
  WriteVectorKey(os, "b", t.b);
}

std::vector<Trial> ReadTrials(std::istream &is) {
  std::vector<Trial> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto view = StripCr(line);
    if (Skippable(view)) continue;
    const auto f = SplitOn(view, '\t');
    if (f.size() != 3) throw Error(AtLine(n) + "expected speaker, utterance and label");
    Trial t{std::string(f[0]), std::string(f[1]), false};
    if (f[2] == "target") t.is_target = true;
    else if (f[2] != "nontarget")
      throw Error(AtLine(n) + "label must be target or nontarget, got '" + std::string(f[2]) + "'");
    if (!seen.emplace(t.enroll_speaker, t.test_utt).second)
      throw Error(AtLine(n) + "duplicate trial " + t.enroll_speaker + " / " + t.test_utt);
    out.push_back(std::move(t));
  }
  return out;
}

void WriteTrials(std::ostream &os, std::span<const Trial> trials) {
  for (const auto &t : trials)
    os << t.enroll_speaker << '\t' << t.test_utt << '\t' << (t.is_target ? "target" : "nontarget")
       << '\n';
}

ScoreFile ReadScores(std::istream &is) {
  ScoreFile out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto view = StripCr(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      auto body = view.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto f = SplitOn(body, '\t');
      if (f.size() == 2) out.meta.emplace(std::string(f[0]), std::string(f[1]));
      continue;
    }
    const auto f = SplitOn(view, '\t');
    if (f.size() != 3) throw Error(AtLine(n) + "expected speaker, utterance and score");
    try {
      out.scores.push_back({std::string(f[0]), std::string(f[1]), ParseDouble(f[2])});
    } catch (const Error &e) {
      throw Error(AtLine(n) + e.what());
    }
  }
  return out;
}

void WriteScores(std::ostream &os, std::span<const ScoreRecord> scores,
                 const std::map<std::string, std::string> &meta) {
  for (const auto &[k, v] : meta) os << "# " << k << '\t' << v << '\n';
  for (const auto &s : scores)
    os << s.enroll_speaker << '\t' << s.test_utt << '\t' << FormatDouble(s.score) << '\n';
}

void WriteGroundTruth(std::ostream &os, const GroundTruth &truth) {
  os << "# nlsd simulation ground truth (x_enroll = m x_test + b, raw coordinates)\n";
  WriteMatrixKey(os, "m", truth.m);
  WriteVectorKey(os, "b", truth.b);
  WriteVectorKey(os, "test_within_pre", truth.test_within_pre);
  WriteMatrixKey(os, "test_between_cov", truth.test_between_cov);
  WriteMatrixKey(os, "test_within_cov", truth.test_within_cov);
}

GroundTruth ReadGroundTruth(std::istream &is) {
  const KeyValueDoc doc(is);
  GroundTruth t;
  t.m = doc.Rows("m");
  t.b = doc.Values("b");
  t.test_within_pre = doc.Values("test_within_pre");
  t.test_between_cov = doc.Rows("test_between_cov");
  t.test_within_cov = doc.Rows("test_within_cov");
  return t;
}

std::string ReadFileText(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteFileText(const std::string &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write '" + path + "'");
  os << text;
  if (!os.flush()) throw Error("write to '" + path + "' failed");
}

}  // namespace nlsd
