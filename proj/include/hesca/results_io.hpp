#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hesca/prediction_set.hpp"

namespace hesca {

// On-disk prediction set, bit-exact with LF line endings:
//   #meta,dataset=<name>,classifier=<name>,resample=<int>,split=<train|test>
//   #params,<free text, commas escaped as \,>
//   #trainEstimate,<accuracy, 6 decimal places>
//   <trueClass>,<predClass>,<p_0>,...,<p_{c-1}>     (probabilities at 6 dp)
//
// The stored predicted class is re-derived from the rounded probabilities so
// it is always the tie-broken argmax of what the file actually contains.

namespace results_detail {

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string escapeCommas(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '\\') out += "\\\\";
    else if (ch == ',') out += "\\,";
    else out += ch;
  }
  return out;
}

inline std::string unescapeCommas(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s[i + 1];
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

inline double parseDoubleOrThrow(const std::string& token, int line) {
  double v = 0.0;
  const char* begin = token.data();
  auto [ptr, ec] = std::from_chars(begin, begin + token.size(), v);
  if (ec != std::errc() || ptr != begin + token.size())
    throw ParseError("bad number '" + token + "'", line);
  return v;
}

inline int parseIntOrThrow(const std::string& token, int line) {
  int v = 0;
  const char* begin = token.data();
  auto [ptr, ec] = std::from_chars(begin, begin + token.size(), v);
  if (ec != std::errc() || ptr != begin + token.size())
    throw ParseError("bad integer '" + token + "'", line);
  return v;
}

inline std::vector<std::string> splitEscaped(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && i + 1 < line.size()) {
      cur += line[i];
      cur += line[i + 1];
      ++i;
    } else if (line[i] == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += line[i];
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace results_detail

inline std::string serializeResults(const PredictionSet& p) {
  using results_detail::fmt6;
  std::string out;
  out += "#meta,dataset=" + p.datasetName + ",classifier=" + p.classifierName +
         ",resample=" + std::to_string(p.resampleId) + ",split=" + p.splitTag + "\n";
  out += "#params," + results_detail::escapeCommas(p.paramsText) + "\n";
  out += "#trainEstimate," + fmt6(p.trainEstimate) + "\n";
  ProbVector rounded;
  for (const auto& rec : p.records) {
    rounded.resize(rec.dist.size());
    std::string probs;
    for (std::size_t j = 0; j < rec.dist.size(); ++j) {
      const std::string text = fmt6(rec.dist[j]);
      std::from_chars(text.data(), text.data() + text.size(), rounded[j]);
      probs += ",";
      probs += text;
    }
    out += std::to_string(rec.trueClass) + "," +
           std::to_string(argmaxLowestTie(rounded)) + probs + "\n";
  }
  return out;
}

inline void writeResults(const PredictionSet& p, const std::filesystem::path& path) {
  validatePredictionSet(p);
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << serializeResults(p);
}

inline PredictionSet parseResults(std::istream& in) {
  using namespace results_detail;
  PredictionSet p;
  std::string line;

  if (!std::getline(in, line)) throw ParseError("missing #meta line", 1);
  if (line.rfind("#meta,", 0) != 0) throw ParseError("expected #meta header", 1);
  for (const std::string& field : splitEscaped(line.substr(6))) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("bad #meta field '" + field + "'", 1);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "dataset") p.datasetName = value;
    else if (key == "classifier") p.classifierName = value;
    else if (key == "resample") p.resampleId = parseIntOrThrow(value, 1);
    else if (key == "split") p.splitTag = value;
    else throw ParseError("unknown #meta key '" + key + "'", 1);
  }
  if (p.splitTag != "train" && p.splitTag != "test")
    throw ParseError("split must be train or test", 1);

  if (!std::getline(in, line)) throw ParseError("missing #params line", 2);
  if (line.rfind("#params,", 0) != 0) throw ParseError("expected #params header", 2);
  p.paramsText = unescapeCommas(line.substr(8));

  if (!std::getline(in, line)) throw ParseError("missing #trainEstimate line", 3);
  if (line.rfind("#trainEstimate,", 0) != 0)
    throw ParseError("expected #trainEstimate header", 3);
  p.trainEstimate = parseDoubleOrThrow(line.substr(15), 3);
  if (p.trainEstimate < 0.0 || p.trainEstimate > 1.0)
    throw ParseError("trainEstimate outside [0,1]", 3);

  int lineNo = 3;
  int classCount = -1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (static_cast<int>(fields.size()) < 4)
      throw ParseError("record needs trueClass, predClass and >= 2 probabilities", lineNo);
    if (classCount < 0) classCount = static_cast<int>(fields.size()) - 2;
    if (static_cast<int>(fields.size()) - 2 != classCount)
      throw ParseError("inconsistent class count", lineNo);

    PredictionRecord rec;
    rec.trueClass = parseIntOrThrow(fields[0], lineNo);
    rec.predictedClass = parseIntOrThrow(fields[1], lineNo);
    rec.dist.resize(classCount);
    double sum = 0.0;
    for (int j = 0; j < classCount; ++j) {
      const double v = parseDoubleOrThrow(fields[j + 2], lineNo);
      if (v < 0.0 || v > 1.0) throw ParseError("probability outside [0,1]", lineNo);
      rec.dist[j] = v;
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-4)
      throw ParseError("probabilities sum to " + results_detail::fmt6(sum), lineNo);
    if (rec.trueClass < 0 || rec.trueClass >= classCount)
      throw ParseError("true class out of range", lineNo);
    if (rec.predictedClass != argmaxLowestTie(rec.dist))
      throw ParseError("predicted class is not the argmax of the probabilities", lineNo);
    p.records.push_back(std::move(rec));
  }
  if (p.records.empty()) throw ParseError("no prediction records", lineNo + 1);
  return p;
}

inline PredictionSet readResults(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  try {
    return parseResults(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace hesca
