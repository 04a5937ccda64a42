#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hesca/core.hpp"

namespace hesca {

// A classification dataset: n instances of m real attributes plus a class
// label in [0, c). Immutable after construction; safe to share across threads.
struct Dataset {
  std::string name;
  std::vector<double> values;  // n * m, row-major
  std::vector<int> labels;
  std::vector<std::string> classNames;
  int n = 0;
  int m = 0;
  int c = 0;

  std::span<const double> row(int i) const {
    return std::span<const double>(values.data() + static_cast<std::size_t>(i) * m, m);
  }
};

inline void validateDataset(const Dataset& d) {
  if (d.n < 1) throw Error("dataset '" + d.name + "': no instances");
  if (d.m < 1) throw Error("dataset '" + d.name + "': no attributes");
  if (d.c < 2) throw Error("dataset '" + d.name + "': needs at least 2 classes");
  if (static_cast<int>(d.classNames.size()) != d.c)
    throw Error("dataset '" + d.name + "': class name count mismatch");
  if (static_cast<int>(d.labels.size()) != d.n ||
      d.values.size() != static_cast<std::size_t>(d.n) * d.m)
    throw Error("dataset '" + d.name + "': shape mismatch");
  std::vector<int> seen(d.c, 0);
  for (int y : d.labels) {
    if (y < 0 || y >= d.c) throw Error("dataset '" + d.name + "': label out of range");
    seen[y] = 1;
  }
  for (int j = 0; j < d.c; ++j)
    if (!seen[j])
      throw Error("dataset '" + d.name + "': class '" + d.classNames[j] + "' never observed");
  for (double v : d.values)
    if (!std::isfinite(v)) throw Error("dataset '" + d.name + "': non-finite attribute value");
}

inline Dataset makeDataset(std::string name, std::vector<double> values,
                           std::vector<int> labels, std::vector<std::string> classNames,
                           int m) {
  Dataset d;
  d.name = std::move(name);
  d.values = std::move(values);
  d.labels = std::move(labels);
  d.classNames = std::move(classNames);
  d.m = m;
  d.n = static_cast<int>(d.labels.size());
  d.c = static_cast<int>(d.classNames.size());
  validateDataset(d);
  return d;
}

inline std::vector<int> classCounts(const Dataset& d) {
  std::vector<int> counts(d.c, 0);
  for (int y : d.labels) ++counts[y];
  return counts;
}

// Entry j = count_j / n; on a train split these are the class proportions
// used as balanced-error and AUROC weights.
inline std::vector<double> classDistribution(const Dataset& d) {
  std::vector<double> dist(d.c, 0.0);
  for (int y : d.labels) dist[y] += 1.0;
  for (double& v : dist) v /= static_cast<double>(d.n);
  return dist;
}

enum class DataFormat { Csv, Arff };

struct LoadOptions {
  // CSV only: class column name; empty means a column named "class" if present,
  // otherwise the last column.
  std::string classColumn;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

inline bool parseDouble(const std::string& token, double& out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// One RFC-4180-style record; handles quoted fields and embedded commas.
inline std::vector<std::string> splitCsvLine(const std::string& line, int lineNo) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", lineNo);
  fields.push_back(cur);
  return fields;
}

inline std::string stripCr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace detail

// CSV with a header row. Class tokens are mapped to indices in order of first
// appearance; a new token in a later row extends the mapping.
inline Dataset loadCsv(std::istream& in, const std::string& name,
                       const LoadOptions& opts = {}) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV stream");
  line = detail::stripCr(line);
  const std::vector<std::string> header = detail::splitCsvLine(line, 1);
  const int cols = static_cast<int>(header.size());
  if (cols < 2) throw ParseError("CSV needs at least one attribute and a class column", 1);

  int classCol = -1;
  if (!opts.classColumn.empty()) {
    for (int j = 0; j < cols; ++j)
      if (detail::trim(header[j]) == opts.classColumn) classCol = j;
    if (classCol < 0) throw ParseError("class column '" + opts.classColumn + "' not in header", 1);
  } else {
    for (int j = 0; j < cols; ++j)
      if (detail::trim(header[j]) == "class") classCol = j;
    if (classCol < 0) classCol = cols - 1;
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> classNames;
  int dataRow = 0;
  while (std::getline(in, line)) {
    line = detail::stripCr(line);
    if (line.empty()) continue;
    ++dataRow;
    const std::vector<std::string> fields = detail::splitCsvLine(line, dataRow + 1);
    if (static_cast<int>(fields.size()) != cols)
      throw ParseError("ragged row: expected " + std::to_string(cols) + " fields, got " +
                           std::to_string(fields.size()),
                       dataRow, static_cast<int>(fields.size()));
    for (int j = 0; j < cols; ++j) {
      if (j == classCol) {
        const std::string token = detail::trim(fields[j]);
        auto it = std::find(classNames.begin(), classNames.end(), token);
        if (it == classNames.end()) {
          classNames.push_back(token);
          labels.push_back(static_cast<int>(classNames.size()) - 1);
        } else {
          labels.push_back(static_cast<int>(it - classNames.begin()));
        }
      } else {
        double v = 0.0;
        if (!detail::parseDouble(fields[j], v))
          throw ParseError("non-numeric attribute value '" + detail::trim(fields[j]) + "'",
                           dataRow, j + 1);
        values.push_back(v);
      }
    }
  }
  return makeDataset(name, std::move(values), std::move(labels), std::move(classNames),
                     cols - 1);
}

// ARFF with numeric attributes and a single nominal attribute that acts as the
// class. Class names take declaration order. Sparse ARFF is unsupported.
inline Dataset loadArff(std::istream& in, const std::string& name) {
  std::string line;
  int lineNo = 0;
  std::vector<std::string> classNames;
  int classAttr = -1;
  int attrCount = 0;
  bool inData = false;

  std::vector<double> values;
  std::vector<int> labels;
  std::string relationName = name;
  int dataRow = 0;

  while (std::getline(in, line)) {
    ++lineNo;
    line = detail::stripCr(line);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed[0] == '%') continue;
    if (!inData) {
      const std::string low = detail::lower(trimmed);
      if (low.rfind("@relation", 0) == 0) {
        const std::string rest = detail::trim(trimmed.substr(9));
        if (!rest.empty()) relationName = rest;
      } else if (low.rfind("@attribute", 0) == 0) {
        std::string rest = detail::trim(trimmed.substr(10));
        const std::size_t brace = rest.find('{');
        if (brace != std::string::npos) {
          if (classAttr >= 0)
            throw ParseError("multiple nominal attributes; only a nominal class is supported",
                             lineNo);
          const std::size_t close = rest.find('}', brace);
          if (close == std::string::npos) throw ParseError("unterminated nominal domain", lineNo);
          std::stringstream domain(rest.substr(brace + 1, close - brace - 1));
          std::string token;
          while (std::getline(domain, token, ',')) {
            token = detail::trim(token);
            if (!token.empty()) classNames.push_back(token);
          }
          if (classNames.size() < 2) throw ParseError("nominal class needs >= 2 values", lineNo);
          classAttr = attrCount;
        } else {
          const std::string kind = detail::lower(rest.substr(rest.find_last_of(" \t") + 1));
          if (kind != "numeric" && kind != "real" && kind != "integer")
            throw ParseError("unsupported attribute type '" + kind + "'", lineNo);
        }
        ++attrCount;
      } else if (low.rfind("@data", 0) == 0) {
        if (classAttr < 0) throw ParseError("no nominal class attribute declared", lineNo);
        if (attrCount < 2) throw ParseError("ARFF needs at least one numeric attribute", lineNo);
        inData = true;
      } else {
        throw ParseError("unrecognized header line", lineNo);
      }
      continue;
    }
    if (trimmed[0] == '{') throw ParseError("sparse ARFF is unsupported", lineNo);
    ++dataRow;
    const std::vector<std::string> fields = detail::splitCsvLine(trimmed, lineNo);
    if (static_cast<int>(fields.size()) != attrCount)
      throw ParseError("ragged row: expected " + std::to_string(attrCount) + " fields, got " +
                           std::to_string(fields.size()),
                       dataRow, static_cast<int>(fields.size()));
    for (int j = 0; j < attrCount; ++j) {
      if (j == classAttr) {
        const std::string token = detail::trim(fields[j]);
        const auto it = std::find(classNames.begin(), classNames.end(), token);
        if (it == classNames.end())
          throw ParseError("class token '" + token + "' not in declared domain", dataRow, j + 1);
        labels.push_back(static_cast<int>(it - classNames.begin()));
      } else {
        double v = 0.0;
        if (!detail::parseDouble(fields[j], v))
          throw ParseError("non-numeric attribute value '" + detail::trim(fields[j]) + "'",
                           dataRow, j + 1);
        values.push_back(v);
      }
    }
  }
  if (!inData) throw ParseError("missing @data section");
  return makeDataset(relationName, std::move(values), std::move(labels), std::move(classNames),
                     attrCount - 1);
}

inline Dataset loadDataset(std::istream& in, DataFormat format, const std::string& name,
                           const LoadOptions& opts = {}) {
  return format == DataFormat::Csv ? loadCsv(in, name, opts) : loadArff(in, name);
}

}  // namespace hesca
