#pragma once

// JSON exchange format for measured correlations:
//   {"labels": [...], "partition": ["A", "B", ...], "pt_parity": [1, -1, ...],
//    "means": [...], "V": [...], "Omega": [...]}
// V and Omega are row-major, either flat (N*N numbers) or nested (N rows).

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "covent/criterion.hpp"

namespace covent {

/// The input could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const nlohmann::json& require_field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) throw ValidationError(std::string("correlation data: missing field '") + name + "'");
  return doc.at(name);
}

inline double number_at(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError("correlation data: " + where + " is not a number");
  return v.get<double>();
}

inline RealMatrix read_square(const nlohmann::json& node, const char* name, std::size_t n) {
  const auto en = static_cast<Eigen::Index>(n);
  const std::string field = std::string("field '") + name + "'";
  if (!node.is_array()) throw ValidationError("correlation data: " + field + " must be an array");
  RealMatrix out(en, en);
  if (!node.empty() && node.front().is_array()) {
    if (node.size() != n) {
      throw ValidationError("correlation data: " + field + " has " + std::to_string(node.size()) +
                            " rows, expected " + std::to_string(n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = node[r];
      if (!row.is_array() || row.size() != n) {
        throw ValidationError("correlation data: " + field + " row " + std::to_string(r) + " must hold " +
                              std::to_string(n) + " numbers");
      }
      for (std::size_t c = 0; c < n; ++c) {
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number_at(row[c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return out;
  }
  if (node.size() != n * n) {
    throw ValidationError("correlation data: " + field + " has " + std::to_string(node.size()) +
                          " entries, expected " + std::to_string(n * n) + " (N=" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i < n * n; ++i) {
    out(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) =
        number_at(node[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

}  // namespace detail

/// Parses and validates a correlation document. Errors name the line/column
/// for syntax problems and the field for structural ones.
inline CorrelationData parse_correlation_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("correlation data: syntax error at " + detail::line_column(text, e.byte) + ": " +
                          e.what());
  }
  if (!doc.is_object()) throw ValidationError("correlation data: top level must be an object");

  CorrelationData data;
  const auto& labels = detail::require_field(doc, "labels");
  if (!labels.is_array()) throw ValidationError("correlation data: field 'labels' must be an array");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) {
      throw ValidationError("correlation data: labels[" + std::to_string(i) + "] is not a string");
    }
    data.labels.push_back(labels[i].get<std::string>());
  }
  const std::size_t n = data.labels.size();
  if (n == 0) throw ValidationError("correlation data: field 'labels' is empty");

  auto sized_array = [&](const char* name) -> const nlohmann::json& {
    const auto& node = detail::require_field(doc, name);
    if (!node.is_array() || node.size() != n) {
      throw ValidationError(std::string("correlation data: field '") + name + "' must be an array of " +
                            std::to_string(n) + " entries");
    }
    return node;
  };

  const auto& partition = sized_array("partition");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = partition[i];
    if (p == "A") {
      data.partition.push_back(Subsystem::A);
    } else if (p == "B") {
      data.partition.push_back(Subsystem::B);
    } else {
      throw ValidationError("correlation data: partition[" + std::to_string(i) + "] must be \"A\" or \"B\"");
    }
  }
  const auto& parity = sized_array("pt_parity");
  for (std::size_t i = 0; i < n; ++i) {
    if (!parity[i].is_number_integer()) {
      throw ValidationError("correlation data: pt_parity[" + std::to_string(i) + "] must be +1 or -1");
    }
    data.pt_parity.push_back(parity[i].get<int>());
  }
  const auto& means = sized_array("means");
  data.means.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    data.means(static_cast<Eigen::Index>(i)) = detail::number_at(means[i], "means[" + std::to_string(i) + "]");
  }
  data.covariance = detail::read_square(detail::require_field(doc, "V"), "V", n);
  data.commutation = detail::read_square(detail::require_field(doc, "Omega"), "Omega", n);
  data.validate();
  return data;
}

inline CorrelationData read_correlation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_correlation_json(buf.str());
}

inline nlohmann::json to_json(const CorrelationData& data) {
  nlohmann::json doc;
  doc["labels"] = data.labels;
  auto& part = doc["partition"] = nlohmann::json::array();
  for (auto s : data.partition) part.push_back(to_string(s));
  doc["pt_parity"] = data.pt_parity;
  doc["means"] = std::vector<double>(data.means.data(), data.means.data() + data.means.size());
  auto flat = [](const RealMatrix& m) {
    std::vector<double> out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    }
    return out;
  };
  doc["V"] = flat(data.covariance);
  doc["Omega"] = flat(data.commutation);
  return doc;
}

inline void write_correlation_file(const CorrelationData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_json(data).dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace covent
