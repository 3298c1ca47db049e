#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tenscert/specific.hpp"

namespace tenscert {

// Interchange format:
//   {"shape":[5,5,5], "rank":7, "factors":[ [[...n1 x r...]], ... ]}
// with one n_k x r row-major matrix per mode and entries given as integers or
// as "p/q" strings.
inline Decomposition decomposition_from_json(const nlohmann::json& j) {
  try {
    Decomposition dec;
    if (!j.is_object() || !j.contains("shape") || !j.contains("rank") || !j.contains("factors"))
      throw ParseError("decomposition needs shape, rank and factors fields");
    for (const auto& n : j.at("shape")) {
      if (!n.is_number_integer()) throw ParseError("shape entries must be integers");
      dec.dims.push_back(n.get<int>());
    }
    if (!j.at("rank").is_number_integer()) throw ParseError("rank must be an integer");
    dec.rank = j.at("rank").get<long long>();
    if (dec.rank < 1) throw ParseError("rank must be positive");
    const RationalField field;
    for (const auto& mode : j.at("factors")) {
      if (!mode.is_array() || mode.empty()) throw ParseError("factor matrices must be arrays of rows");
      const std::size_t rows = mode.size();
      const std::size_t cols = mode.at(0).size();
      Matrix<Rational> m(rows, cols, field.zero());
      for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = mode.at(i);
        if (!row.is_array() || row.size() != cols)
          throw ParseError("ragged factor matrix");
        for (std::size_t c = 0; c < cols; ++c) {
          const auto& e = row.at(c);
          if (e.is_number_integer())
            m(i, c) = Rational(e.get<long long>());
          else if (e.is_string())
            m(i, c) = Rational::parse(e.get<std::string>());
          else
            throw ParseError("factor entries must be integers or 'p/q' strings");
        }
      }
      dec.factors.push_back(std::move(m));
    }
    dec.validate();
    return dec;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid decomposition: ") + e.what());
  }
}

inline Decomposition parse_decomposition(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return decomposition_from_json(j);
}

inline Decomposition load_decomposition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_decomposition(buf.str());
}

inline nlohmann::json decomposition_to_json(const Decomposition& dec) {
  nlohmann::json j;
  j["shape"] = dec.dims;
  j["rank"] = dec.rank;
  auto factors = nlohmann::json::array();
  for (const auto& m : dec.factors) {
    auto mode = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto row = nlohmann::json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const Rational& x = m(i, c);
        if (x.denominator() == 1 && x.numerator() >= std::numeric_limits<long long>::min() &&
            x.numerator() <= std::numeric_limits<long long>::max())
          row.push_back(static_cast<long long>(x.numerator()));
        else
          row.push_back(x.to_string());
      }
      mode.push_back(std::move(row));
    }
    factors.push_back(std::move(mode));
  }
  j["factors"] = std::move(factors);
  return j;
}

}  // namespace tenscert
