#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tenscert/errors.hpp"

namespace tenscert {

// Mode size tuple n_1 >= n_2 >= ... >= n_d, each >= 2, d >= 3. The
// constructor normalizes to descending order. Mode sizes of 1 are rejected;
// callers must squeeze them out beforehand.
class Shape {
 public:
  explicit Shape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 3)
      throw InvalidShape("a shape needs at least 3 modes");
    for (int n : dims_)
      if (n < 2) throw InvalidShape("every mode size must be at least 2");
    std::sort(dims_.begin(), dims_.end(), std::greater<int>());
  }

  const std::vector<int>& dims() const { return dims_; }
  int order() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(dims_[i]);
    }
    return s;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }
  friend bool operator<(const Shape& a, const Shape& b) { return a.dims_ < b.dims_; }

 private:
  std::vector<int> dims_;
};

inline Shape parse_shape(std::string_view text) {
  std::vector<int> dims;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      dims.push_back(v);
    } catch (const std::exception&) {
      throw InvalidShape("cannot parse mode size '" + token + "'");
    }
  }
  if (dims.empty()) throw InvalidShape("empty shape");
  return Shape(std::move(dims));
}

struct DerivedQuantities {
  long long pi;       // product of mode sizes
  long long sigma;    // sum of (n_i - 1), the Segre dimension
  long long rbar;     // ceil(pi / (1 + sigma)) - 1
  bool perfect;       // (1 + sigma) divides pi exactly
  long long ell(long long r) const { return pi - r * (sigma + 1); }
};

inline long long product_of(std::span<const int> dims) {
  long long pi = 1;
  for (int n : dims) {
    if (pi > (1LL << 40) / n)
      throw TooLarge("shape too large: product of mode sizes exceeds 2^40");
    pi *= n;
  }
  return pi;
}

inline DerivedQuantities derive(const Shape& shape) {
  DerivedQuantities d{};
  d.pi = product_of(shape.dims());
  d.sigma = 0;
  for (int n : shape.dims()) d.sigma += n - 1;
  const long long denom = 1 + d.sigma;
  d.perfect = (d.pi % denom) == 0;
  d.rbar = (d.pi + denom - 1) / denom - 1;
  return d;
}

// Fixed bijection between multi-indices and linear indices, row-major with the
// last mode running fastest. Zero-based; the one-based m(.) of the hyperplane
// coefficients is linear_index + 1.
inline std::size_t linear_index(std::span<const int> dims, std::span<const int> multi) {
  if (multi.size() != dims.size()) throw IndexOutOfRange("multi-index order mismatch");
  std::size_t lin = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (multi[k] < 0 || multi[k] >= dims[k])
      throw IndexOutOfRange("multi-index entry out of range");
    lin = lin * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(multi[k]);
  }
  return lin;
}

inline std::vector<int> multi_index(std::span<const int> dims, std::size_t lin) {
  std::vector<int> multi(dims.size(), 0);
  for (std::size_t k = dims.size(); k-- > 0;) {
    multi[k] = static_cast<int>(lin % static_cast<std::size_t>(dims[k]));
    lin /= static_cast<std::size_t>(dims[k]);
  }
  if (lin != 0) throw IndexOutOfRange("linear index out of range");
  return multi;
}

enum class ExceptionKind { Defective, Sporadic, Unbalanced };

inline const char* to_string(ExceptionKind kind) {
  switch (kind) {
    case ExceptionKind::Defective: return "defective";
    case ExceptionKind::Sporadic: return "sporadic";
    case ExceptionKind::Unbalanced: return "unbalanced";
  }
  return "?";
}

struct ExceptionInfo {
  ExceptionKind kind;
  const char* citation;  // bibliography tag of the source establishing the row
};

// Catalog of the known spaces where generic r-identifiability fails for
// subgeneric r. Shapes are matched in sorted-descending normal form. The
// family (n,n,3) with n odd is absent on purpose: it only fails at rbar+1.
inline std::optional<ExceptionInfo> exception_lookup(const Shape& shape, long long r) {
  const auto& n = shape.dims();
  auto is = [&](std::initializer_list<int> t) {
    return std::equal(n.begin(), n.end(), t.begin(), t.end());
  };
  if (is({4, 4, 3}) && r == 5) return ExceptionInfo{ExceptionKind::Defective, "AOP09"};
  if (is({4, 4, 4}) && r == 6) return ExceptionInfo{ExceptionKind::Sporadic, "CO12"};
  if (is({6, 6, 3}) && r == 8) return ExceptionInfo{ExceptionKind::Sporadic, "CMO14"};
  if (n.size() == 4 && n[0] == n[1] && n[2] == 2 && n[3] == 2 && r == 2 * n[0] - 1)
    return ExceptionInfo{ExceptionKind::Defective, "AOP09"};
  if (is({2, 2, 2, 2, 2}) && r == 5) return ExceptionInfo{ExceptionKind::Sporadic, "BC13"};
  // unbalanced: n_1 exceeds the product-minus-sum threshold of the tail modes
  long long tail_pi = 1;
  long long tail_sigma = 0;
  for (std::size_t i = 1; i < n.size(); ++i) {
    tail_pi *= n[i];
    tail_sigma += n[i] - 1;
  }
  const long long threshold = tail_pi - tail_sigma;
  if (n[0] > threshold && r >= threshold)
    return ExceptionInfo{ExceptionKind::Unbalanced, "BCO14"};
  return std::nullopt;
}

// Largest r satisfying 2r <= min(n1,r) + min(n2,r) + min(n3,r) - 2.
inline long long kruskal_generic_bound(const Shape& shape) {
  if (shape.order() != 3)
    throw NotApplicable("the Kruskal generic bound is defined for 3 modes");
  const auto& n = shape.dims();
  long long best = 0;
  const long long rmax = (n[0] + n[1] + n[2]) / 2 + 1;
  for (long long r = 1; r <= rmax; ++r) {
    const long long lhs = 2 * r;
    const long long rhs = std::min<long long>(n[0], r) + std::min<long long>(n[1], r) +
                          std::min<long long>(n[2], r) - 2;
    if (lhs <= rhs) best = r;
  }
  return best;
}

}  // namespace tenscert
