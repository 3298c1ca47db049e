#pragma once

#include <stdexcept>
#include <string>

namespace tenscert {

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero field element") {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct InvalidShape : std::invalid_argument {
  explicit InvalidShape(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidRank : std::invalid_argument {
  explicit InvalidRank(const std::string& what) : std::invalid_argument(what) {}
};

struct NotApplicable : std::invalid_argument {
  explicit NotApplicable(const std::string& what) : std::invalid_argument(what) {}
};

struct TooLarge : std::invalid_argument {
  explicit TooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A per-mode basis completion came out singular; callers may retry with a
// different completion seed.
struct SingularBasisCompletion : std::runtime_error {
  explicit SingularBasisCompletion(const std::string& what) : std::runtime_error(what) {}
};

// A contraction map has lower rank than a rank-r input guarantees; the kernel
// would not be meaningful, so the smoothness certificate cannot proceed.
struct RankShortfall : std::runtime_error {
  explicit RankShortfall(const std::string& what) : std::runtime_error(what) {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace tenscert
