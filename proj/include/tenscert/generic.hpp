#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tenscert/hessian.hpp"
#include "tenscert/shape.hpp"
#include "tenscert/tangent.hpp"

namespace tenscert {

struct GenericConfig {
  std::uint32_t prime = 127;
  int retries = 3;
  std::uint32_t escalate_prime = 8191;  // one extra pass when still unproved
  bool all_points = false;              // verify the Hessian at every point
  std::uint64_t seed = 0;
  bool use_exception_catalog = true;
};

enum class GenericOutcome {
  Proved,
  ProvedWeaklyDefectivePath,
  Inconclusive,
  DefectiveSuspected,
  KnownException,
};

inline const char* to_string(GenericOutcome o) {
  switch (o) {
    case GenericOutcome::Proved: return "proved";
    case GenericOutcome::ProvedWeaklyDefectivePath: return "proved_s7a";
    case GenericOutcome::Inconclusive: return "inconclusive";
    case GenericOutcome::DefectiveSuspected: return "defective_suspected";
    case GenericOutcome::KnownException: return "known_exception";
  }
  return "?";
}

struct AttemptInfo {
  std::uint32_t prime;
  std::uint64_t seed;
  long long kernel_rows;
  bool gate_failed;
  std::vector<long long> hessian_ranks;  // one per checked point
};

struct Verdict {
  GenericOutcome outcome;
  std::optional<ExceptionInfo> exception;
  int attempts = 0;
  std::uint32_t prime = 0;  // field of the final attempt
  std::uint64_t seed = 0;
  long long ell = -1;
  long long target = -1;
  long long hessian_rank = -1;
  HessianPath path = HessianPath::Standard;
  std::string reason;
  std::vector<AttemptInfo> attempt_log;
  long long elapsed_ms = 0;

  bool proved() const {
    return outcome == GenericOutcome::Proved ||
           outcome == GenericOutcome::ProvedWeaklyDefectivePath;
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

// One full pass of the criterion at a fixed prime: sample, assemble the
// tangent-span matrix, kernel, defectivity gate, rank-target classification,
// Hessian ranks.
namespace detail {

struct AttemptResult {
  AttemptInfo info;
  bool proved = false;
  HessianTarget mode{HessianPath::Standard, 0, 0};
  long long ell = -1;
};

inline AttemptResult run_attempt(const Shape& shape, long long r,
                                 std::uint32_t prime, std::uint64_t attempt_seed,
                                 bool all_points) {
  const PrimeField field(prime);
  AttemptResult res;
  res.info.prime = prime;
  res.info.seed = attempt_seed;
  res.info.gate_failed = false;

  const auto points =
      sample_points(field, shape.dims(), r, attempt_seed, /*canonical_first=*/!all_points);
  // Trimming deletes the last column of every non-first mode block, which
  // keeps the span only when those factors have a nonzero last coordinate.
  // The canonical first point never does, so a trimmed pass would always be
  // rank-deficient there; go straight to the untrimmed assembly then.
  const bool trim_first = all_points;
  auto assembly = assemble(field, shape, points, trim_first);
  auto kernel = hyperplane_kernel(field, assembly);
  if (trim_first && kernel.status == KernelStatus::DefectiveSuspected) {
    assembly = assemble(field, shape, points, /*trim=*/false);
    kernel = hyperplane_kernel(field, assembly);
  }
  res.info.kernel_rows = static_cast<long long>(kernel.coeffs.rows());
  res.ell = assembly.expected_ell;
  if (kernel.status == KernelStatus::DefectiveSuspected) {
    res.info.gate_failed = true;
    return res;
  }

  res.mode = classify_hessian_target(shape, res.ell);
  bool all_ok = true;
  if (!all_points) {
    const auto hess = canonical_hessian(field, kernel.coeffs, shape.dims());
    const auto verdict = hessian_verdict(hess, res.mode);
    res.info.hessian_ranks.push_back(verdict.rank);
    all_ok = verdict.proved;
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto hess = point_hessian(field, kernel.coeffs, shape.dims(), points[i],
                                      static_cast<int>(i));
      const auto verdict = hessian_verdict(hess, res.mode);
      res.info.hessian_ranks.push_back(verdict.rank);
      if (!verdict.proved) {
        all_ok = false;
        break;
      }
    }
  }
  res.proved = all_ok;
  return res;
}

}  // namespace detail

inline Verdict check_generic(const Shape& shape, long long r, const GenericConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = derive(shape);
  if (r < 1) throw InvalidRank("rank must be at least 1");
  if (r > q.rbar)
    throw InvalidRank("rank " + std::to_string(r) + " exceeds rbar = " +
                      std::to_string(q.rbar) + " for shape " + shape.to_string() +
                      ", out of scope");
  if (config.retries < 1) throw InvalidRank("retries must be at least 1");

  Verdict verdict;
  verdict.seed = config.seed;
  verdict.ell = q.ell(r);

  auto finish = [&](Verdict v) {
    v.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return v;
  };

  if (config.use_exception_catalog) {
    if (auto exc = exception_lookup(shape, r)) {
      verdict.outcome = GenericOutcome::KnownException;
      verdict.exception = exc;
      verdict.reason = std::string("known ") + to_string(exc->kind) + " case";
      return finish(std::move(verdict));
    }
  }

  std::vector<std::pair<int, std::uint32_t>> schedule;
  for (int a = 0; a < config.retries; ++a) schedule.emplace_back(a, config.prime);
  if (config.escalate_prime != 0)
    schedule.emplace_back(config.retries, config.escalate_prime);

  bool all_gate_failed = true;
  for (const auto& [index, prime] : schedule) {
    const std::uint64_t attempt_seed =
        mix_seed(config.seed, mix_seed(static_cast<std::uint64_t>(index), prime));
    auto attempt = detail::run_attempt(shape, r, prime, attempt_seed, config.all_points);
    verdict.attempt_log.push_back(attempt.info);
    ++verdict.attempts;
    verdict.prime = prime;
    if (!attempt.info.gate_failed) {
      all_gate_failed = false;
      verdict.target = attempt.mode.target;
      verdict.path = attempt.mode.path;
      if (!attempt.info.hessian_ranks.empty())
        verdict.hessian_rank = attempt.info.hessian_ranks.front();
    }
    if (attempt.proved) {
      verdict.outcome = attempt.mode.path == HessianPath::WeaklyDefective
                            ? GenericOutcome::ProvedWeaklyDefectivePath
                            : GenericOutcome::Proved;
      return finish(std::move(verdict));
    }
  }

  if (all_gate_failed) {
    verdict.outcome = GenericOutcome::DefectiveSuspected;
    verdict.reason = "tangent kernel larger than ell = " + std::to_string(verdict.ell) +
                     " in every attempt; the secant variety may be defective";
  } else {
    verdict.outcome = GenericOutcome::Inconclusive;
    std::string detail = "hessian rank below target " + std::to_string(verdict.target) + ":";
    for (const auto& a : verdict.attempt_log) {
      detail += " [q=" + std::to_string(a.prime);
      if (a.gate_failed) {
        detail += " kernel=" + std::to_string(a.kernel_rows) + " (gate failed)]";
      } else {
        detail += " ranks=";
        for (std::size_t i = 0; i < a.hessian_ranks.size(); ++i)
          detail += (i ? "," : "") + std::to_string(a.hessian_ranks[i]);
        detail += "]";
      }
    }
    verdict.reason = detail + "; not evidence of non-identifiability";
  }
  return finish(std::move(verdict));
}

}  // namespace tenscert
