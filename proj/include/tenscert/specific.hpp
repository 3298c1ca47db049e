#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tenscert/field.hpp"
#include "tenscert/hessian.hpp"
#include "tenscert/matrix.hpp"
#include "tenscert/shape.hpp"
#include "tenscert/smooth.hpp"
#include "tenscert/tangent.hpp"
#include "tenscert/tensor.hpp"

namespace tenscert {

// A rank-r decomposition with exact rational factor matrices; column i of
// factor k is the mode-k vector of the i-th rank-one term. Mode sizes must be
// given in non-increasing order (permute modes beforehand if necessary).
struct Decomposition {
  std::vector<int> dims;
  long long rank = 0;
  std::vector<Matrix<Rational>> factors;

  void validate() const {
    if (dims.size() < 3) throw InvalidShape("a decomposition needs at least 3 modes");
    for (std::size_t k = 1; k < dims.size(); ++k)
      if (dims[k] > dims[k - 1])
        throw InvalidShape("mode sizes must be non-increasing; permute the modes first");
    for (int n : dims)
      if (n < 2) throw InvalidShape("every mode size must be at least 2");
    if (rank < 1) throw InvalidRank("decomposition rank must be at least 1");
    if (factors.size() != dims.size())
      throw InvalidShape("need one factor matrix per mode");
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (factors[k].rows() != static_cast<std::size_t>(dims[k]) ||
          factors[k].cols() != static_cast<std::size_t>(rank))
        throw InvalidShape("factor matrix " + std::to_string(k + 1) +
                           " has the wrong size");
      for (std::size_t i = 0; i < factors[k].cols(); ++i) {
        bool nonzero = false;
        for (std::size_t row = 0; row < factors[k].rows(); ++row)
          nonzero |= !factors[k](row, i).is_zero();
        if (!nonzero)
          throw InvalidShape("zero column in factor matrix " + std::to_string(k + 1));
      }
    }
  }

  std::vector<RankOnePoint<Rational>> points() const {
    std::vector<RankOnePoint<Rational>> pts;
    for (std::size_t i = 0; i < static_cast<std::size_t>(rank); ++i) {
      RankOnePoint<Rational> p;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        std::vector<Rational> f;
        for (std::size_t row = 0; row < factors[k].rows(); ++row)
          f.push_back(factors[k](row, i));
        p.factors.push_back(std::move(f));
      }
      pts.push_back(std::move(p));
    }
    return pts;
  }

  Tensor<Rational> tensor() const {
    const RationalField field;
    Tensor<Rational> t = zero_tensor(field, dims);
    for (const auto& p : points()) accumulate_rank_one(t, p.factors, field.one());
    return t;
  }
};

namespace detail {

// Solves Q X = A exactly for Q of full column rank.
template <class K>
Matrix<typename K::Element> solve_full_column_rank([[maybe_unused]] const K& field,
                                                   const Matrix<typename K::Element>& q,
                                                   const Matrix<typename K::Element>& a) {
  using F = typename K::Element;
  const std::size_t n = q.rows();
  const std::size_t rk = q.cols();
  Matrix<F> aug = hconcat(q, a);
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < rk; ++pc) {
    std::size_t piv = pr;
    while (piv < n && aug(piv, pc).is_zero()) ++piv;
    if (piv == n) throw InternalError("basis matrix lost column rank");
    aug.swap_rows(piv, pr);
    const F pivot = aug(pr, pc);
    for (std::size_t j = pc; j < aug.cols(); ++j) aug(pr, j) /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pr || aug(i, pc).is_zero()) continue;
      const F f = aug(i, pc);
      for (std::size_t j = pc; j < aug.cols(); ++j) aug(i, j) -= f * aug(pr, j);
    }
    ++pr;
  }
  for (std::size_t i = rk; i < n; ++i)
    for (std::size_t j = rk; j < aug.cols(); ++j)
      if (!aug(i, j).is_zero())
        throw InternalError("right-hand side outside the basis column space");
  return aug.submatrix(0, rk, rk, a.cols());
}

}  // namespace detail

struct CompressResult {
  Decomposition core;                   // modes sorted by core dimension
  std::vector<Matrix<Rational>> bases;  // per core mode: maps core mode into the input mode
  std::vector<std::size_t> mode_order;  // core mode j came from input mode mode_order[j]
  std::vector<long long> factor_ranks;  // per input mode
};

// Multilinear-rank compression: each factor matrix is replaced by exact
// coordinates with respect to a column-space basis. Identifiability of the
// input and of the core are equivalent, so all later stages run on the core.
inline CompressResult compress(const Decomposition& dec) {
  dec.validate();
  const RationalField field;
  const std::size_t d = dec.dims.size();

  std::vector<Matrix<Rational>> bases;
  std::vector<Matrix<Rational>> core_factors;
  std::vector<long long> ranks;
  for (std::size_t k = 0; k < d; ++k) {
    const auto ech = row_echelon(dec.factors[k]);
    ranks.push_back(static_cast<long long>(ech.rank));
    if (ech.rank == static_cast<std::size_t>(dec.dims[k])) {
      bases.push_back(identity(field, ech.rank));
      core_factors.push_back(dec.factors[k]);
      continue;
    }
    if (ech.rank == 0) throw InternalError("factor matrix of rank 0");
    // pivot columns of the factor matrix form a basis of its column space
    Matrix<Rational> q(dec.factors[k].rows(), ech.rank, field.zero());
    for (std::size_t c = 0; c < ech.rank; ++c)
      for (std::size_t row = 0; row < q.rows(); ++row)
        q(row, c) = dec.factors[k](row, ech.pivot_cols[c]);
    core_factors.push_back(detail::solve_full_column_rank(field, q, dec.factors[k]));
    bases.push_back(std::move(q));
  }

  // sort core modes into non-increasing order, tracking provenance
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranks[a] > ranks[b]; });

  CompressResult out;
  out.factor_ranks = ranks;
  out.mode_order = order;
  out.core.rank = dec.rank;
  for (std::size_t j = 0; j < d; ++j) {
    out.core.dims.push_back(static_cast<int>(ranks[order[j]]));
    out.core.factors.push_back(core_factors[order[j]]);
    out.bases.push_back(bases[order[j]]);
  }
  out.core.validate();
  return out;
}

struct KruskalResult {
  bool certified;
  std::vector<long long> kranks;
  long long twice_bound;  // k1 + k2 + k3 - 2; certified iff 2r <= this
};

namespace detail {

inline bool all_subsets_independent(const Matrix<Rational>& a, int k) {
  const int r = static_cast<int>(a.cols());
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  const RationalField field;
  for (;;) {
    Matrix<Rational> sub(a.rows(), static_cast<std::size_t>(k), field.zero());
    for (int c = 0; c < k; ++c)
      for (std::size_t row = 0; row < a.rows(); ++row)
        sub(row, static_cast<std::size_t>(c)) = a(row, static_cast<std::size_t>(idx[static_cast<std::size_t>(c)]));
    if (bareiss_rank(sub) != static_cast<std::size_t>(k)) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == r - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline long long krank(const Matrix<Rational>& a) {
  const long long cap = std::min<long long>(static_cast<long long>(a.rows()),
                                            static_cast<long long>(a.cols()));
  long long k = 0;
  while (k < cap && all_subsets_independent(a, static_cast<int>(k + 1))) ++k;
  return k;
}

}  // namespace detail

// Exhaustive k-rank computation and the classical three-factor test
// 2r <= k1 + k2 + k3 - 2. Subset enumeration is capped.
inline KruskalResult kruskal_specific(const Decomposition& dec, long long max_rank_cap = 14) {
  dec.validate();
  if (dec.dims.size() != 3)
    throw NotApplicable("the Kruskal test is defined for 3 modes");
  if (dec.rank > max_rank_cap)
    throw TooLarge("rank " + std::to_string(dec.rank) +
                   " exceeds the subset-enumeration cap " + std::to_string(max_rank_cap));
  KruskalResult res;
  for (const auto& f : dec.factors) res.kranks.push_back(detail::krank(f));
  res.twice_bound = res.kranks[0] + res.kranks[1] + res.kranks[2] - 2;
  res.certified = 2 * dec.rank <= res.twice_bound;
  return res;
}

enum class SpecificOutcome {
  Unique,
  UniqueAssumingNonsingular,  // smoothness stage skipped on request
  ModularEvidence,            // all stages passed, but over GF(q) only
  Inconclusive,
};

inline const char* to_string(SpecificOutcome o) {
  switch (o) {
    case SpecificOutcome::Unique: return "unique";
    case SpecificOutcome::UniqueAssumingNonsingular: return "unique_assuming_nonsingularity";
    case SpecificOutcome::ModularEvidence: return "modular_evidence";
    case SpecificOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

enum class SpecificStage { Compression, Smoothness, KernelCount, HessianAtPoint };

inline const char* to_string(SpecificStage s) {
  switch (s) {
    case SpecificStage::Compression: return "compression";
    case SpecificStage::Smoothness: return "smoothness";
    case SpecificStage::KernelCount: return "kernel_count";
    case SpecificStage::HessianAtPoint: return "hessian_at_point";
  }
  return "?";
}

struct SpecificConfig {
  int p = 0;          // 0 = floor(n3/2) on the core shape
  int rotations = 1;  // starting rotation count; escalates to 3 on shortfall
  bool exact = true;  // false = modular prescreen over GF(prime)
  std::uint32_t prime = 8191;
  bool skip_smoothness = false;
};

struct SpecificReport {
  std::vector<long long> factor_ranks;
  std::vector<int> core_dims;
  std::optional<SmoothnessCertificate> smoothness;
  Applicability applicability = Applicability::OutOfTabulatedRange;
  long long tangent_rows = 0, tangent_cols = 0;
  long long ell = -1, kernel_rows = -1;
  long long sigma = -1;
  std::vector<long long> hessian_ranks;
};

struct SpecificVerdict {
  SpecificOutcome outcome = SpecificOutcome::Inconclusive;
  std::optional<SpecificStage> failed_stage;
  int failed_point = -1;
  std::string reason;
  SpecificReport report;

  bool unique() const {
    return outcome == SpecificOutcome::Unique ||
           outcome == SpecificOutcome::UniqueAssumingNonsingular;
  }
};

namespace detail {

template <class K>
std::vector<RankOnePoint<typename K::Element>> map_points(
    const K& field, const std::vector<RankOnePoint<Rational>>& pts);

template <>
inline std::vector<RankOnePoint<Rational>> map_points(
    const RationalField&, const std::vector<RankOnePoint<Rational>>& pts) {
  return pts;
}

template <>
inline std::vector<RankOnePoint<Fp>> map_points(
    const PrimeField& field, const std::vector<RankOnePoint<Rational>>& pts) {
  std::vector<RankOnePoint<Fp>> out;
  for (const auto& p : pts) {
    RankOnePoint<Fp> q;
    for (const auto& f : p.factors) {
      std::vector<Fp> g;
      for (const auto& x : f) g.push_back(field.reduce(x));
      if (std::all_of(g.begin(), g.end(), [](Fp e) { return e.is_zero(); }))
        throw NotApplicable("a factor vector vanishes modulo the chosen prime");
      q.factors.push_back(std::move(g));
    }
    out.push_back(std::move(q));
  }
  return out;
}

// Stages 2-4 of the specific pipeline over either field.
template <class K>
void run_specific_stages(const K& field, const Decomposition& core,
                         const SpecificConfig& cfg, SpecificVerdict& verdict) {
  using F = typename K::Element;
  SpecificReport& report = verdict.report;
  const Shape core_shape(core.dims);
  const auto q = derive(core_shape);
  report.sigma = q.sigma;
  const auto points = map_points(field, core.points());

  if (!cfg.skip_smoothness) {
    if (core.dims.size() != 3)
      throw NotApplicable("smoothness certificates are implemented for 3 modes; "
                          "pass skip_smoothness for higher orders");
    Tensor<F> tensor = zero_tensor(field, core.dims);
    for (const auto& p : points) accumulate_rank_one(tensor, p.factors, field.one());
    const int p_default = core.dims[2] / 2;
    const int p = cfg.p > 0 ? cfg.p : p_default;
    report.applicability = applicability_hint(core_shape, core.rank,
                                              std::max(cfg.rotations, 1));
    int nrot = std::clamp(cfg.rotations, 1, 3);
    for (;;) {
      std::vector<int> rotations;
      for (int i = 0; i < nrot; ++i) rotations.push_back(i);
      SmoothnessCertificate cert;
      try {
        cert = normal_space_image(field, tensor, core.rank, p, rotations);
      } catch (const RankShortfall& e) {
        verdict.outcome = SpecificOutcome::Inconclusive;
        verdict.failed_stage = SpecificStage::Smoothness;
        verdict.reason = e.what();
        return;
      }
      report.smoothness = cert;
      if (cert.passed) break;
      if (cert.image_dim < cert.target_ell && nrot < 3) {
        ++nrot;  // more contractions can only enlarge the conormal span
        continue;
      }
      verdict.outcome = SpecificOutcome::Inconclusive;
      verdict.failed_stage = SpecificStage::Smoothness;
      verdict.reason = cert.reason;
      return;
    }
  }

  // untrimmed tangent assembly: the given points need not be generic enough
  // for the trimming recipe
  auto assembly = assemble(field, core_shape, points, /*trim=*/false);
  report.tangent_rows = static_cast<long long>(assembly.T.rows());
  report.tangent_cols = static_cast<long long>(assembly.T.cols());
  report.ell = assembly.expected_ell;
  const auto kernel = hyperplane_kernel(field, assembly);
  report.kernel_rows = static_cast<long long>(kernel.coeffs.rows());
  if (kernel.status != KernelStatus::Ok) {
    verdict.outcome = SpecificOutcome::Inconclusive;
    verdict.failed_stage = SpecificStage::KernelCount;
    verdict.reason = "tangent span has " + std::to_string(report.kernel_rows) +
                     " independent hyperplanes, expected ell = " +
                     std::to_string(report.ell);
    return;
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto hess =
        point_hessian(field, kernel.coeffs, core_shape.dims(), points[i], static_cast<int>(i));
    const long long rank = static_cast<long long>(rank_of(hess.H));
    report.hessian_ranks.push_back(rank);
    if (rank != q.sigma) {
      verdict.outcome = SpecificOutcome::Inconclusive;
      verdict.failed_stage = SpecificStage::HessianAtPoint;
      verdict.failed_point = static_cast<int>(i);
      verdict.reason = "stacked Hessian at point " + std::to_string(i + 1) + " has rank " +
                       std::to_string(rank) + ", expected Sigma = " + std::to_string(q.sigma);
      return;
    }
  }

  if (!cfg.exact)
    verdict.outcome = SpecificOutcome::ModularEvidence;
  else if (cfg.skip_smoothness)
    verdict.outcome = SpecificOutcome::UniqueAssumingNonsingular;
  else
    verdict.outcome = SpecificOutcome::Unique;
  if (!cfg.exact)
    verdict.reason = "all stages passed over GF(" + std::to_string(cfg.prime) +
                     "); modular evidence only, rerun exactly for a certificate";
  else if (cfg.skip_smoothness)
    verdict.reason = "unique provided the decomposition is a nonsingular point "
                     "of the secant variety (smoothness stage skipped)";
}

}  // namespace detail

// The full specific-identifiability pipeline: exact compression, smoothness
// certificate on the core, untrimmed tangent kernel with the exact hyperplane
// count, and a chart Hessian of full rank at every point. Any stage failure
// is reported as Inconclusive with the stage attached; a modular run can at
// most report ModularEvidence.
inline SpecificVerdict check_specific(const Decomposition& dec, const SpecificConfig& cfg = {}) {
  SpecificVerdict verdict;
  CompressResult compressed;
  try {
    compressed = compress(dec);
  } catch (const std::exception& e) {
    verdict.outcome = SpecificOutcome::Inconclusive;
    verdict.failed_stage = SpecificStage::Compression;
    verdict.reason = e.what();
    return verdict;
  }
  verdict.report.factor_ranks = compressed.factor_ranks;
  verdict.report.core_dims = compressed.core.dims;

  try {
    if (cfg.exact) {
      const RationalField field;
      detail::run_specific_stages(field, compressed.core, cfg, verdict);
    } else {
      const PrimeField field(cfg.prime);
      detail::run_specific_stages(field, compressed.core, cfg, verdict);
    }
  } catch (const std::exception& e) {
    verdict.outcome = SpecificOutcome::Inconclusive;
    if (!verdict.failed_stage) verdict.failed_stage = SpecificStage::Smoothness;
    verdict.reason = e.what();
  }
  return verdict;
}

}  // namespace tenscert
