#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tenscert/matrix.hpp"
#include "tenscert/shape.hpp"

namespace tenscert {

// Affine representative of a rank-one tensor: one factor vector per mode,
// none of them zero.
template <class F>
struct RankOnePoint {
  std::vector<std::vector<F>> factors;
};

template <class K>
RankOnePoint<typename K::Element> canonical_point(const K& field,
                                                  std::span<const int> dims) {
  RankOnePoint<typename K::Element> p;
  for (int n : dims) {
    std::vector<typename K::Element> f(static_cast<std::size_t>(n), field.zero());
    f[0] = field.one();
    p.factors.push_back(std::move(f));
  }
  return p;
}

// r random points, deterministic in the seed. With canonical_first the first
// point is e_1 x ... x e_1 and only the remaining r-1 are random. Zero factor
// vectors are resampled.
template <class K>
std::vector<RankOnePoint<typename K::Element>> sample_points(
    const K& field, std::span<const int> dims, long long r, std::uint64_t seed,
    bool canonical_first) {
  using F = typename K::Element;
  if (r < 1) throw InvalidRank("need at least one point");
  std::mt19937_64 gen(seed);
  std::vector<RankOnePoint<F>> points;
  points.reserve(static_cast<std::size_t>(r));
  if (canonical_first) points.push_back(canonical_point(field, dims));
  while (points.size() < static_cast<std::size_t>(r)) {
    RankOnePoint<F> p;
    for (int n : dims) {
      std::vector<F> f;
      do {
        f.clear();
        for (int i = 0; i < n; ++i) f.push_back(field.random(gen));
      } while (std::all_of(f.begin(), f.end(), [](const F& x) { return x.is_zero(); }));
      p.factors.push_back(std::move(f));
    }
    points.push_back(std::move(p));
  }
  return points;
}

// The Pi x (n_1 + ... + n_d) block of tangent directions at one rank-one
// point: column j of block k is the tensor with factor k replaced by e_j.
template <class K>
Matrix<typename K::Element> tangent_block(const K& field,
                                          std::span<const int> dims,
                                          const RankOnePoint<typename K::Element>& p) {
  using F = typename K::Element;
  const std::size_t d = dims.size();
  const std::size_t pi = static_cast<std::size_t>(product_of(dims));
  std::size_t width = 0;
  for (int n : dims) width += static_cast<std::size_t>(n);
  Matrix<F> block(pi, width, field.zero());

  std::vector<std::size_t> offset(d, 0);
  for (std::size_t k = 1; k < d; ++k)
    offset[k] = offset[k - 1] + static_cast<std::size_t>(dims[k - 1]);

  std::vector<int> multi(d, 0);
  std::vector<F> prefix(d + 1, field.one());  // prefix[k] = prod_{t<k} a^t_{i_t}
  std::vector<F> suffix(d + 1, field.one());  // suffix[k] = prod_{t>k} a^t_{i_t}
  for (std::size_t lin = 0; lin < pi; ++lin) {
    for (std::size_t k = 0; k < d; ++k)
      prefix[k + 1] = prefix[k] * p.factors[k][static_cast<std::size_t>(multi[k])];
    suffix[d] = field.one();
    for (std::size_t k = d; k-- > 0;)
      suffix[k] = suffix[k + 1] * p.factors[k][static_cast<std::size_t>(multi[k])];
    for (std::size_t k = 0; k < d; ++k)
      block(lin, offset[k] + static_cast<std::size_t>(multi[k])) =
          prefix[k] * suffix[k + 1];
    for (std::size_t k = d; k-- > 0;) {
      if (++multi[k] < dims[k]) break;
      multi[k] = 0;
    }
  }
  return block;
}

template <class F>
struct TangentAssembly {
  Matrix<F> T;
  bool trimmed;
  std::vector<RankOnePoint<F>> points;
  long long expected_ell;  // Pi - r(Sigma+1)
};

// Horizontal concatenation of the per-point tangent blocks. Trimming deletes
// the last column of blocks k = 2..d in every point, which generically keeps
// the column span while reducing the width to r(Sigma+1).
template <class K>
TangentAssembly<typename K::Element> assemble(
    const K& field, const Shape& shape,
    std::vector<RankOnePoint<typename K::Element>> points, bool trim) {
  using F = typename K::Element;
  if (points.empty()) throw InvalidRank("need at least one point");
  const auto& dims = shape.dims();
  const auto q = derive(shape);
  const std::size_t pi = static_cast<std::size_t>(q.pi);
  const std::size_t d = dims.size();

  std::size_t block_width = 0;
  for (int n : dims) block_width += static_cast<std::size_t>(n);
  if (trim) block_width -= d - 1;

  Matrix<F> T(pi, points.size() * block_width, field.zero());
  for (std::size_t s = 0; s < points.size(); ++s) {
    const Matrix<F> block = tangent_block(field, dims, points[s]);
    std::size_t dst = s * block_width;
    std::size_t src = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t keep =
          static_cast<std::size_t>(dims[k]) - ((trim && k > 0) ? 1 : 0);
      for (std::size_t j = 0; j < keep; ++j, ++dst)
        for (std::size_t i = 0; i < pi; ++i) T(i, dst) = block(i, src + j);
      src += static_cast<std::size_t>(dims[k]);
    }
  }
  const long long ell = q.pi - static_cast<long long>(points.size()) * (q.sigma + 1);
  return TangentAssembly<F>{std::move(T), trim, std::move(points), ell};
}

enum class KernelStatus { Ok, DefectiveSuspected };

template <class F>
struct HyperplaneKernel {
  Matrix<F> coeffs;  // one hyperplane coefficient vector per row, length Pi
  KernelStatus status;
};

// Left kernel of T: the Cartesian equations of the tangent span. More rows
// than expected means the span has lower dimension than r(Sigma+1), i.e. the
// secant may be defective; fewer rows cannot happen.
template <class K>
HyperplaneKernel<typename K::Element> hyperplane_kernel(
    const K& field, const TangentAssembly<typename K::Element>& assembly) {
  auto kernel = left_kernel(field, assembly.T);
  const long long rows = static_cast<long long>(kernel.rows());
  if (rows < assembly.expected_ell)
    throw InternalError("tangent kernel smaller than the dimension count allows");
  const KernelStatus status =
      rows == assembly.expected_ell ? KernelStatus::Ok : KernelStatus::DefectiveSuspected;
  return HyperplaneKernel<typename K::Element>{std::move(kernel), status};
}

}  // namespace tenscert
