#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tenscert/matrix.hpp"
#include "tenscert/shape.hpp"
#include "tenscert/tangent.hpp"
#include "tenscert/tensor.hpp"

namespace tenscert {

// H = [H^1 ... H^ell] stacked horizontally, Sigma x (ell * Sigma). Every H^l
// is symmetric with zero diagonal blocks; rows and columns are indexed by the
// reduced tangent coordinates (n_I - 1 per mode).
template <class F>
struct StackedHessian {
  Matrix<F> H;
  long long sigma;
  long long ell;
  int point_index;  // which decomposition point the chart was taken at

  Matrix<F> block(std::size_t l) const {
    return H.submatrix(0, l * static_cast<std::size_t>(sigma),
                       static_cast<std::size_t>(sigma),
                       static_cast<std::size_t>(sigma));
  }
};

// Closed form at the canonical point e_1 x ... x e_1: the (i,j) entry of the
// off-diagonal block (I,J) is the hyperplane coefficient at the multi-index
// which is first everywhere except i+1 at mode I and j+1 at mode J.
template <class K>
StackedHessian<typename K::Element> canonical_hessian(
    const K& field, const Matrix<typename K::Element>& kernel,
    std::span<const int> dims) {
  using F = typename K::Element;
  const std::size_t d = dims.size();
  const std::size_t pi = static_cast<std::size_t>(product_of(dims));
  if (kernel.cols() != pi)
    throw InternalError("kernel vectors must have length Pi");
  const std::size_t ell = kernel.rows();
  std::size_t sigma = 0;
  std::vector<std::size_t> offset(d, 0);
  for (std::size_t k = 0; k < d; ++k) {
    offset[k] = sigma;
    sigma += static_cast<std::size_t>(dims[k]) - 1;
  }

  Matrix<F> H(sigma, ell * sigma, field.zero());
  std::vector<int> multi(d, 0);
  for (std::size_t l = 0; l < ell; ++l) {
    const std::size_t base = l * sigma;
    for (std::size_t I = 0; I < d; ++I) {
      for (std::size_t J = I + 1; J < d; ++J) {
        for (int i = 1; i < dims[I]; ++i) {
          multi[I] = i;
          for (int j = 1; j < dims[J]; ++j) {
            multi[J] = j;
            const F& v = kernel(l, linear_index(dims, multi));
            H(offset[I] + static_cast<std::size_t>(i) - 1,
              base + offset[J] + static_cast<std::size_t>(j) - 1) = v;
            H(offset[J] + static_cast<std::size_t>(j) - 1,
              base + offset[I] + static_cast<std::size_t>(i) - 1) = v;
          }
          multi[J] = 0;
        }
        multi[I] = 0;
      }
    }
  }
  return StackedHessian<F>{std::move(H), static_cast<long long>(sigma),
                           static_cast<long long>(ell), 0};
}

namespace detail {

// Invertible M with M v = e_1: swap coordinate 1 with the first nonzero
// coordinate of v, then eliminate. Deterministic given the point.
template <class K>
Matrix<typename K::Element> basis_to_canonical(const K& field,
                                               const std::vector<typename K::Element>& v) {
  using F = typename K::Element;
  const std::size_t n = v.size();
  std::size_t t = 0;
  while (t < n && v[t].is_zero()) ++t;
  if (t == n) throw InternalError("zero factor vector has no basis map");
  std::vector<F> w(v);
  std::swap(w[0], w[t]);
  Matrix<F> m(n, n, field.zero());
  m(0, t) = w[0].inverse();
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t src = i == t ? 0 : i;  // account for the swap
    m(i, src) = field.one();
    m(i, t) -= w[i] / w[0];
  }
  return m;
}

// Random invertible R with R e_1 = e_1, for exercising chart independence.
template <class K>
Matrix<typename K::Element> random_canonical_stabilizer(const K& field, std::size_t n,
                                                        std::mt19937_64& gen) {
  for (;;) {
    Matrix<typename K::Element> r(n, n, field.zero());
    r(0, 0) = field.one();
    for (std::size_t j = 1; j < n; ++j) r(0, j) = field.random(gen);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) r(i, j) = field.random(gen);
    if (try_inverse(field, r)) return r;
  }
}

}  // namespace detail

// Chart Hessian at an arbitrary point: move the point to the canonical one by
// per-mode basis changes, transport the hyperplane coefficients with the
// inverse-transpose action, and reuse the canonical closed form. A nonzero
// completion_seed composes the deterministic basis maps with random
// stabilizers of e_1; the certified rank must not depend on that choice.
template <class K>
StackedHessian<typename K::Element> point_hessian(
    const K& field, const Matrix<typename K::Element>& kernel,
    std::span<const int> dims, const RankOnePoint<typename K::Element>& point,
    int point_index = 0, std::uint64_t completion_seed = 0) {
  using F = typename K::Element;
  const std::size_t d = dims.size();
  std::mt19937_64 gen(completion_seed);
  std::vector<Matrix<F>> coeff_maps;
  coeff_maps.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    Matrix<F> m = detail::basis_to_canonical(field, point.factors[k]);
    if (completion_seed != 0) {
      const auto r = detail::random_canonical_stabilizer(
          field, static_cast<std::size_t>(dims[k]), gen);
      m = multiply(field, r, m);
    }
    auto inv = try_inverse(field, m);
    if (!inv) throw SingularBasisCompletion("basis completion came out singular");
    coeff_maps.push_back(inv->transposed());
  }

  const std::size_t pi = static_cast<std::size_t>(product_of(dims));
  if (kernel.cols() != pi)
    throw InternalError("kernel vectors must have length Pi");
  Matrix<F> transported(kernel.rows(), pi, field.zero());
  for (std::size_t l = 0; l < kernel.rows(); ++l) {
    Tensor<F> k_tensor = zero_tensor(field, std::vector<int>(dims.begin(), dims.end()));
    for (std::size_t c = 0; c < pi; ++c) k_tensor.values[c] = kernel(l, c);
    const Tensor<F> moved = multilinear_apply(field, k_tensor, coeff_maps);
    for (std::size_t c = 0; c < pi; ++c) transported(l, c) = moved.values[c];
  }
  auto hess = canonical_hessian(field, transported, dims);
  hess.point_index = point_index;
  return hess;
}

enum class HessianPath { Standard, WeaklyDefective };

struct HessianTarget {
  HessianPath path;
  long long target;      // rank that proves identifiability
  long long sigma_tail;  // sum_{i>=2} (n_i - 1)
};

// The weakly-defective branch applies exactly when n_1 - 1 > ell * sigma_tail;
// there the stacked Hessian cannot reach rank Sigma and the proof target drops
// to (ell+1) * sigma_tail, which is also the largest achievable rank.
inline HessianTarget classify_hessian_target(const Shape& shape, long long ell) {
  if (ell < 1) throw InvalidRank("classify_hessian_target needs ell >= 1");
  const auto& n = shape.dims();
  long long sigma_tail = 0;
  for (std::size_t i = 1; i < n.size(); ++i) sigma_tail += n[i] - 1;
  const long long sigma = sigma_tail + n[0] - 1;
  if (n[0] - 1 > ell * sigma_tail)
    return HessianTarget{HessianPath::WeaklyDefective, (ell + 1) * sigma_tail, sigma_tail};
  return HessianTarget{HessianPath::Standard, sigma, sigma_tail};
}

struct HessianVerdict {
  bool proved;
  long long rank;
};

template <class F>
HessianVerdict hessian_verdict(const StackedHessian<F>& hessian, const HessianTarget& mode) {
  const long long rank = static_cast<long long>(rank_of(hessian.H));
  return HessianVerdict{rank == mode.target, rank};
}

}  // namespace tenscert
