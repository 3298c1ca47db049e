#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tenscert/matrix.hpp"
#include "tenscert/shape.hpp"

namespace tenscert {

// Dense tensor: flat values in the linear_index order (last mode fastest).
template <class F>
struct Tensor {
  std::vector<int> dims;
  std::vector<F> values;

  F& at(std::span<const int> multi) { return values[linear_index(dims, multi)]; }
  const F& at(std::span<const int> multi) const { return values[linear_index(dims, multi)]; }
};

template <class K>
Tensor<typename K::Element> zero_tensor(const K& field, std::vector<int> dims) {
  const std::size_t pi = static_cast<std::size_t>(product_of(dims));
  return Tensor<typename K::Element>{std::move(dims), std::vector<typename K::Element>(pi, field.zero())};
}

// Contraction with M along one mode: out[.., i, ..] = sum_j M(i, j) in[.., j, ..].
template <class K>
Tensor<typename K::Element> mode_apply(const K& field,
                                       const Tensor<typename K::Element>& t,
                                       std::size_t mode,
                                       const Matrix<typename K::Element>& m) {
  using F = typename K::Element;
  const std::size_t n_old = static_cast<std::size_t>(t.dims[mode]);
  if (m.cols() != n_old) throw InternalError("mode_apply dimension mismatch");
  std::vector<int> out_dims = t.dims;
  out_dims[mode] = static_cast<int>(m.rows());
  Tensor<F> out = zero_tensor(field, out_dims);

  std::size_t inner = 1;  // stride of the contracted mode
  for (std::size_t k = mode + 1; k < t.dims.size(); ++k)
    inner *= static_cast<std::size_t>(t.dims[k]);
  std::size_t outer = 1;
  for (std::size_t k = 0; k < mode; ++k) outer *= static_cast<std::size_t>(t.dims[k]);

  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t in_base = o * n_old * inner;
    const std::size_t out_base = o * m.rows() * inner;
    for (std::size_t j = 0; j < n_old; ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) {
        const F& w = m(i, j);
        if (w.is_zero()) continue;
        const std::size_t src = in_base + j * inner;
        const std::size_t dst = out_base + i * inner;
        for (std::size_t s = 0; s < inner; ++s)
          out.values[dst + s] += w * t.values[src + s];
      }
  }
  return out;
}

template <class K>
Tensor<typename K::Element> multilinear_apply(
    const K& field, const Tensor<typename K::Element>& t,
    const std::vector<Matrix<typename K::Element>>& maps) {
  if (maps.size() != t.dims.size())
    throw InternalError("multilinear_apply needs one matrix per mode");
  Tensor<typename K::Element> out = t;
  for (std::size_t k = 0; k < maps.size(); ++k) out = mode_apply(field, out, k, maps[k]);
  return out;
}

// Adds c * (f_1 x f_2 x ... x f_d) into the tensor.
template <class F>
void accumulate_rank_one(Tensor<F>& t, const std::vector<std::vector<F>>& factors, const F& c) {
  const std::size_t d = t.dims.size();
  std::vector<int> multi(d, 0);
  for (std::size_t lin = 0; lin < t.values.size(); ++lin) {
    F prod = c;
    for (std::size_t k = 0; k < d; ++k)
      prod *= factors[k][static_cast<std::size_t>(multi[k])];
    t.values[lin] += prod;
    for (std::size_t k = d; k-- > 0;) {
      if (++multi[k] < t.dims[k]) break;
      multi[k] = 0;
    }
  }
}

}  // namespace tenscert
