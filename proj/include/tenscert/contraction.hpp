#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tenscert/matrix.hpp"
#include "tenscert/tensor.hpp"

namespace tenscert {

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// Basis of wedge^p F^n: the p-element subsets of {0..n-1} as sorted tuples in
// lexicographic order. e_S ^ e_t = sign * e_{S u {t}} with
// sign = (-1)^{|{s in S : s > t}|} (insertion into sorted position).
class WedgeBasis {
 public:
  WedgeBasis(int n, int p) : n_(n), p_(p) {
    if (p < 0 || p > n) throw NotApplicable("wedge degree out of range");
    std::vector<int> subset(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) subset[static_cast<std::size_t>(i)] = i;
    for (;;) {
      index_[mask_of(subset)] = subsets_.size();
      subsets_.push_back(subset);
      // next combination in lex order
      int i = p - 1;
      while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - p + i) --i;
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < p; ++j)
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  int n() const { return n_; }
  int p() const { return p_; }
  std::size_t size() const { return subsets_.size(); }
  const std::vector<int>& subset(std::size_t idx) const { return subsets_[idx]; }

  std::size_t index_of(const std::vector<int>& sorted_subset) const {
    auto it = index_.find(mask_of(sorted_subset));
    if (it == index_.end()) throw IndexOutOfRange("subset not in wedge basis");
    return it->second;
  }

  static int insertion_sign(const std::vector<int>& subset, int t) {
    int larger = 0;
    for (int s : subset) {
      if (s == t) throw IndexOutOfRange("insertion index already in subset");
      if (s > t) ++larger;
    }
    return larger % 2 == 0 ? 1 : -1;
  }

  static std::vector<int> insert_sorted(const std::vector<int>& subset, int t) {
    std::vector<int> out;
    out.reserve(subset.size() + 1);
    bool placed = false;
    for (int s : subset) {
      if (!placed && t < s) {
        out.push_back(t);
        placed = true;
      }
      out.push_back(s);
    }
    if (!placed) out.push_back(t);
    return out;
  }

 private:
  static std::uint64_t mask_of(const std::vector<int>& subset) {
    std::uint64_t m = 0;
    for (int s : subset) m |= 1ULL << s;
    return m;
  }

  int n_;
  int p_;
  std::vector<std::vector<int>> subsets_;
  std::map<std::uint64_t, std::size_t> index_;
};

// Standard flattening: the mode-k fibers become rows, everything else columns
// (columns keep the linear order of the remaining modes). Works for any order.
template <class K>
Matrix<typename K::Element> flattening(const K& field,
                                       const Tensor<typename K::Element>& t,
                                       std::size_t mode) {
  using F = typename K::Element;
  const std::size_t d = t.dims.size();
  if (mode >= d) throw IndexOutOfRange("flattening mode out of range");
  const std::size_t n = static_cast<std::size_t>(t.dims[mode]);
  const std::size_t rest = t.values.size() / n;
  Matrix<F> m(n, rest, field.zero());
  std::size_t inner = 1;
  for (std::size_t k = mode + 1; k < d; ++k) inner *= static_cast<std::size_t>(t.dims[k]);
  const std::size_t outer = t.values.size() / (n * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = 0; s < inner; ++s)
        m(i, o * inner + s) = t.values[(o * n + i) * inner + s];
  return m;
}

template <class F>
struct YoungFlattening {
  Matrix<F> matrix;     // (n2 * C(n3, p+1)) x (n1 * C(n3, p))
  int p;
  WedgeBasis col_basis;  // wedge^p,   column blocks
  WedgeBasis row_basis;  // wedge^p+1, row blocks
};

// The contraction F^{n1} (x) wedge^p F^{n3} -> F^{n2} (x) wedge^{p+1} F^{n3}
// of a third-order tensor: on a rank-one term a(x)b(x)c it maps f (x) g to
// (a.f) b (x) (g ^ c), extended by linearity. Row (S', j), column (S, i) holds
// sign(S, t) * T(i, j, t) with {t} = S' \ S, zero when S is not inside S'.
template <class K>
YoungFlattening<typename K::Element> young_flattening(
    const K& field, const Tensor<typename K::Element>& t, int p) {
  using F = typename K::Element;
  if (t.dims.size() != 3)
    throw NotApplicable("Young flattenings are defined for third-order tensors");
  const int n1 = t.dims[0], n2 = t.dims[1], n3 = t.dims[2];
  if (p < 1 || p > n3 / 2)
    throw NotApplicable("wedge degree p must satisfy 1 <= p <= floor(n3/2)");

  WedgeBasis cols(n3, p);
  WedgeBasis rows(n3, p + 1);
  Matrix<F> m(rows.size() * static_cast<std::size_t>(n2),
              cols.size() * static_cast<std::size_t>(n1), field.zero());

  std::vector<int> multi(3, 0);
  for (std::size_t cs = 0; cs < cols.size(); ++cs) {
    const auto& S = cols.subset(cs);
    for (int tt = 0; tt < n3; ++tt) {
      bool in_s = false;
      for (int s : S) in_s |= (s == tt);
      if (in_s) continue;
      const int sign = WedgeBasis::insertion_sign(S, tt);
      const std::size_t rs = rows.index_of(WedgeBasis::insert_sorted(S, tt));
      multi[2] = tt;
      for (int i = 0; i < n1; ++i) {
        multi[0] = i;
        for (int j = 0; j < n2; ++j) {
          multi[1] = j;
          const F& v = t.values[linear_index(t.dims, multi)];
          auto& cell = m(rs * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j),
                         cs * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i));
          cell = sign > 0 ? v : -v;
        }
      }
    }
  }
  return YoungFlattening<F>{std::move(m), p, std::move(cols), std::move(rows)};
}

// Cyclic rotation of the three modes: rotate(T, 1)(i, j, k) = T(j, k, i).
// rotate^3 is the identity; the three Young contractions of a tensor are the
// flattenings of its rotations.
template <class F>
Tensor<F> rotate(const Tensor<F>& t, int rotation) {
  if (t.dims.size() != 3) throw NotApplicable("rotate is defined for third-order tensors");
  rotation = ((rotation % 3) + 3) % 3;
  if (rotation == 0) return t;
  const int n1 = t.dims[0], n2 = t.dims[1], n3 = t.dims[2];
  Tensor<F> out;
  out.dims = rotation == 1 ? std::vector<int>{n3, n1, n2} : std::vector<int>{n2, n3, n1};
  out.values = t.values;  // reserve the right size; every entry is overwritten
  std::vector<int> src(3, 0), dst(3, 0);
  for (src[0] = 0; src[0] < n1; ++src[0])
    for (src[1] = 0; src[1] < n2; ++src[1])
      for (src[2] = 0; src[2] < n3; ++src[2]) {
        if (rotation == 1) {
          dst[0] = src[2]; dst[1] = src[0]; dst[2] = src[1];
        } else {
          dst[0] = src[1]; dst[1] = src[2]; dst[2] = src[0];
        }
        out.values[linear_index(out.dims, dst)] = t.values[linear_index(t.dims, src)];
      }
  return out;
}

}  // namespace tenscert
