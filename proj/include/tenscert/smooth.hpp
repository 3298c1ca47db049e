#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tenscert/contraction.hpp"
#include "tenscert/matrix.hpp"
#include "tenscert/shape.hpp"
#include "tenscert/tensor.hpp"

namespace tenscert {

struct SmoothnessCertificate {
  int p;                       // requested wedge degree (clamped per rotation)
  std::vector<int> rotations;  // subset of {0,1,2}
  std::vector<long long> flattening_ranks;  // per rotation
  std::vector<long long> kernel_dims;
  std::vector<long long> cokernel_dims;
  long long image_dim = -1;
  long long target_ell = -1;
  bool passed = false;
  std::string reason;
};

// Smoothness test: for each rotation build the Young contraction
// A, take ker A and (Im A)^perp, push every pair u (x) w into the ambient
// tensor space via X(a,b,t) = sum_{S: t not in S} sign(S,t) u(a,S) w(b,S u t),
// rotate the contributions back, and compare the dimension of their joint
// span with the expected codimension ell = Pi - r(Sigma+1). Equality
// certifies the tensor as a smooth point of the r-secant variety.
template <class K>
SmoothnessCertificate normal_space_image(const K& field,
                                         const Tensor<typename K::Element>& tensor,
                                         long long r, int p,
                                         std::vector<int> rotations) {
  using F = typename K::Element;
  if (tensor.dims.size() != 3)
    throw NotApplicable("the smoothness certificate needs a third-order tensor");
  std::sort(rotations.begin(), rotations.end());
  rotations.erase(std::unique(rotations.begin(), rotations.end()), rotations.end());
  if (rotations.empty()) throw NotApplicable("need at least one rotation");
  for (int rot : rotations)
    if (rot < 0 || rot > 2) throw NotApplicable("rotations must lie in {0,1,2}");

  SmoothnessCertificate cert;
  cert.p = p;
  cert.rotations = rotations;

  long long pi = 1, sigma = 0;
  for (int n : tensor.dims) {
    pi *= n;
    sigma += n - 1;
  }
  cert.target_ell = pi - r * (sigma + 1);

  std::vector<std::vector<F>> image_rows;
  for (int rot : rotations) {
    const Tensor<F> rotated = rotate(tensor, rot);
    const int m1 = rotated.dims[0], m2 = rotated.dims[1], m3 = rotated.dims[2];
    const int p_rot = std::min(p, m3 / 2);
    if (p_rot < 1) throw NotApplicable("wedge degree collapses for rotation");

    const auto yf = young_flattening(field, rotated, p_rot);
    const auto right = right_kernel_with_rank(field, yf.matrix);
    const auto left = left_kernel_with_rank(field, yf.matrix);
    if (right.rank != left.rank)
      throw InternalError("rank mismatch between the two kernel passes");
    const long long rank = static_cast<long long>(right.rank);
    const long long expected = r * binomial(m3 - 1, p_rot);
    cert.flattening_ranks.push_back(rank);
    cert.kernel_dims.push_back(static_cast<long long>(right.kernel.cols()));
    cert.cokernel_dims.push_back(static_cast<long long>(left.kernel.rows()));
    if (rank < expected)
      throw RankShortfall("contraction rank " + std::to_string(rank) + " below r*C(n3-1,p) = " +
                          std::to_string(expected) +
                          "; the kernel is not the generic one, certificate cannot proceed");
    if (rank > expected)
      throw InternalError("contraction rank exceeds the bound for rank-" + std::to_string(r) +
                          " input; the input rank is understated");

    const WedgeBasis& cols = yf.col_basis;
    const WedgeBasis& rows = yf.row_basis;
    for (std::size_t alpha = 0; alpha < right.kernel.cols(); ++alpha) {
      for (std::size_t beta = 0; beta < left.kernel.rows(); ++beta) {
        Tensor<F> x = zero_tensor(field, rotated.dims);
        std::vector<int> multi(3, 0);
        for (std::size_t cs = 0; cs < cols.size(); ++cs) {
          const auto& S = cols.subset(cs);
          for (int t = 0; t < m3; ++t) {
            if (std::find(S.begin(), S.end(), t) != S.end()) continue;
            const int sign = WedgeBasis::insertion_sign(S, t);
            const std::size_t rs = rows.index_of(WedgeBasis::insert_sorted(S, t));
            multi[2] = t;
            for (int a = 0; a < m1; ++a) {
              const F& u = right.kernel(cs * static_cast<std::size_t>(m1) +
                                            static_cast<std::size_t>(a),
                                        alpha);
              if (u.is_zero()) continue;
              multi[0] = a;
              for (int b = 0; b < m2; ++b) {
                const F& w = left.kernel(beta, rs * static_cast<std::size_t>(m2) +
                                                   static_cast<std::size_t>(b));
                if (w.is_zero()) continue;
                multi[1] = b;
                const F term = u * w;
                x.values[linear_index(x.dims, multi)] += sign > 0 ? term : -term;
              }
            }
          }
        }
        const Tensor<F> back = rotate(x, (3 - rot) % 3);
        image_rows.push_back(back.values);
      }
    }
  }

  Matrix<F> stacked(image_rows.size(), static_cast<std::size_t>(pi), field.zero());
  for (std::size_t i = 0; i < image_rows.size(); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(pi); ++j)
      stacked(i, j) = image_rows[i][j];
  cert.image_dim = static_cast<long long>(rank_of(std::move(stacked)));

  cert.passed = cert.image_dim == cert.target_ell;
  if (!cert.passed)
    cert.reason = "normal-space image has dimension " + std::to_string(cert.image_dim) +
                  ", expected codimension " + std::to_string(cert.target_ell);
  return cert;
}

enum class Applicability { InRange, OutOfTabulatedRange };

// Tabulated ranges where the determinantal equations are known to cut out the
// r-secant as a component (cubic shapes only). Outside the table the
// certificate is still self-validating; this is a warning, not a gate.
inline Applicability applicability_hint(const Shape& shape, long long r, int rotations = 1) {
  if (shape.order() != 3) return Applicability::OutOfTabulatedRange;
  const auto& n = shape.dims();
  if (n[0] != n[1] || n[1] != n[2]) return Applicability::OutOfTabulatedRange;
  long long bound = 0;
  switch (n[0]) {
    case 4: bound = 4; break;
    case 5: bound = 7; break;
    case 6: bound = 8; break;
    case 7: bound = 11; break;
    case 8: bound = 12; break;
    case 9: bound = rotations >= 2 ? 16 : 15; break;
    default: return Applicability::OutOfTabulatedRange;
  }
  return r <= bound ? Applicability::InRange : Applicability::OutOfTabulatedRange;
}

}  // namespace tenscert
