#pragma once

#include <cmath>
#include <complex>

#include "wigner/wigner.hpp"

namespace wigner::testing {

inline Vector basis_vector(int n, int i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

/// min over unit phases c of ||A - c B||_F, via c = <B, A> / |<B, A>|.
inline double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  const Complex inner = (b.adjoint() * a).trace();
  const Complex c = std::abs(inner) > 0 ? inner / std::abs(inner) : Complex(1.0, 0.0);
  return (a - c * b).norm();
}

inline Matrix random_complex(int n, SeededRandomSource& rng) { return gaussian_matrix(n, n, rng); }

}  // namespace wigner::testing
