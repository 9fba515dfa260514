#pragma once

#include <array>
#include <complex>

namespace helm {

using Complex = std::complex<double>;

// Element of SU(1,1) stored by its first row.  The full matrix is
//   [ z        -w      ]
//   [ -conj(w)  conj(z) ]
// with det = |z|^2 - |w|^2 = 1 for anything produced by the library.
struct Su11Matrix {
  Complex z{1.0, 0.0};
  Complex w{0.0, 0.0};

  double det() const {
    return std::norm(z) - std::norm(w);
  }

  std::array<std::array<Complex, 2>, 2> full() const {
    return {{{z, -w}, {-std::conj(w), std::conj(z)}}};
  }

  Su11Matrix inverse() const {
    // eta M^dagger eta with eta = diag(1,-1); exact inverse when det = 1.
    return {std::conj(z), -w};
  }
};

// Matrix product A*B, staying inside the parametrization.
inline Su11Matrix mul(const Su11Matrix& a, const Su11Matrix& b) {
  return {a.z * b.z + a.w * std::conj(b.w),
          a.z * b.w + a.w * std::conj(b.z)};
}

// Matrix acting on a column vector (v0, v1).
inline std::array<Complex, 2> apply(const Su11Matrix& m, Complex v0,
                                    Complex v1) {
  return {m.z * v0 - m.w * v1, -std::conj(m.w) * v0 + std::conj(m.z) * v1};
}

}  // namespace helm
