// transforms.hpp - dense unitary building blocks (DFT, chirp, DAFT, OTFS, shift)
// plus FFT-backed kernels that apply the same operators without materializing them.
//
// Conventions:
//   F_n[m,k] = exp(-j2π m k / n) / sqrt(n)       (unitary, forward sign negative)
//   Λ_c      = diag(exp(-j2π c k²)), k = 0..n-1
//   DAFT     = Λ_{c1} F_n Λ_{c2}
//   OTFS tx  = F_lᴴ ⊗ P_tx,  OTFS rx = F_l ⊗ P_rx  (F-factor on the left)
//
// The dense matrices are the conformance reference. The kernels in
// namespace `fast` must agree with them to rounding error.

#pragma once

#include <cstddef>
#include <span>

#include "ntnwave/types.hpp"

namespace ntnwave {

ComplexMatrix dft_matrix(std::size_t n);
ComplexMatrix chirp_matrix(double c, std::size_t n);
ComplexMatrix daft_matrix(double c1, double c2, std::size_t n);

/// (F_l)ᴴ ⊗ p_tx; p_tx must be k×k.
ComplexMatrix otfs_tx_matrix(std::size_t k, std::size_t l, const ComplexMatrix& p_tx);
/// F_l ⊗ p_rx; p_rx must be k×k.
ComplexMatrix otfs_rx_matrix(std::size_t k, std::size_t l, const ComplexMatrix& p_rx);

/// Permutation Π^shift with (Π^shift x)[i] = x[(i - shift) mod n].
/// `shift` is reduced mod n.
ComplexMatrix circular_shift_matrix(std::size_t shift, std::size_t n);

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Chirp diagonal exp(-j2π c k²) as a vector. The phase c·k² is reduced mod 1
/// before exponentiation.
ComplexVector chirp_diagonal(double c, std::size_t n);

namespace fast {

/// In-place unitary DFT (sign -1) of a contiguous or strided sequence.
void dft(std::span<Complex> x);
/// In-place unitary inverse DFT (sign +1).
void idft(std::span<Complex> x);

/// Unitary DFT / IDFT applied to every column of m.
void dft_columns(ComplexMatrix& m);
void idft_columns(ComplexMatrix& m);

}  // namespace fast
}  // namespace ntnwave
