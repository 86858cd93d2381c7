#include "ntnwave/transforms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace ntnwave {

namespace {

void require_positive(std::size_t n, const char* what) {
    if (n == 0) {
        throw InvalidDimension(std::string(what) + ": dimension must be >= 1");
    }
}

Complex unit_phasor(double cycles) {
    // exp(-j2π·cycles) with cycles reduced to [0, 1)
    const double frac = cycles - std::floor(cycles);
    const double angle = -2.0 * kPi * frac;
    return {std::cos(angle), std::sin(angle)};
}

Eigen::FFT<double>& thread_fft() {
    thread_local Eigen::FFT<double> engine = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return engine;
}

void transform_inplace(std::span<Complex> x, bool inverse) {
    const std::size_t n = x.size();
    if (n <= 1) {
        return;
    }
    thread_local std::vector<Complex> scratch;
    scratch.resize(n);
    auto& engine = thread_fft();
    if (inverse) {
        engine.inv(scratch.data(), x.data(), static_cast<Eigen::Index>(n));
    } else {
        engine.fwd(scratch.data(), x.data(), static_cast<Eigen::Index>(n));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = scratch[i] * scale;
    }
}

}  // namespace

double unitarity_error(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidDimension("unitarity_error: matrix must be square");
    }
    const ComplexMatrix gram = m * m.adjoint();
    return (gram - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

ComplexMatrix dft_matrix(std::size_t n) {
    require_positive(n, "dft_matrix");
    const auto size = static_cast<Eigen::Index>(n);
    ComplexMatrix f(size, size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            // (m·k mod n)/n keeps the argument small and exact
            const double cycles = static_cast<double>((m * k) % n) / static_cast<double>(n);
            f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = unit_phasor(cycles) * scale;
        }
    }
    return f;
}

ComplexVector chirp_diagonal(double c, std::size_t n) {
    require_positive(n, "chirp_diagonal");
    ComplexVector d(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double k2 = static_cast<double>(k) * static_cast<double>(k);
        d(static_cast<Eigen::Index>(k)) = unit_phasor(c * k2);
    }
    return d;
}

ComplexMatrix chirp_matrix(double c, std::size_t n) {
    return chirp_diagonal(c, n).asDiagonal();
}

ComplexMatrix daft_matrix(double c1, double c2, std::size_t n) {
    require_positive(n, "daft_matrix");
    const ComplexVector left = chirp_diagonal(c1, n);
    const ComplexVector right = chirp_diagonal(c2, n);
    return left.asDiagonal() * dft_matrix(n) * right.asDiagonal();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix otfs_tx_matrix(std::size_t k, std::size_t l, const ComplexMatrix& p_tx) {
    require_positive(k, "otfs_tx_matrix");
    require_positive(l, "otfs_tx_matrix");
    if (p_tx.rows() != static_cast<Eigen::Index>(k) || p_tx.cols() != static_cast<Eigen::Index>(k)) {
        throw InvalidDimension("otfs_tx_matrix: pulse must be " + std::to_string(k) + "x" +
                               std::to_string(k));
    }
    return kron(dft_matrix(l).adjoint(), p_tx);
}

ComplexMatrix otfs_rx_matrix(std::size_t k, std::size_t l, const ComplexMatrix& p_rx) {
    require_positive(k, "otfs_rx_matrix");
    require_positive(l, "otfs_rx_matrix");
    if (p_rx.rows() != static_cast<Eigen::Index>(k) || p_rx.cols() != static_cast<Eigen::Index>(k)) {
        throw InvalidDimension("otfs_rx_matrix: pulse must be " + std::to_string(k) + "x" +
                               std::to_string(k));
    }
    return kron(dft_matrix(l), p_rx);
}

ComplexMatrix circular_shift_matrix(std::size_t shift, std::size_t n) {
    require_positive(n, "circular_shift_matrix");
    shift %= n;
    const auto size = static_cast<Eigen::Index>(n);
    ComplexMatrix p = ComplexMatrix::Zero(size, size);
    for (std::size_t i = 0; i < n; ++i) {
        p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + n - shift) % n)) = 1.0;
    }
    return p;
}

namespace fast {

void dft(std::span<Complex> x) { transform_inplace(x, false); }

void idft(std::span<Complex> x) { transform_inplace(x, true); }

void dft_columns(ComplexMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        dft(std::span<Complex>(m.col(c).data(), static_cast<std::size_t>(m.rows())));
    }
}

void idft_columns(ComplexMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        idft(std::span<Complex>(m.col(c).data(), static_cast<std::size_t>(m.rows())));
    }
}

}  // namespace fast
}  // namespace ntnwave
