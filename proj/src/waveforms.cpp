#include "ntnwave/waveforms.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ntnwave/transforms.hpp"

namespace ntnwave {

namespace {

void require_length(const WaveformSpec& spec, Eigen::Index len, const char* what) {
    if (len != static_cast<Eigen::Index>(spec.size())) {
        throw InvalidDimension(std::string(what) + ": expected length " + std::to_string(spec.size()) +
                               ", got " + std::to_string(len));
    }
}

bool is_daft_family(WaveformKind kind) { return kind != WaveformKind::Otfs; }

// Row-wise unitary DFT (inverse=false) or IDFT over a k×l column-major grid
// stored in `data`. Equivalent to right-multiplying the grid by F_l (or F_lᴴ).
void transform_grid_rows(Complex* data, std::size_t k, std::size_t l, bool inverse) {
    Eigen::Map<ComplexMatrix> grid(data, static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    ComplexMatrix rows = grid.transpose();
    if (inverse) {
        fast::idft_columns(rows);
    } else {
        fast::dft_columns(rows);
    }
    grid = rows.transpose();
}

// Left-multiply each k-row block column of the grid by `pulse`.
void apply_pulse(Complex* data, std::size_t k, std::size_t l, const ComplexMatrix& pulse) {
    Eigen::Map<ComplexMatrix> grid(data, static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    grid = (pulse * grid).eval();
}

// In-place T·v for one column.
void demod_inplace(const WaveformSpec& spec, Complex* v) {
    const std::size_t n = spec.size();
    if (is_daft_family(spec.kind())) {
        Eigen::Map<ComplexVector> col(v, static_cast<Eigen::Index>(n));
        col.array() *= spec.chirp2().array();
        fast::dft(std::span<Complex>(v, n));
        col.array() *= spec.chirp1().array();
        return;
    }
    transform_grid_rows(v, spec.grid_k(), spec.grid_l(), false);
    if (!spec.identity_pulses()) {
        apply_pulse(v, spec.grid_k(), spec.grid_l(), spec.pulse_rx());
    }
}

// In-place M·v, M being the modulation transform.
void mod_inplace(const WaveformSpec& spec, Complex* v) {
    const std::size_t n = spec.size();
    if (is_daft_family(spec.kind())) {
        Eigen::Map<ComplexVector> col(v, static_cast<Eigen::Index>(n));
        col.array() *= spec.chirp1().array().conjugate();
        fast::idft(std::span<Complex>(v, n));
        col.array() *= spec.chirp2().array().conjugate();
        return;
    }
    transform_grid_rows(v, spec.grid_k(), spec.grid_l(), true);
    if (!spec.identity_pulses()) {
        apply_pulse(v, spec.grid_k(), spec.grid_l(), spec.pulse_tx());
    }
}

// In-place Mᴴ·v.
void mod_adjoint_inplace(const WaveformSpec& spec, Complex* v) {
    if (is_daft_family(spec.kind())) {
        demod_inplace(spec, v);
        return;
    }
    transform_grid_rows(v, spec.grid_k(), spec.grid_l(), false);
    if (!spec.identity_pulses()) {
        apply_pulse(v, spec.grid_k(), spec.grid_l(), spec.pulse_tx().adjoint());
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(WaveformKind kind) {
    switch (kind) {
    case WaveformKind::Ofdm: return "OFDM";
    case WaveformKind::Afdm: return "AFDM";
    case WaveformKind::Ocdm: return "OCDM";
    case WaveformKind::Otfs: return "OTFS";
    }
    return "?";
}

WaveformKind parse_waveform_kind(std::string_view name) {
    const std::string s = lower(name);
    if (s == "ofdm") return WaveformKind::Ofdm;
    if (s == "afdm") return WaveformKind::Afdm;
    if (s == "ocdm") return WaveformKind::Ocdm;
    if (s == "otfs") return WaveformKind::Otfs;
    throw ConfigError("unknown waveform '" + std::string(name) + "' (expected OFDM, AFDM, OCDM or OTFS)");
}

ChirpRates afdm_chirp_rates(int f_max, int xi, int l_max, std::size_t n, double c2) {
    if (n == 0) {
        throw InvalidDimension("afdm_chirp_rates: n must be >= 1");
    }
    if (f_max < 0 || xi < 0 || l_max < 0) {
        throw ConfigError("afdm_chirp_rates: f_max, xi and l_max must be non-negative");
    }
    ChirpRates rates;
    const double span = static_cast<double>(f_max + xi);
    rates.c1 = (2.0 * span + 1.0) / (2.0 * static_cast<double>(n));
    rates.c2 = c2;
    const long long need = 2LL * (f_max + xi) * (l_max + 1LL) + l_max;
    rates.orthogonality_ok = need <= static_cast<long long>(n);
    return rates;
}

WaveformSpec WaveformSpec::afdm(std::size_t n, double c1, double c2) {
    if (n == 0) {
        throw InvalidDimension("waveform frame length must be >= 1");
    }
    WaveformSpec spec;
    spec.kind_ = WaveformKind::Afdm;
    spec.n_ = n;
    spec.c1_ = c1;
    spec.c2_ = c2;
    spec.chirp1_ = chirp_diagonal(c1, n);
    spec.chirp2_ = chirp_diagonal(c2, n);
    return spec;
}

WaveformSpec WaveformSpec::ofdm(std::size_t n) {
    WaveformSpec spec = afdm(n, 0.0, 0.0);
    spec.kind_ = WaveformKind::Ofdm;
    return spec;
}

WaveformSpec WaveformSpec::ocdm(std::size_t n) {
    const double c = n == 0 ? 0.0 : 1.0 / (2.0 * static_cast<double>(n));
    WaveformSpec spec = afdm(n, c, c);
    spec.kind_ = WaveformKind::Ocdm;
    return spec;
}

WaveformSpec WaveformSpec::otfs(std::size_t k, std::size_t l) {
    const auto kk = static_cast<Eigen::Index>(k);
    return otfs(k, l, ComplexMatrix::Identity(kk, kk), ComplexMatrix::Identity(kk, kk));
}

WaveformSpec WaveformSpec::otfs(std::size_t k, std::size_t l, ComplexMatrix pulse_tx, ComplexMatrix pulse_rx) {
    if (k == 0 || l == 0) {
        throw InvalidDimension("OTFS grid dimensions must be >= 1");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    if (pulse_tx.rows() != kk || pulse_tx.cols() != kk || pulse_rx.rows() != kk || pulse_rx.cols() != kk) {
        throw InvalidDimension("OTFS pulses must be " + std::to_string(k) + "x" + std::to_string(k));
    }
    constexpr double kUnitaryTol = 1e-10;
    if (unitarity_error(pulse_tx) > kUnitaryTol || unitarity_error(pulse_rx) > kUnitaryTol) {
        throw ConfigError("OTFS pulse-shaping matrices must be unitary");
    }
    WaveformSpec spec;
    spec.kind_ = WaveformKind::Otfs;
    spec.n_ = k * l;
    spec.k_ = k;
    spec.l_ = l;
    const ComplexMatrix eye = ComplexMatrix::Identity(kk, kk);
    spec.identity_pulses_ = (pulse_tx - eye).cwiseAbs().maxCoeff() == 0.0 &&
                            (pulse_rx - eye).cwiseAbs().maxCoeff() == 0.0;
    spec.pulse_tx_ = std::move(pulse_tx);
    spec.pulse_rx_ = std::move(pulse_rx);
    return spec;
}

ComplexMatrix WaveformSpec::demod_matrix() const {
    if (kind_ == WaveformKind::Otfs) {
        return otfs_rx_matrix(k_, l_, pulse_rx_);
    }
    return daft_matrix(c1_, c2_, n_);
}

ComplexMatrix WaveformSpec::mod_matrix() const {
    if (kind_ == WaveformKind::Otfs) {
        return otfs_tx_matrix(k_, l_, pulse_tx_);
    }
    return daft_matrix(c1_, c2_, n_).adjoint();
}

ComplexVector modulate(const WaveformSpec& spec, const ComplexVector& frame) {
    require_length(spec, frame.size(), "modulate");
    ComplexVector s = frame;
    mod_inplace(spec, s.data());
    return s;
}

ComplexVector demodulate(const WaveformSpec& spec, const ComplexVector& received) {
    require_length(spec, received.size(), "demodulate");
    ComplexVector y = received;
    demod_inplace(spec, y.data());
    return y;
}

void demodulate_columns(const WaveformSpec& spec, ComplexMatrix& m) {
    require_length(spec, m.rows(), "demodulate_columns");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        demod_inplace(spec, m.col(c).data());
    }
}

ComplexMatrix effective_channel(const WaveformSpec& spec, const ComplexMatrix& h) {
    require_length(spec, h.rows(), "effective_channel");
    require_length(spec, h.cols(), "effective_channel");
    // R h M = ((Mᴴ (R h)ᴴ))ᴴ, so both passes are column transforms.
    ComplexMatrix left = h;
    demodulate_columns(spec, left);
    ComplexMatrix right = left.adjoint();
    for (Eigen::Index c = 0; c < right.cols(); ++c) {
        mod_adjoint_inplace(spec, right.col(c).data());
    }
    return right.adjoint();
}

ComplexMatrix effective_gram(const WaveformSpec& spec, const ComplexMatrix& time_gram) {
    require_length(spec, time_gram.rows(), "effective_gram");
    require_length(spec, time_gram.cols(), "effective_gram");
    ComplexMatrix left = time_gram;
    for (Eigen::Index c = 0; c < left.cols(); ++c) {
        mod_adjoint_inplace(spec, left.col(c).data());
    }
    ComplexMatrix right = left.adjoint();
    for (Eigen::Index c = 0; c < right.cols(); ++c) {
        mod_adjoint_inplace(spec, right.col(c).data());
    }
    return right.adjoint();
}

namespace reference {

ComplexVector modulate(const WaveformSpec& spec, const ComplexVector& frame) {
    require_length(spec, frame.size(), "modulate");
    return spec.mod_matrix() * frame;
}

ComplexVector demodulate(const WaveformSpec& spec, const ComplexVector& received) {
    require_length(spec, received.size(), "demodulate");
    return spec.demod_matrix() * received;
}

ComplexMatrix effective_channel(const WaveformSpec& spec, const ComplexMatrix& h) {
    require_length(spec, h.rows(), "effective_channel");
    require_length(spec, h.cols(), "effective_channel");
    return spec.demod_matrix() * h * spec.mod_matrix();
}

}  // namespace reference
}  // namespace ntnwave
