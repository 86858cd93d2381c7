#include "ntnwave/detection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace ntnwave {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_system(const ComplexVector& y, const ComplexMatrix& h_eff, const Constellation& constellation) {
    if (h_eff.rows() != h_eff.cols()) {
        throw InvalidDimension("detector: effective channel must be square");
    }
    if (y.size() != h_eff.rows()) {
        throw InvalidDimension("detector: received vector length " + std::to_string(y.size()) +
                               " does not match channel dimension " + std::to_string(h_eff.rows()));
    }
    if (constellation.points.empty()) {
        throw ConfigError("detector: empty constellation");
    }
}

void check_gram(const ComplexMatrix& h_eff, const ComplexMatrix& gram) {
    if (gram.rows() != h_eff.cols() || gram.cols() != h_eff.cols()) {
        throw InvalidDimension("detector: Gram matrix dimension mismatch");
    }
}

ComplexMatrix regularized_inverse(const ComplexMatrix& gram, double sigma2) {
    const Eigen::Index n = gram.rows();
    ComplexMatrix a = gram;
    a.diagonal().array() += sigma2;
    Eigen::LLT<ComplexMatrix> llt(a);
    if (llt.info() != Eigen::Success) {
        // Only reachable through rounding on a nearly singular Gram matrix.
        return a.partialPivLu().inverse();
    }
    return llt.solve(ComplexMatrix::Identity(n, n));
}

}  // namespace

std::string_view to_string(DetectorKind kind) { return kind == DetectorKind::Lmmse ? "LMMSE" : "MMSE_SD"; }

DetectorKind parse_detector_kind(std::string_view name) {
    std::string s;
    for (char c : name) {
        if (c == '_' || c == '-' || c == ' ') continue;
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (s == "lmmse") return DetectorKind::Lmmse;
    if (s == "mmsesd") return DetectorKind::MmseSd;
    throw ConfigError("unknown detector '" + std::string(name) + "' (expected LMMSE or MMSE_SD)");
}

void MmseSdTrace::write(std::ostream& out) const {
    for (std::size_t i = 0; i < order.size(); ++i) {
        out << "step " << i << " q=" << order[i] << " sinr=" << sinr[i](static_cast<Eigen::Index>(order[i]))
            << '\n';
    }
}

double regularized_noise_variance(double sigma2, const ComplexMatrix& gram) {
    if (sigma2 < 0.0 || std::isnan(sigma2)) {
        throw ConfigError("noise variance must be >= 0");
    }
    if (sigma2 > 0.0) {
        return sigma2;
    }
    const double n = static_cast<double>(std::max<Eigen::Index>(gram.rows(), 1));
    const double tr = gram.diagonal().real().sum();
    return tr > 0.0 ? 1e-12 * tr / n : 1e-12;
}

ComplexMatrix lmmse_weights(const ComplexMatrix& h_eff, double sigma2) {
    const ComplexMatrix gram = h_eff.adjoint() * h_eff;
    const double s2 = regularized_noise_variance(sigma2, gram);
    ComplexMatrix a = gram;
    a.diagonal().array() += s2;
    Eigen::LLT<ComplexMatrix> llt(a);
    if (llt.info() != Eigen::Success) {
        return a.partialPivLu().solve(h_eff.adjoint());
    }
    return llt.solve(h_eff.adjoint());
}

RealVector sinr_per_symbol(const ComplexMatrix& w, const ComplexMatrix& h_eff, double sigma2,
                           const std::vector<bool>& active) {
    const Eigen::Index n = h_eff.cols();
    if (w.rows() != n || w.cols() != h_eff.rows() || static_cast<Eigen::Index>(active.size()) != n) {
        throw InvalidDimension("sinr_per_symbol: dimension mismatch");
    }
    const ComplexMatrix wh = w * h_eff;
    RealVector sinr = RealVector::Constant(n, kNegInf);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!active[static_cast<std::size_t>(k)]) continue;
        double interference = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == k || !active[static_cast<std::size_t>(j)]) continue;
            interference += std::norm(wh(k, j));
        }
        const double noise = sigma2 * w.row(k).squaredNorm();
        sinr(k) = std::norm(wh(k, k)) / (interference + noise);
    }
    return sinr;
}

std::size_t slice_index(Complex z, const Constellation& constellation) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < constellation.points.size(); ++i) {
        const double d = std::norm(z - constellation.points[i]);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

DetectionResult detect_lmmse(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config) {
    check_system(y, h_eff, config.constellation);
    const ComplexMatrix gram = h_eff.adjoint() * h_eff;
    return detect_lmmse(y, h_eff, gram, config);
}

DetectionResult detect_lmmse(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                             const DetectorConfig& config) {
    check_system(y, h_eff, config.constellation);
    check_gram(h_eff, gram);
    const double s2 = regularized_noise_variance(config.noise_variance, gram);
    ComplexMatrix a = gram;
    a.diagonal().array() += s2;
    const ComplexVector rhs = h_eff.adjoint() * y;
    Eigen::LLT<ComplexMatrix> llt(a);
    const ComplexVector estimate = llt.info() == Eigen::Success ? ComplexVector(llt.solve(rhs))
                                                                : ComplexVector(a.partialPivLu().solve(rhs));
    const auto n = static_cast<std::size_t>(y.size());
    DetectionResult result;
    result.indices.resize(n);
    result.symbols.resize(y.size());
    result.detection_order.resize(n);
    std::iota(result.detection_order.begin(), result.detection_order.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = slice_index(estimate(static_cast<Eigen::Index>(i)), config.constellation);
        result.indices[i] = idx;
        result.symbols(static_cast<Eigen::Index>(i)) = config.constellation.points[idx];
    }
    return result;
}

DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config,
                               MmseSdTrace* trace) {
    check_system(y, h_eff, config.constellation);
    const ComplexMatrix gram = h_eff.adjoint() * h_eff;
    return detect_mmse_sd(y, h_eff, gram, config, trace);
}

DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                               const DetectorConfig& config, MmseSdTrace* trace) {
    check_system(y, h_eff, config.constellation);
    check_gram(h_eff, gram);
    const Eigen::Index n = h_eff.cols();
    const double s2 = regularized_noise_variance(config.noise_variance, gram);

    // P and z are kept in a permuted order: positions [0, m) hold the active
    // symbols, perm[pos] is the original index.
    ComplexMatrix p = regularized_inverse(gram, s2);
    ComplexVector z = h_eff.adjoint() * y;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});

    DetectionResult result;
    result.indices.assign(static_cast<std::size_t>(n), 0);
    result.symbols = ComplexVector::Zero(n);
    result.detection_order.reserve(static_cast<std::size_t>(n));
    if (trace) {
        trace->order.clear();
        trace->sinr.clear();
    }

    for (Eigen::Index m = n; m > 0; --m) {
        RealVector step_sinr;
        if (trace) step_sinr = RealVector::Constant(n, kNegInf);

        Eigen::Index best_pos = 0;
        double best_sinr = kNegInf;
        for (Eigen::Index pos = 0; pos < m; ++pos) {
            const double pkk = p(pos, pos).real();
            const double sinr = 1.0 / (s2 * pkk) - 1.0;
            if (trace) step_sinr(perm[static_cast<std::size_t>(pos)]) = sinr;
            if (sinr > best_sinr ||
                (sinr == best_sinr && perm[static_cast<std::size_t>(pos)] < perm[static_cast<std::size_t>(best_pos)])) {
                best_sinr = sinr;
                best_pos = pos;
            }
        }
        const Eigen::Index q = perm[static_cast<std::size_t>(best_pos)];

        const Complex estimate = p.row(best_pos).head(m).transpose().cwiseProduct(z.head(m)).sum();
        const std::size_t idx = slice_index(estimate, config.constellation);
        const Complex decided = config.constellation.points[idx];
        result.indices[static_cast<std::size_t>(q)] = idx;
        result.symbols(q) = decided;
        result.detection_order.push_back(static_cast<std::size_t>(q));
        if (trace) {
            trace->order.push_back(static_cast<std::size_t>(q));
            trace->sinr.push_back(std::move(step_sinr));
        }

        // Cancel: y ← y − x̃ h_q, hence z_j ← z_j − x̃ G_jq for active j.
        for (Eigen::Index pos = 0; pos < m; ++pos) {
            z(pos) -= decided * gram(perm[static_cast<std::size_t>(pos)], q);
        }

        // Move q to the last active slot, then downdate the leading block.
        const Eigen::Index last = m - 1;
        if (best_pos != last) {
            p.row(best_pos).head(m).swap(p.row(last).head(m));
            p.col(best_pos).head(m).swap(p.col(last).head(m));
            std::swap(z(best_pos), z(last));
            std::swap(perm[static_cast<std::size_t>(best_pos)], perm[static_cast<std::size_t>(last)]);
        }
        if (last > 0) {
            const Complex pivot = p(last, last);
            const ComplexVector col = p.col(last).head(last) / pivot;
            const Eigen::RowVectorXcd row = p.row(last).head(last);
            p.topLeftCorner(last, last).noalias() -= col * row;
        }
    }
    return result;
}

DetectionResult detect(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                       const DetectorConfig& config) {
    return config.kind == DetectorKind::Lmmse ? detect_lmmse(y, h_eff, gram, config)
                                              : detect_mmse_sd(y, h_eff, gram, config);
}

namespace reference {

DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config,
                               MmseSdTrace* trace) {
    check_system(y, h_eff, config.constellation);
    const Eigen::Index n = h_eff.cols();
    const double s2 = regularized_noise_variance(config.noise_variance, h_eff.adjoint() * h_eff);

    ComplexMatrix h = h_eff;
    ComplexVector residual = y;
    std::vector<bool> active(static_cast<std::size_t>(n), true);

    DetectionResult result;
    result.indices.assign(static_cast<std::size_t>(n), 0);
    result.symbols = ComplexVector::Zero(n);
    if (trace) {
        trace->order.clear();
        trace->sinr.clear();
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        const ComplexMatrix w = lmmse_weights(h, s2);
        const RealVector sinr = sinr_per_symbol(w, h, s2, active);
        Eigen::Index q = 0;
        for (Eigen::Index k = 1; k < n; ++k) {
            if (sinr(k) > sinr(q)) q = k;  // strict: lowest index wins ties
        }
        const Complex estimate = w.row(q) * residual;
        const std::size_t idx = slice_index(estimate, config.constellation);
        const Complex decided = config.constellation.points[idx];
        residual -= decided * h.col(q);
        h.col(q).setZero();
        active[static_cast<std::size_t>(q)] = false;

        result.indices[static_cast<std::size_t>(q)] = idx;
        result.symbols(q) = decided;
        result.detection_order.push_back(static_cast<std::size_t>(q));
        if (trace) {
            trace->order.push_back(static_cast<std::size_t>(q));
            trace->sinr.push_back(sinr);
        }
    }
    return result;
}

}  // namespace reference
}  // namespace ntnwave
