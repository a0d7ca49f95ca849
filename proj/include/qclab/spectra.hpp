#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qclab/region.hpp"
#include "qclab/util.hpp"

namespace qclab {

// Closed-form multifractal spectra and sharp bounds.
//
// The joint stretch/rotation spectrum of K-quasiconformal maps,
//
//   F_K(alpha, gamma) = (1+alpha) - sqrt((1-alpha)^2 (K+1)^2
//                                        + 4 K alpha^2 gamma^2) / (K-1),
//
// is the cone over the pointwise disk: 2 at tau = 1, affine on segments from
// 1 to the boundary circle, 0 on the boundary.  Outside the disk the set of
// points with those rates is empty and the spectrum is -infinity.  The same
// closed form bounds the Minkowski-type (box-counting) spectrum.

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double joint_spectrum(double K, double alpha, double gamma) {
    if (!(alpha > 0.0)) throw std::invalid_argument("joint_spectrum: alpha > 0 required");
    if (K < 1.0) throw std::invalid_argument("joint_spectrum: K >= 1 required");
    if (K == 1.0) return (alpha == 1.0 && gamma == 0.0) ? 2.0 : kNegInf;
    cplx tau(alpha, alpha * gamma);
    if (region_contains(RegionSpec::pointwise_disk(K), tau) == RegionLocation::Outside)
        return kNegInf;
    double d = (1.0 - alpha) * (K + 1.0);
    double s = std::sqrt(d * d + 4.0 * K * alpha * alpha * gamma * gamma);
    return (1.0 + alpha) - s / (K - 1.0);
}

enum class SpectrumSide { Source, Image };

// Pure rotation spectrum.  Source side:
//   2 - (1/k - k) / (sqrt(1 + gamma^-2) - k),      k = (K-1)/(K+1),
// the supremum of F_K(alpha, gamma) over admissible alpha.  Image side:
//   2 - 4K/(K^2-1) |gamma|.
// Both vanish at the pointwise-maximal rate |gamma| = (K - 1/K)/2.
inline double rotation_spectrum(double K, double gamma, SpectrumSide side) {
    if (K < 1.0) throw std::invalid_argument("rotation_spectrum: K >= 1 required");
    double gmax = 0.5 * (K - 1.0 / K);
    if (std::abs(gamma) > gmax * (1.0 + 1e-15)) return kNegInf;
    if (gamma == 0.0) return 2.0;
    if (K == 1.0) return kNegInf;  // gmax = 0, only gamma = 0 admissible
    if (side == SpectrumSide::Image) return 2.0 - 4.0 * K / (K * K - 1.0) * std::abs(gamma);
    double k = (K - 1.0) / (K + 1.0);
    return 2.0 - (1.0 / k - k) / (std::sqrt(1.0 + 1.0 / (gamma * gamma)) - k);
}

// Bilipschitz rotation spectrum 2 - 2L|gamma|/(L^2-1) for |gamma| <= L - 1/L.
// Identical to joint_spectrum(L^2, 1, gamma).
inline double bilip_spectrum(double L, double gamma) {
    if (L < 1.0) throw std::invalid_argument("bilip_spectrum: L >= 1 required");
    double gmax = L - 1.0 / L;
    if (std::abs(gamma) > gmax * (1.0 + 1e-15)) return kNegInf;
    if (gamma == 0.0) return 2.0;
    if (L == 1.0) return kNegInf;
    return 2.0 - 2.0 * L * std::abs(gamma) / (L * L - 1.0);
}

enum class BoundKind {
    QcGammaMax,       // (K - 1/K)/2
    BilipGammaMax,    // L - 1/L
    QcExpThreshold,   // 4K/(K^2-1)
    BilipExpThreshold,// 2L/(L^2-1)
    QcAlphaRange      // [1/K, K]
};

struct SharpBound {
    double lo;
    double hi;
    bool interval;
    double value() const {
        if (interval) throw std::logic_error("SharpBound: interval result, use lo/hi");
        return lo;
    }
};

inline SharpBound sharp_bound(BoundKind kind, double param) {
    if (param < 1.0) throw std::invalid_argument("sharp_bound: param >= 1 required");
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind) {
        case BoundKind::QcGammaMax:
            return {0.5 * (param - 1.0 / param), 0.0, false};
        case BoundKind::BilipGammaMax:
            return {param - 1.0 / param, 0.0, false};
        case BoundKind::QcExpThreshold:
            return {param == 1.0 ? inf : 4.0 * param / (param * param - 1.0), 0.0, false};
        case BoundKind::BilipExpThreshold:
            return {param == 1.0 ? inf : 2.0 * param / (param * param - 1.0), 0.0, false};
        case BoundKind::QcAlphaRange:
            return {1.0 / param, param, true};
    }
    throw std::logic_error("unreachable");
}

// Minimal number of L0-bilipschitz factors for a spiral of rate gamma:
// ceil(|gamma| / (L0 - 1/L0)).  Ratios within 1e-9 of an integer are taken
// as that integer to keep exact-ratio inputs stable.
inline long factoring_lower_bound(double gamma, double L0) {
    if (!(L0 > 1.0)) throw std::invalid_argument("factoring_lower_bound: L0 > 1 required");
    double ratio = std::abs(gamma) / (L0 - 1.0 / L0);
    double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
        return static_cast<long>(nearest);
    return static_cast<long>(std::ceil(ratio));
}

// Dimension bound for a holomorphic motion at time lambda whose points
// stretch with exponent alpha and rotate with rate gamma:
//   1 + alpha - (1/|lambda|) sqrt((1-alpha)^2 + (1-|lambda|^2) alpha^2 gamma^2).
// May be negative; equals joint_spectrum((1+|lambda|)/(1-|lambda|), alpha,
// gamma) on the admissible range.
inline double motion_dim_bound(double lam_abs, double alpha, double gamma) {
    if (!(lam_abs > 0.0 && lam_abs < 1.0))
        throw std::invalid_argument("motion_dim_bound: |lambda| in (0,1) required");
    if (!(alpha > 0.0)) throw std::invalid_argument("motion_dim_bound: alpha > 0 required");
    double d = 1.0 - alpha;
    double s = std::sqrt(d * d + (1.0 - lam_abs * lam_abs) * alpha * alpha * gamma * gamma);
    return 1.0 + alpha - s / lam_abs;
}

}  // namespace qclab
