#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qclab/util.hpp"

namespace qclab {

// Parametric admissibility regions.
//
//   PointwiseDisk(K)        closed disk |tau - (K+1/K)/2| <= (K-1/K)/2,
//                           the exponents tau = alpha(1+i gamma) attainable
//                           by a K-quasiconformal map.
//   CriticalEllipse(K)      open region |b| + |b-2| < 2(K+1)/(K-1) of
//                           exponents b with |f_z^b| locally integrable.
//   LemmaEllipse(p0, |lam|) closed region |b| + |b-p0| <= p0/|lam| from the
//                           complex-exponent interpolation bound.
//   ApDual(K, p)            open region |b| + |b+2(p-1)| < 2(p-1)(K+1)/(K-1),
//                           the dual constraint for |f_z^b| to be an A_p
//                           weight (region predicate only).

enum class RegionKind { PointwiseDisk, CriticalEllipse, LemmaEllipse, ApDual };

enum class RegionLocation { Inside, Boundary, Outside };

struct RegionSpec {
    RegionKind kind;
    double K = 1.0;       // PointwiseDisk, CriticalEllipse, ApDual
    double p0 = 0.0;      // LemmaEllipse
    double lam_abs = 0.0; // LemmaEllipse
    double p = 0.0;       // ApDual

    static RegionSpec pointwise_disk(double K) {
        if (K < 1.0) throw std::invalid_argument("pointwise_disk: K >= 1 required");
        RegionSpec r;
        r.kind = RegionKind::PointwiseDisk;
        r.K = K;
        return r;
    }
    static RegionSpec critical_ellipse(double K) {
        if (K < 1.0) throw std::invalid_argument("critical_ellipse: K >= 1 required");
        if (K == 1.0) throw std::domain_error("critical_ellipse: degenerate region at K = 1");
        RegionSpec r;
        r.kind = RegionKind::CriticalEllipse;
        r.K = K;
        return r;
    }
    static RegionSpec lemma_ellipse(double p0, double lam_abs) {
        if (!(p0 > 0.0)) throw std::invalid_argument("lemma_ellipse: p0 > 0 required");
        if (!(lam_abs > 0.0 && lam_abs < 1.0))
            throw std::invalid_argument("lemma_ellipse: 0 < |lambda| < 1 required");
        RegionSpec r;
        r.kind = RegionKind::LemmaEllipse;
        r.p0 = p0;
        r.lam_abs = lam_abs;
        return r;
    }
    static RegionSpec ap_dual(double K, double p) {
        if (K < 1.0) throw std::invalid_argument("ap_dual: K >= 1 required");
        if (K == 1.0) throw std::domain_error("ap_dual: degenerate region at K = 1");
        if (!(p > 1.0)) throw std::invalid_argument("ap_dual: p > 1 required");
        RegionSpec r;
        r.kind = RegionKind::ApDual;
        r.K = K;
        r.p = p;
        return r;
    }

    bool is_open() const {
        return kind == RegionKind::CriticalEllipse || kind == RegionKind::ApDual;
    }

    // Signed residual of the defining scalar equation (negative inside) and
    // the bound it is measured against, for relative tolerance.
    struct Residual {
        double value;
        double scale;
    };

    Residual residual(cplx z) const {
        switch (kind) {
            case RegionKind::PointwiseDisk: {
                double c = 0.5 * (K + 1.0 / K);
                double a = 0.5 * (K - 1.0 / K);
                return {std::abs(z - c) - a, std::max(a, 1.0)};
            }
            case RegionKind::CriticalEllipse: {
                double bound = 2.0 * (K + 1.0) / (K - 1.0);
                return {std::abs(z) + std::abs(z - 2.0) - bound, bound};
            }
            case RegionKind::LemmaEllipse: {
                double bound = p0 / lam_abs;
                return {std::abs(z) + std::abs(z - p0) - bound, bound};
            }
            case RegionKind::ApDual: {
                double bound = 2.0 * (p - 1.0) * (K + 1.0) / (K - 1.0);
                return {std::abs(z) + std::abs(z + 2.0 * (p - 1.0)) - bound, bound};
            }
        }
        throw std::logic_error("unreachable");
    }
};

// Three-valued classification with relative boundary tolerance; open vs
// closed semantics are reported by RegionSpec::is_open(), not folded into the
// geometry.
inline RegionLocation region_contains(const RegionSpec& region, cplx point,
                                      double rel_tol = 1e-12) {
    auto r = region.residual(point);
    if (std::abs(r.value) <= rel_tol * r.scale) return RegionLocation::Boundary;
    return r.value < 0.0 ? RegionLocation::Inside : RegionLocation::Outside;
}

}  // namespace qclab
