#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qclab/util.hpp"

namespace qclab {

// Model extremal maps f_tau(z) = (z/|z|)|z|^tau with tau = alpha(1 + i gamma).
//
// Three variants:
//   GlobalPower   : f_tau on all of C (f_tau(0) = 0).
//   DiskLocalized : f_tau inside the closed unit disk, identity outside.
//   Spiral        : s_gamma(z) = z|z|^{i gamma}, i.e. tau = 1 + i gamma.
//
// The Beltrami coefficient is mu(z) = ((tau-1)/(tau+1)) z/conj(z) on the
// power region, so |mu| = |(tau-1)/(tau+1)| is constant there and the map is
// K-quasiconformal with K = (1+|mu|)/(1-|mu|).

enum class MapVariant { GlobalPower, DiskLocalized, Spiral };

struct ModelMapParams {
    cplx tau;
    MapVariant variant = MapVariant::GlobalPower;

    ModelMapParams(cplx tau_, MapVariant v = MapVariant::GlobalPower) : tau(tau_), variant(v) {
        if (!(tau.real() > 0.0))
            throw std::invalid_argument("ModelMapParams: Re tau must be positive");
        if (v == MapVariant::Spiral && tau.real() != 1.0)
            throw std::invalid_argument("ModelMapParams: spiral variant requires alpha = 1");
    }

    // eta = (tau-1)/(tau+1); |eta| < 1 exactly when Re tau > 0.
    cplx eta() const { return (tau - 1.0) / (tau + 1.0); }
    double alpha() const { return tau.real(); }
    double gamma() const { return tau.imag() / tau.real(); }
};

struct MapDerivatives {
    cplx value;
    cplx fz;
    cplx fzbar;
    cplx mu;
};

inline ModelMapParams spiral_map(double gamma) {
    return ModelMapParams(cplx(1.0, gamma), MapVariant::Spiral);
}

// |z|^w for |z| > 0 via the real logarithm; no branch ambiguity.
inline cplx real_power(double modulus, cplx w) { return std::exp(w * std::log(modulus)); }

inline cplx model_map_value(const ModelMapParams& p, cplx z) {
    if (z == cplx(0.0)) return 0.0;
    if (p.tau == cplx(1.0)) return z;
    if (p.variant == MapVariant::DiskLocalized && std::abs(z) > 1.0) return z;
    return z * real_power(std::abs(z), p.tau - 1.0);
}

// Value together with f_z, f_zbar and mu = f_zbar / f_z.
// Derivatives are undefined at the origin unless tau == 1.
inline MapDerivatives model_map_eval(const ModelMapParams& p, cplx z) {
    if (p.tau == cplx(1.0)) return {z, 1.0, 0.0, 0.0};
    if (z == cplx(0.0))
        throw std::domain_error("model_map_eval: derivatives undefined at origin");
    if (p.variant == MapVariant::DiskLocalized && std::abs(z) > 1.0) return {z, 1.0, 0.0, 0.0};
    double r = std::abs(z);
    cplx pw = real_power(r, p.tau - 1.0);   // |z|^{tau-1}
    cplx angular = z / std::conj(z);        // e^{2 i arg z}
    cplx fz = 0.5 * (p.tau + 1.0) * pw;
    cplx fzbar = 0.5 * (p.tau - 1.0) * pw * angular;
    return {z * pw, fz, fzbar, p.eta() * angular};
}

// Distortion of the model map: K = (1+|eta|)/(1-|eta|), eta = (tau-1)/(tau+1).
// Equivalently, the smallest K whose parameter circle
// |tau - (K+1/K)/2| = (K-1/K)/2 passes through tau.
inline double minimal_distortion(cplx tau) {
    if (!(tau.real() > 0.0))
        throw std::invalid_argument("minimal_distortion: Re tau must be positive");
    double m = std::abs((tau - 1.0) / (tau + 1.0));
    return (1.0 + m) / (1.0 - m);
}

}  // namespace qclab
