#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qclab/model_map.hpp"
#include "qclab/quadrature.hpp"
#include "qclab/region.hpp"
#include "qclab/util.hpp"

namespace qclab {

// Burkholder-type functionals with a complex parameter p, their rho and beta
// solvers, complex-power disk integrals and the interpolation-lemma checker.
//
// For 1 <= |p-1| <= 1/k the unimodular field rho(z) is fixed by requiring
// p rho and 1 + rho|mu| to share their argument, which makes
// p rho |mu| / (1 + rho |mu|) a real number in [0,1].  The functional
//
//   (1/pi) INT_D ( ||f_z| + rho |f_zbar|| - |p||f_zbar| )
//                 |(f_z + rho |mu| f_z)^{beta-1}|  <=  1
//
// holds for principal solutions whenever |beta| + |beta-2| <= 2|p-1|, with
// equality for the identity and, at beta = solve_beta(p), for the matched
// power maps.

// --- rho solver -------------------------------------------------------------

// Unique unimodular rho = e^{i theta} with arg(p rho) = arg(1 + rho m).
// h(theta) = arg p + theta - arg(1 + m e^{i theta}) is strictly increasing
// with range width 2pi over (-pi, pi], so bisection finds the single root.
// m = 0 degenerates smoothly to rho = e^{-i arg p}.
inline cplx solve_rho(cplx p, double m) {
    if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("solve_rho: m in [0,1) required");
    if (p == cplx(0.0)) throw std::invalid_argument("solve_rho: p must be nonzero");
    double pm1 = std::abs(p - 1.0);
    if (pm1 < 1.0 - 1e-12 || (m > 0.0 && pm1 > 1.0 / m + 1e-12))
        throw std::invalid_argument("solve_rho: infeasible parameters (need 1 <= |p-1| <= 1/m)");
    double phi = std::arg(p);
    auto h = [&](double theta) {
        return phi + theta - std::arg(1.0 + m * std::exp(cplx(0.0, theta)));
    };
    double lo = -kPi, hi = kPi;
    double target = 0.0;
    if (h(hi) < target) target = -2.0 * kPi;  // phi = -pi edge
    if (h(lo) > target) target = 2.0 * kPi;   // phi = +pi edge
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (h(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    double theta = 0.5 * (lo + hi);
    cplx rho = std::exp(cplx(0.0, theta));
    // defining condition and the nonnegativity p rho m / (1 + rho m) in [0,1]
    double residual = wrap_angle(std::arg(p * rho) - std::arg(1.0 + rho * m));
    if (std::abs(residual) > 1e-10)
        throw std::runtime_error("solve_rho: no admissible root found");
    cplx c = p * rho * m / (1.0 + rho * m);
    if (m > 0.0 && (std::abs(c.imag()) > 1e-9 || c.real() < -1e-12 || c.real() > 1.0 + 1e-9))
        throw std::runtime_error("solve_rho: root violates p rho m/(1+rho m) in [0,1]");
    return rho;
}

// --- beta solver ------------------------------------------------------------

// beta on the ellipse |beta| + |beta-2| = 2|p-1| with Re(beta/p) = 1.
// Parametrizing beta(t) = 1 + a cos t + i b sin t (a = |p-1|, b =
// sqrt(a^2-1)), Re(beta(t)/p) = c0 + c1 cos t + c2 sin t attains its maximum
// 1 at exactly one t, so the constraint line is tangent to the ellipse and
// the solution is unique.
inline cplx solve_beta(cplx p) {
    if (p == cplx(0.0)) throw std::invalid_argument("solve_beta: p must be nonzero");
    double a = std::abs(p - 1.0);
    if (a < 1.0 - 1e-12) throw std::invalid_argument("solve_beta: |p-1| >= 1 required");
    if (a <= 1.0) return cplx(2.0, 0.0);  // degenerate ellipse
    double b = std::sqrt(a * a - 1.0);
    cplx ip = 1.0 / p;
    double c1 = a * ip.real();
    double c2 = b * (cplx(0.0, 1.0) * ip).real();
    double theta = std::atan2(c2, c1);
    cplx beta(1.0 + a * std::cos(theta), b * std::sin(theta));
    if (std::abs((beta * ip).real() - 1.0) > 1e-12)
        throw std::runtime_error("solve_beta: tangency residual too large");
    return beta;
}

// --- power integrals --------------------------------------------------------

// INT_D |f_z^beta| for the power map f_tau converges iff
// Re(beta (tau-1)) + 2 > 0; the returned value is that exponent.
inline double power_integral_exponent(cplx tau, cplx beta) {
    if (!(tau.real() > 0.0))
        throw std::invalid_argument("power_integral_exponent: Re tau > 0 required");
    return (beta * (tau - 1.0)).real() + 2.0;
}

struct DiskIntegral {
    double value = 0.0;
    bool divergent = false;
};

// Average of |f_z^beta| over B(0, R) for the power map f_tau, by adaptive
// quadrature in u = log(1/|z|).  The branch of log f_z is the flow branch,
// which for power maps is the principal logarithm of (tau+1)/2 plus
// (tau-1) log|z|.
inline DiskIntegral complex_power_integral(const ModelMapParams& profile, cplx beta,
                                           double radius = 1.0, double tol = 1e-10) {
    if (!(radius > 0.0 && radius <= 1.0))
        throw std::invalid_argument("complex_power_integral: radius in (0,1] required");
    double e2 = power_integral_exponent(profile.tau, beta);
    if (e2 <= 0.0) return {0.0, true};
    cplx log_c = std::log(0.5 * (profile.tau + 1.0));
    double c_mod = std::exp((beta * log_c).real());
    double rate = (beta * (profile.tau - 1.0)).real();
    double u0 = std::log(1.0 / radius);
    // (1/(pi R^2)) INT_{|z|<R} |z|^rate dA = (2/R^2) INT_{u0}^{inf} e^{-(rate+2)u} du
    auto integrand = [&](double u) { return std::exp(-(rate + 2.0) * (u0 + u)); };
    HalflineResult h = integrate_halfline(integrand, tol);
    if (h.divergent) return {0.0, true};
    return {c_mod * 2.0 / (radius * radius) * h.value, false};
}

// Burkholder integral for a power-map profile via radial quadrature.  The
// substitution u = log(1/|z|) turns the integrand into a pure exponential,
// so extremal equality checks are exact up to roundoff.
inline double burkholder_integral(const ModelMapParams& profile, cplx p, cplx beta,
                                  double tol = 1e-8) {
    double k = std::abs(profile.eta());
    double pm1 = std::abs(p - 1.0);
    if (pm1 < 1.0 - 1e-12 || (k > 0.0 && pm1 > 1.0 / k + 1e-12))
        throw std::invalid_argument("burkholder_integral: infeasible p for this profile");
    if (std::abs(beta) + std::abs(beta - 2.0) > 2.0 * pm1 + 1e-9)
        throw std::invalid_argument("burkholder_integral: beta outside |beta|+|beta-2| <= 2|p-1|");
    cplx rho = solve_rho(p, k);
    cplx W = 1.0 + rho * k;                       // 1 + rho |mu|
    cplx A = 0.5 * (profile.tau + 1.0);           // f_z = A |z|^{tau-1}
    double geom = std::abs(A) * (std::abs(W) - std::abs(p) * k);
    cplx logAW = std::log(A * W);
    double pw0 = ((beta - 1.0) * logAW).real();
    double rate = profile.tau.real() - 1.0 + ((beta - 1.0) * (profile.tau - 1.0)).real() + 2.0;
    auto integrand = [&](double u) { return 2.0 * geom * std::exp(pw0 - rate * u); };
    HalflineResult h = integrate_halfline(integrand, tol);
    if (h.divergent || !h.converged)
        throw std::runtime_error("burkholder_integral: integrand fails to decay");
    return h.value;
}

// --- interpolation lemma lab ------------------------------------------------

// Analytic families of the form Phi_lambda(z) = A(lambda) |z|^{B(lambda)} on
// the measure (weight/pi) dA over the unit disk cover every family this lab
// exercises; log A carries the analytic branch continued from log A(0) = 0.
struct RadialPowerFamily {
    std::function<cplx(cplx)> log_A;
    std::function<cplx(cplx)> B;
    double weight = 1.0;
};

inline RadialPowerFamily constant_family() {
    return {[](cplx) { return cplx(0.0); }, [](cplx) { return cplx(0.0); }, 1.0};
}

// Flow family from the Burkholder variation built over the power-map
// coefficient matched to p (|mu| = k, rho from the argument condition):
// the normalizing factor cancels and
//   Phi_lambda(z) = |z|^{-2 c_p lambda / (1+lambda)},  weight = 1 - c_p,
// with c_p = p rho k / (1 + rho k) in [0,1].  Satisfies Phi_0 = 1 and
// ||Phi_lambda||_2 <= 1 on the whole unit disk of lambda.  Real p gives the
// radial stretch family, complex p the spiral one.
inline RadialPowerFamily flow_power_family(cplx p, double k) {
    cplx rho = solve_rho(p, k);
    cplx cp_c = p * rho * k / (1.0 + rho * k);
    double cp = cp_c.real();
    return {[](cplx) { return cplx(0.0); },
            [cp](cplx lam) { return -2.0 * cp * lam / (1.0 + lam); },
            1.0 - cp};
}

struct InterpolationCheck {
    cplx beta;
    double integral;    // INT |Phi_lambda^beta| dsigma (0 when divergent)
    bool divergent;
    bool pass;          // integral <= 1 + tol
};

// Evaluates INT |Phi_lambda^beta| dsigma for each beta by half-line
// quadrature.  Failures outside the lemma ellipse are reported as data, not
// errors; a family violating ||Phi_lambda||_p0 <= 1 (checked at lambda and on
// a ring of the same radius) is a precondition violation.
inline std::vector<InterpolationCheck> verify_interpolation(const RadialPowerFamily& family,
                                                            double p0, cplx lam,
                                                            const std::vector<cplx>& betas,
                                                            double tol = 1e-6) {
    if (!(p0 > 0.0)) throw std::invalid_argument("verify_interpolation: p0 > 0 required");
    if (!(std::abs(lam) < 1.0))
        throw std::invalid_argument("verify_interpolation: |lambda| < 1 required");
    if (std::abs(family.log_A(cplx(0.0))) > 1e-9 || std::abs(family.B(cplx(0.0))) > 1e-9)
        throw std::invalid_argument("verify_interpolation: family must satisfy Phi_0 = 1");

    auto norm_p0 = [&](cplx l) -> double {
        double amp = family.weight * std::exp(p0 * (family.log_A(l)).real());
        double rate = p0 * family.B(l).real() + 2.0;
        auto g = [&](double u) { return amp * 2.0 * std::exp(-rate * u); };
        HalflineResult h = integrate_halfline(g, 1e-10);
        if (h.divergent) return std::numeric_limits<double>::infinity();
        return std::pow(h.value, 1.0 / p0);
    };
    for (int j = 0; j < 16; ++j) {
        cplx l = std::abs(lam) * std::exp(cplx(0.0, 2.0 * kPi * j / 16.0));
        if (norm_p0(l) > 1.0 + 1e-6)
            throw std::invalid_argument(
                "verify_interpolation: precondition violation, ||Phi_lambda||_p0 > 1");
    }

    std::vector<InterpolationCheck> out;
    cplx logA = family.log_A(lam);
    cplx B = family.B(lam);
    for (cplx beta : betas) {
        double amp = family.weight * std::exp((beta * logA).real());
        double rate = (beta * B).real() + 2.0;
        auto g = [&](double u) { return amp * 2.0 * std::exp(-rate * u); };
        HalflineResult h = integrate_halfline(g, 1e-10);
        if (h.divergent)
            out.push_back({beta, 0.0, true, false});
        else
            out.push_back({beta, h.value, false, h.value <= 1.0 + tol});
    }
    return out;
}

}  // namespace qclab
