#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclab/util.hpp"

namespace qclab {

using MapFn = std::function<cplx(cplx)>;

// Continuous single-valued branches of log((f(z)-f(w))/(z-w)) along paths.
//
// A trace is built by accumulating principal logs of consecutive quotient
// ratios; a segment whose argument jump reaches pi/2 is bisected (threshold
// pi/2 rather than pi as an aliasing margin).  Exact continuity then holds by
// telescoping: exp(logval_i) equals the quotient at every sample up to
// rounding.

struct BranchSample {
    cplx z;
    cplx logval;
};

struct BranchTrace {
    cplx basepoint;
    std::vector<BranchSample> samples;
    int refinement_depth = 0;
};

struct BranchSeed {
    enum class Kind { PrincipalAtStart, Explicit };
    Kind kind = Kind::PrincipalAtStart;
    cplx value{};

    static BranchSeed principal() { return {}; }
    static BranchSeed explicit_log(cplx v) { return {Kind::Explicit, v}; }
};

namespace detail {

inline cplx branch_quotient(const MapFn& f, cplx w, cplx fw, cplx z) {
    cplx q = (f(z) - fw) / (z - w);
    if (!(std::isfinite(q.real()) && std::isfinite(q.imag())) || q == cplx(0.0))
        throw std::runtime_error("track_branch: branch undefined (zero or non-finite quotient at z=" +
                                 format_complex(z) + ")");
    return q;
}

struct BranchStepper {
    const MapFn& f;
    cplx w, fw;
    double jump_threshold;
    int max_depth;
    BranchTrace* out;

    // Advances from (za, qa, la) to zb, bisecting until each argument jump is
    // below the threshold.  Appends all intermediate samples.
    cplx step(cplx za, cplx qa, cplx la, cplx zb, int depth) {
        cplx qb = branch_quotient(f, w, fw, zb);
        cplx ratio = qb / qa;
        if (std::abs(std::arg(ratio)) < jump_threshold) {
            cplx lb = la + std::log(ratio);
            out->samples.push_back({zb, lb});
            if (depth > out->refinement_depth) out->refinement_depth = depth;
            return lb;
        }
        if (depth >= max_depth)
            throw std::runtime_error(
                "track_branch: no convergence, refinement cap reached on segment [" +
                format_complex(za) + ", " + format_complex(zb) + "]");
        cplx zm = 0.5 * (za + zb);
        cplx lm = step(za, qa, la, zm, depth + 1);
        cplx qm = branch_quotient(f, w, fw, zm);
        return step(zm, qm, lm, zb, depth + 1);
    }
};

}  // namespace detail

inline BranchTrace track_branch(const MapFn& f, cplx w, const std::vector<cplx>& path,
                                BranchSeed seed = BranchSeed::principal(),
                                double jump_threshold = kPi / 2.0, int max_depth = 40) {
    if (path.size() < 1) throw std::invalid_argument("track_branch: empty path");
    BranchTrace trace;
    trace.basepoint = w;
    cplx fw = f(w);
    cplx q0 = detail::branch_quotient(f, w, fw, path.front());
    cplx l0;
    if (seed.kind == BranchSeed::Kind::PrincipalAtStart) {
        l0 = std::log(q0);
    } else {
        l0 = seed.value;
        if (std::abs(std::exp(l0) - q0) > 1e-9 * std::abs(q0))
            throw std::invalid_argument("track_branch: explicit seed does not exponentiate to the quotient");
    }
    trace.samples.push_back({path.front(), l0});
    detail::BranchStepper stepper{f, w, fw, jump_threshold, max_depth, &trace};
    cplx za = path.front(), qa = q0, la = l0;
    for (size_t i = 1; i < path.size(); ++i) {
        la = stepper.step(za, qa, la, path[i], 0);
        za = path[i];
        qa = detail::branch_quotient(f, w, fw, za);
    }
    return trace;
}

// Number of full turns accumulated along the trace.
inline long winding_count(const BranchTrace& trace) {
    double di = trace.samples.back().logval.imag() - trace.samples.front().logval.imag();
    return static_cast<long>(std::floor(std::abs(di) / (2.0 * kPi)));
}

// Per-radius stretch and rotation estimates:
//   alpha_r = log|f(z+r d) - f(z)| / log r
//   gamma_r = arg(f(z+r d) - f(z)) / log|f(z+r d) - f(z)|
// with the argument taken from one continuous branch across all radii, so
// the per-radius values share a single branch choice.  No limit is taken;
// the full sequence is the output.
struct ExponentEstimate {
    double r;
    double alpha_r;
    double gamma_r;
    cplx logval;  // branch value of log((f(z+r d)-f(z))/(r d)) at this radius
};

struct ExponentOptions {
    cplx direction{1.0, 0.0};  // approach direction (unit modulus)
    bool seed_from_infinity = false;
    double far_scale = 1e10;   // lead-in start when seeding from infinity
};

inline std::vector<ExponentEstimate> estimate_exponents(const MapFn& f, cplx z,
                                                        std::vector<double> radii,
                                                        ExponentOptions opts = {}) {
    if (radii.empty()) throw std::invalid_argument("estimate_exponents: no radii");
    for (size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]))
            throw std::invalid_argument("estimate_exponents: radii must be strictly decreasing");
    cplx dir = opts.direction / std::abs(opts.direction);

    std::vector<cplx> path;
    if (opts.seed_from_infinity) {
        // geometric lead-in from far_scale down to the first radius
        double t = opts.far_scale;
        while (t > radii.front() * 2.0) {
            path.push_back(z + t * dir);
            t *= 0.5;
        }
    }
    for (double r : radii) path.push_back(z + r * dir);

    BranchTrace trace = track_branch(f, z, path, BranchSeed::principal());

    // pick the trace samples at the requested radii (path nodes are a subset
    // of trace samples; match by position)
    std::vector<ExponentEstimate> out;
    size_t want = 0;
    for (const auto& s : trace.samples) {
        if (want >= radii.size()) break;
        cplx target = z + radii[want] * dir;
        if (std::abs(s.z - target) <= 1e-15 * (1.0 + std::abs(target))) {
            double r = radii[want];
            double logr = std::log(r);
            double log_df = s.logval.real() + logr;  // log|f(z+rd)-f(z)|
            out.push_back({r, log_df / logr, s.logval.imag() / log_df, s.logval});
            ++want;
        }
    }
    if (out.size() != radii.size())
        throw std::logic_error("estimate_exponents: trace did not visit all radii");
    return out;
}

// Local log inequality slack for a map normalized by f(0)=0, f(1)=1:
//   slack = (K-1/K)/2 * log(1/r) - |log f(r) - (K+1/K)/2 * log r|
// with the branch fixed by log f(1) = 0.  Zero exactly for the extremal
// model maps whose exponent lies on the parameter circle.
inline double check_local_inequality(const MapFn& f, double K, double r) {
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("check_local_inequality: r in (0,1) required");
    if (std::abs(f(cplx(0.0))) > 1e-9 || std::abs(f(cplx(1.0)) - 1.0) > 1e-9)
        throw std::invalid_argument("check_local_inequality: map not normalized (f(0)=0, f(1)=1)");
    // log f(t) = log((f(t)-f(0))/(t-0)) + log t; seed log f(1) = 0.
    std::vector<cplx> path;
    double t = 1.0;
    while (t > r * 1.0000000001) {
        path.push_back(t);
        t *= 0.7;
    }
    path.push_back(r);
    BranchTrace trace = track_branch(f, 0.0, path, BranchSeed::principal());
    cplx log_fr = trace.samples.back().logval + std::log(r);
    double c = 0.5 * (K + 1.0 / K);
    double a = 0.5 * (K - 1.0 / K);
    return a * std::log(1.0 / r) - std::abs(log_fr - c * std::log(r));
}

}  // namespace qclab
