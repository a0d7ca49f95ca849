#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "qclab/branch.hpp"
#include "qclab/grid.hpp"
#include "qclab/model_map.hpp"
#include "qclab/util.hpp"

namespace qclab {

// Grid Beltrami solver.  Principal solutions of f_zbar = mu f_z with
// compactly supported mu are produced by the Neumann iteration
//
//   omega <- mu S(omega) + mu,   f_zbar = omega,  f_z = 1 + S(omega),
//   f = z + C(omega),
//
// where S is the Beurling transform (Fourier multiplier conj(zeta)/zeta,
// fixed by the convention S(dbar phi) = d phi) and C the Cauchy transform
// (multiplier -2i/zeta).  Both act spectrally on the periodized box; the
// guard margin (box half-extent >= 2x the support radius) keeps the
// periodization error at the few-1e-3 level on the unit disk.  C additionally
// carries mean(g) * (conj(z) - conj(z_c)): the periodic inverse of dbar only
// exists on mean-free data, and this term restores dbar(Cg) = g exactly for
// the rest.

namespace detail {

class Fft2D {
  public:
    Fft2D(int nx, int ny) : nx_(nx), ny_(ny), buf_(static_cast<std::size_t>(nx) * ny) {
        fwd_ = fftw_plan_dft_2d(ny_, nx_, reinterpret_cast<fftw_complex*>(buf_.data()),
                                reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(ny_, nx_, reinterpret_cast<fftw_complex*>(buf_.data()),
                                reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("Fft2D: plan creation failed");
    }
    ~Fft2D() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    // applies the multiplier m(zeta), zeta = kx + i ky, in place on `field`
    template <typename Mult>
    void apply(std::vector<cplx>& field, double Lx, double Ly, Mult&& m) {
        buf_ = field;
        fftw_execute(fwd_);
        const double fx = 2.0 * kPi / Lx, fy = 2.0 * kPi / Ly;
        for (int iy = 0; iy < ny_; ++iy) {
            double ky = fy * (iy < ny_ / 2 ? iy : iy - ny_);
            for (int ix = 0; ix < nx_; ++ix) {
                double kx = fx * (ix < nx_ / 2 ? ix : ix - nx_);
                buf_[static_cast<std::size_t>(iy) * nx_ + ix] *= m(cplx(kx, ky));
            }
        }
        fftw_execute(bwd_);
        double scale = 1.0 / (static_cast<double>(nx_) * ny_);
        field = buf_;
        for (cplx& v : field) v *= scale;
    }

  private:
    int nx_, ny_;
    std::vector<cplx> buf_;
    fftw_plan fwd_, bwd_;
};

inline void check_fft_grid(const ComplexGrid& g, const char* who) {
    if (!g.power_of_two_dims())
        throw std::invalid_argument(std::string(who) + ": grid dimensions must be powers of two");
}

// support radius about the box center; 0 for identically zero fields
inline double support_radius(const ComplexGrid& g) {
    cplx zc = g.box_center();
    double r = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            if (g.at(ix, iy) != cplx(0.0)) r = std::max(r, std::abs(g.z_at(ix, iy) - zc));
    return r;
}

inline bool margin_ok(const ComplexGrid& g) {
    double half = 0.5 * g.spacing * std::min(g.nx, g.ny);
    double rs = support_radius(g);
    return rs == 0.0 || half >= 2.0 * rs * (1.0 - 1e-12);
}

}  // namespace detail

// Beurling transform: multiplier conj(zeta)/zeta, zero mode annihilated
// (matching the transform's action on compactly supported data, whose image
// integrates to zero).  Sets *aliasing_warning when the support of g leaves
// the guarded interior.
inline ComplexGrid beurling_transform(const ComplexGrid& g, bool* aliasing_warning = nullptr) {
    detail::check_fft_grid(g, "beurling_transform");
    if (aliasing_warning) *aliasing_warning = !detail::margin_ok(g);
    ComplexGrid out = g;
    detail::Fft2D fft(g.nx, g.ny);
    fft.apply(out.data, g.nx * g.spacing, g.ny * g.spacing,
              [](cplx zeta) { return zeta == cplx(0.0) ? cplx(0.0) : std::conj(zeta) / zeta; });
    return out;
}

// Cauchy transform: solves dbar F = g with F = mean-free periodic part plus
// mean(g) (conj(z) - conj(z_c)).
inline ComplexGrid cauchy_transform(const ComplexGrid& g, bool* aliasing_warning = nullptr) {
    detail::check_fft_grid(g, "cauchy_transform");
    if (aliasing_warning) *aliasing_warning = !detail::margin_ok(g);
    ComplexGrid out = g;
    detail::Fft2D fft(g.nx, g.ny);
    fft.apply(out.data, g.nx * g.spacing, g.ny * g.spacing, [](cplx zeta) {
        return zeta == cplx(0.0) ? cplx(0.0) : cplx(0.0, -2.0) / zeta;
    });
    cplx mean = 0.0;
    for (cplx v : g.data) mean += v;
    mean /= static_cast<double>(g.size());
    if (mean != cplx(0.0)) {
        cplx zc = g.box_center();
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                out.at(ix, iy) += mean * std::conj(g.z_at(ix, iy) - zc);
    }
    return out;
}

// spectral d/dz and d/dzbar (test oracles and internal consistency checks)
inline ComplexGrid spectral_dbar(const ComplexGrid& g) {
    detail::check_fft_grid(g, "spectral_dbar");
    ComplexGrid out = g;
    detail::Fft2D fft(g.nx, g.ny);
    fft.apply(out.data, g.nx * g.spacing, g.ny * g.spacing,
              [](cplx zeta) { return cplx(0.0, 0.5) * zeta; });
    return out;
}

inline ComplexGrid spectral_d(const ComplexGrid& g) {
    detail::check_fft_grid(g, "spectral_d");
    ComplexGrid out = g;
    detail::Fft2D fft(g.nx, g.ny);
    fft.apply(out.data, g.nx * g.spacing, g.ny * g.spacing,
              [](cplx zeta) { return cplx(0.0, 0.5) * std::conj(zeta); });
    return out;
}

struct FlowResult {
    cplx lambda{};
    ComplexGrid f;      // values of f - z
    ComplexGrid fz;     // f_z (= 1 + S omega)
    ComplexGrid fzbar;  // omega
    int series_terms = 0;
    double residual = 0.0;
    bool aliasing_warning = false;
};

struct SolverOptions {
    double tol = 1e-10;
    int max_iterations = 400;
};

namespace detail {

inline FlowResult solve_scaled(const ComplexGrid& mu, cplx lambda_label, cplx scale,
                               SolverOptions opts) {
    check_fft_grid(mu, "solve_principal");
    double kinf = 0.0;
    for (cplx v : mu.data) kinf = std::max(kinf, std::abs(v) * std::abs(scale));
    if (kinf >= 1.0)
        throw std::invalid_argument("solve_principal: ||mu||_inf must be < 1");
    if (!margin_ok(mu))
        throw std::invalid_argument("solve_principal: support must sit inside half the box extent");

    std::size_t n = mu.size();
    std::vector<cplx> muv(n);
    for (std::size_t i = 0; i < n; ++i) muv[i] = mu.data[i] * scale;

    FlowResult res;
    res.lambda = lambda_label;
    res.f = ComplexGrid(mu.nx, mu.ny, mu.origin, mu.spacing);
    res.fz = ComplexGrid(mu.nx, mu.ny, mu.origin, mu.spacing);
    res.fzbar = ComplexGrid(mu.nx, mu.ny, mu.origin, mu.spacing);

    if (kinf == 0.0) {
        for (std::size_t i = 0; i < n; ++i) res.fz.data[i] = 1.0;
        res.series_terms = 1;
        return res;
    }

    Fft2D fft(mu.nx, mu.ny);
    double Lx = mu.nx * mu.spacing, Ly = mu.ny * mu.spacing;
    auto beurling_mult = [](cplx zeta) {
        return zeta == cplx(0.0) ? cplx(0.0) : std::conj(zeta) / zeta;
    };

    std::vector<cplx> omega = muv;
    std::vector<cplx> work(n);
    double prev_inc = -1.0;
    int growth_streak = 0;
    int iter = 1;
    for (; iter < opts.max_iterations; ++iter) {
        work = omega;
        fft.apply(work, Lx, Ly, beurling_mult);  // S omega
        double inc2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx next = muv[i] * work[i] + muv[i];
            inc2 += std::norm(next - omega[i]);
            omega[i] = next;
        }
        double inc = mu.spacing * std::sqrt(inc2);
        if (prev_inc >= 0.0) {
            growth_streak = inc > prev_inc ? growth_streak + 1 : 0;
            if (growth_streak >= 3)
                throw std::runtime_error("solve_principal: divergence, increments growing");
        }
        prev_inc = inc;
        if (inc < opts.tol) break;
    }
    if (iter >= opts.max_iterations)
        throw std::runtime_error("solve_principal: iteration cap reached before tolerance");

    res.fzbar.data = omega;
    work = omega;
    fft.apply(work, Lx, Ly, beurling_mult);
    double resid2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.fz.data[i] = 1.0 + work[i];
        resid2 += std::norm(omega[i] - muv[i] * res.fz.data[i]);
    }
    res.residual = mu.spacing * std::sqrt(resid2);
    res.series_terms = iter + 1;
    res.f = cauchy_transform(res.fzbar, &res.aliasing_warning);
    return res;
}

}  // namespace detail

// Principal solution of f_zbar = mu f_z (the lambda = ||mu||_inf position of
// the flow).
inline FlowResult solve_principal(const ComplexGrid& mu, SolverOptions opts = {}) {
    double kinf = 0.0;
    for (cplx v : mu.data) kinf = std::max(kinf, std::abs(v));
    return detail::solve_scaled(mu, cplx(kinf, 0.0), cplx(1.0, 0.0), opts);
}

// Flow solution for mu_lambda = lambda mu / ||mu||_inf, |lambda| < 1.
inline FlowResult solve_flow(const ComplexGrid& mu, cplx lambda, SolverOptions opts = {}) {
    if (!(std::abs(lambda) < 1.0))
        throw std::invalid_argument("solve_flow: |lambda| < 1 required");
    double kinf = 0.0;
    for (cplx v : mu.data) kinf = std::max(kinf, std::abs(v));
    cplx scale = kinf == 0.0 ? cplx(0.0) : lambda / kinf;
    return detail::solve_scaled(mu, lambda, scale, opts);
}

// Map evaluator backed by a solved grid: f(z) = z + interp(f - z), identity
// outside the box (the correction decays toward the guard boundary).
inline MapFn grid_map_evaluator(const FlowResult& res) {
    const ComplexGrid* f = &res.f;
    return [f](cplx z) -> cplx { return f->contains(z) ? z + f->interpolate(z) : z; };
}

// --- log f_z along the flow ---------------------------------------------------

// Continuous branch of log f_z over the grid, continued along the lambda
// radius 0 -> ||mu||_inf from log 1 = 0.  Steps double until every cell's
// jump stays below pi/2.
inline ComplexGrid log_derivative_flow(const ComplexGrid& mu, int initial_steps = 8,
                                       int max_steps = 256, SolverOptions opts = {}) {
    double kinf = 0.0;
    for (cplx v : mu.data) kinf = std::max(kinf, std::abs(v));
    if (kinf == 0.0) return ComplexGrid(mu.nx, mu.ny, mu.origin, mu.spacing);

    int steps = initial_steps;
    while (true) {
        bool ok = true;
        ComplexGrid log_fz(mu.nx, mu.ny, mu.origin, mu.spacing);
        std::vector<cplx> prev_fz(mu.size(), cplx(1.0));
        for (int s = 1; s <= steps && ok; ++s) {
            cplx lam = kinf * static_cast<double>(s) / steps;
            FlowResult fr = solve_flow(mu, lam, opts);
            for (std::size_t i = 0; i < mu.size(); ++i) {
                cplx ratio = fr.fz.data[i] / prev_fz[i];
                if (!(std::abs(std::arg(ratio)) < kPi / 2.0)) {
                    ok = false;
                    break;
                }
                log_fz.data[i] += std::log(ratio);
                prev_fz[i] = fr.fz.data[i];
            }
        }
        if (ok) return log_fz;
        steps *= 2;
        if (steps > max_steps)
            throw std::runtime_error("log_derivative_flow: lambda continuation needs denser steps");
    }
}

struct CompareLogResult {
    cplx analytic_log;
    cplx geometric_log;
    cplx difference;
};

// Analytic vs geometric branch of log f_z at probe z.
//
// Analytic: continuation of lambda -> log f_z^lambda(z) along the given
// radial lambda list from log 1 = 0.  Geometric: principal-branch limit
//   lim_{t->0+} log[(f(z+t)-f(z))/t] - log(1 + mu(z))
// computed from the lambda-endpoint grid map with a trace seeded at the box
// edge and Richardson extrapolation in t over exact grid nodes.
inline CompareLogResult compare_log_branches(const ComplexGrid& mu, cplx z,
                                             const std::vector<cplx>& lambdas,
                                             SolverOptions opts = {}) {
    if (lambdas.size() < 2 || std::abs(lambdas.front()) != 0.0)
        throw std::invalid_argument("compare_log_branches: lambda list must start at 0");
    int ix, iy;
    mu.nearest_node(z, ix, iy);
    cplx probe = mu.z_at(ix, iy);

    cplx analytic = 0.0;
    cplx prev_fz = 1.0;
    FlowResult last;
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        last = solve_flow(mu, lambdas[i], opts);
        cplx fzv = last.fz.at(ix, iy);
        cplx ratio = fzv / prev_fz;
        if (!(std::abs(std::arg(ratio)) < kPi / 2.0))
            throw std::runtime_error("compare_log_branches: needs denser lambdas");
        analytic += std::log(ratio);
        prev_fz = fzv;
    }

    MapFn f = grid_map_evaluator(last);
    double h = mu.spacing;
    // start the principal trace well outside the box, where f is the identity
    double start = 3.0 * h * std::min(mu.nx, mu.ny);
    std::vector<cplx> path;
    for (double t = start; t > 8.0 * h; t *= 0.5) path.push_back(probe + t);
    path.push_back(probe + 4.0 * h);
    path.push_back(probe + 2.0 * h);
    BranchTrace trace = track_branch(f, probe, path, BranchSeed::principal());
    // bisection may insert midpoints, so locate the t = 4h sample explicitly
    cplx t1_node = probe + 4.0 * h;
    cplx L1{}, L0 = trace.samples.back().logval;  // final sample is t = 2h
    for (auto it = trace.samples.rbegin(); it != trace.samples.rend(); ++it)
        if (std::abs(it->z - t1_node) <= 1e-14 * (1.0 + std::abs(t1_node))) {
            L1 = it->logval;
            break;
        }
    // log Q(t) = log(f_z (1 + mu)) + O(t): Richardson in t
    cplx limit = 2.0 * L0 - L1;
    double kinf = 0.0;
    for (cplx v : mu.data) kinf = std::max(kinf, std::abs(v));
    cplx mu_end = kinf == 0.0 ? cplx(0.0) : mu.at(ix, iy) * (lambdas.back() / kinf);
    cplx geometric = limit - std::log(1.0 + mu_end);
    return {analytic, geometric, analytic - geometric};
}

// --- standard coefficients ----------------------------------------------------

namespace detail {
// characteristic function of the unit disk with 4x4 supersampling on cells
// straddling the circle; sharp mu jumps otherwise dominate the L2 error
inline double disk_indicator(cplx z, double h) {
    double r = std::abs(z);
    if (r < 1.0 - h) return 1.0;
    if (r > 1.0 + h) return 0.0;
    int hits = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            cplx p = z + h * cplx((a + 0.5) / 4.0 - 0.5, (b + 0.5) / 4.0 - 0.5);
            if (std::abs(p) <= 1.0) ++hits;
        }
    return hits / 16.0;
}
}  // namespace detail

// mu of the model power map: eta (z/conj z) on the unit disk
inline ComplexGrid radial_power_mu(int n, cplx tau, double halfwidth = 2.0) {
    ModelMapParams params(tau);
    cplx eta = params.eta();
    ComplexGrid g = make_square_grid(n, halfwidth);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            cplx z = g.z_at(ix, iy);
            double w = detail::disk_indicator(z, g.spacing);
            if (w == 0.0 || z == cplx(0.0)) continue;
            g.at(ix, iy) = eta * (z / std::conj(z)) * w;
        }
    return g;
}

inline ComplexGrid constant_mu(int n, cplx c, double halfwidth = 2.0) {
    if (!(std::abs(c) < 1.0)) throw std::invalid_argument("constant_mu: |c| < 1 required");
    ComplexGrid g = make_square_grid(n, halfwidth);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            g.at(ix, iy) = c * detail::disk_indicator(g.z_at(ix, iy), g.spacing);
    return g;
}

// extremal spiral coefficient at distortion K: tau at the top of the
// parameter circle, tau = (K+1/K)/2 + i (K-1/K)/2
inline ComplexGrid spiral_extremal_mu(int n, double K, double halfwidth = 2.0) {
    if (!(K > 1.0)) throw std::invalid_argument("spiral_extremal_mu: K > 1 required");
    return radial_power_mu(n, cplx(0.5 * (K + 1.0 / K), 0.5 * (K - 1.0 / K)), halfwidth);
}

}  // namespace qclab
