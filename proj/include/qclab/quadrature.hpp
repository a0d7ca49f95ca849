#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qclab {

// Gauss-Kronrod 7/15 pair on [0,1].  xgk[1], xgk[3], ... are the abscissae of
// the embedded 7-point Gauss rule.
namespace gk {
inline constexpr double xgk[15] = {
    0.0042723144395936940576063989283284, 0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,  0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,   0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,    0.5,
    0.6038924775039492542916264028463,    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,   0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,   0.97455395617137918762296067143325,
    0.99572768556040625043124236981384};

inline constexpr double wgk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double wg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};
}  // namespace gk

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

namespace detail {

struct PanelEstimate {
    double q15, q7;
};

template <typename Fn>
inline PanelEstimate gk_panel(const Fn& f, double a, double b) {
    double h = b - a;
    double q15 = 0.0, q7 = 0.0;
    for (int j = 0; j < 15; ++j) {
        double y = f(a + h * gk::xgk[j]);
        q15 += gk::wgk[j] * y;
        if (j % 2 == 1) q7 += gk::wg[j / 2] * y;
    }
    return {q15 * h, q7 * h};
}

template <typename Fn>
inline void gk_adapt(const Fn& f, double a, double b, double tol, int depth, int max_depth,
                     QuadResult& out) {
    PanelEstimate p = gk_panel(f, a, b);
    out.evaluations += 15;
    double err = std::abs(p.q15 - p.q7);
    if (err <= tol || depth >= max_depth) {
        out.value += p.q15;
        out.error += err;
        if (err > tol) out.converged = false;
        return;
    }
    double m = 0.5 * (a + b);
    gk_adapt(f, a, m, 0.5 * tol, depth + 1, max_depth, out);
    gk_adapt(f, m, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]; tol is absolute.
template <typename Fn>
inline QuadResult integrate_adaptive(const Fn& f, double a, double b, double tol = 1e-10,
                                     int max_depth = 48) {
    QuadResult out;
    detail::gk_adapt(f, a, b, tol, 0, max_depth, out);
    return out;
}

struct HalflineResult {
    double value = 0.0;
    bool divergent = false;
    bool converged = true;
};

// Integrates f over [0, inf) for integrands with eventual exponential decay.
// Unit panels are accumulated until their contribution falls below tol; if
// panel contributions fail to decay (three consecutive increases past the
// first few panels, or the panel cap is hit while still growing) the integral
// is reported divergent rather than truncated.
template <typename Fn>
inline HalflineResult integrate_halfline(const Fn& f, double tol = 1e-8, int max_panels = 10000) {
    HalflineResult out;
    double prev = 0.0;
    int rising = 0;
    for (int m = 0; m < max_panels; ++m) {
        QuadResult panel = integrate_adaptive(f, m, m + 1.0, tol * 0.25, 30);
        out.value += panel.value;
        double mag = std::abs(panel.value);
        if (m > 2) {
            if (mag > prev * (1.0 + 1e-12) && mag > tol)
                ++rising;
            else
                rising = 0;
            if (rising >= 3) {
                out.divergent = true;
                return out;
            }
        }
        if (mag < tol * (1.0 + std::abs(out.value)) && m >= 2) return out;
        prev = mag;
    }
    // Ran out of panels: decaying-but-slow integrands are reported as
    // non-converged, growing ones as divergent.
    out.converged = false;
    out.divergent = std::abs(prev) > tol;
    return out;
}

}  // namespace qclab
