#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qclab/branch.hpp"
#include "qclab/util.hpp"

namespace qclab {

// Box-counting dimension estimation and the Minkowski-type spectrum counter.

struct BoxCountRow {
    double scale;
    std::size_t count;
    double log_ratio;  // log(count) / log(1/scale)
};

struct BoxCountResult {
    std::vector<BoxCountRow> per_scale;
    double fit;  // least-squares slope of log(count) vs log(1/scale)
};

// Occupied-cell counts on grids anchored at the bounding-box corner (fixed
// anchor, no random offsets).
inline BoxCountResult box_counting_dimension(const std::vector<cplx>& points,
                                             const std::vector<double>& scales) {
    if (points.empty()) throw std::invalid_argument("box_counting_dimension: no points");
    if (scales.size() < 2) throw std::invalid_argument("box_counting_dimension: need >= 2 scales");
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    for (cplx p : points) {
        x0 = std::min(x0, p.real());
        y0 = std::min(y0, p.imag());
    }
    BoxCountResult out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double s : scales) {
        if (!(s > 0.0 && s < 1.0))
            throw std::invalid_argument("box_counting_dimension: scales must lie in (0,1)");
        std::unordered_set<std::uint64_t> cells;
        cells.reserve(points.size());
        for (cplx p : points) {
            auto ix = static_cast<std::int64_t>(std::floor((p.real() - x0) / s));
            auto iy = static_cast<std::int64_t>(std::floor((p.imag() - y0) / s));
            cells.insert((static_cast<std::uint64_t>(ix) << 32) ^
                         static_cast<std::uint32_t>(iy));
        }
        double lx = std::log(1.0 / s);
        double ly = std::log(static_cast<double>(cells.size()));
        out.per_scale.push_back({s, cells.size(), ly / lx});
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = static_cast<double>(scales.size());
    double denom = n * sxx - sx * sx;
    out.fit = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    return out;
}

struct MinkowskiResult {
    std::size_t count;
    double log_ratio;
};

struct MinkowskiOptions {
    double far_scale = 1e8;  // principal-branch anchor distance
    int max_relink = 8;      // midpoint insertions when a neighbor jump is too large
};

// Greedy maximal packing of disjoint disks B(z, scale) whose stretch and
// rotation quotients at offset `scale` fall inside (alpha +- eps) and
// (gamma +- eps).  Candidates live on a lattice of spacing scale/2 inside the
// domain disk; the argument uses one branch of log((f(z+scale)-f(z))/scale),
// anchored by a principal trace from far away at the first candidate and
// propagated across lattice neighbors by continuity.  Candidates whose branch
// cannot be connected are dropped, so the count is a lower bound.
inline MinkowskiResult minkowski_spectrum_estimate(const MapFn& f, double alpha, double gamma,
                                                   double eps, double scale, cplx domain_center,
                                                   double domain_radius,
                                                   MinkowskiOptions opts = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("minkowski: eps > 0 required");
    if (!(scale > 0.0 && scale < domain_radius))
        throw std::invalid_argument("minkowski: scale must be positive and small vs domain");
    double h = 0.5 * scale;
    long half = static_cast<long>(std::floor(domain_radius / h));
    long width = 2 * half + 1;

    struct Cand {
        cplx z;
        cplx logq = 0.0;    // branch value of log((f(z+scale)-f(z))/scale)
        bool valid = false; // quotient finite and nonzero
        bool linked = false;
    };
    std::vector<Cand> cand;
    cand.reserve(static_cast<std::size_t>(width) * width);
    std::vector<long> index(static_cast<std::size_t>(width) * width, -1);
    for (long iy = -half; iy <= half; ++iy)
        for (long ix = -half; ix <= half; ++ix) {
            cplx z = domain_center + cplx(ix * h, iy * h);
            if (std::abs(z - domain_center) > domain_radius) continue;
            index[static_cast<std::size_t>((iy + half) * width + (ix + half))] =
                static_cast<long>(cand.size());
            cand.push_back({z});
        }
    if (cand.empty()) return {0, kNegInf};

    auto quotient = [&](cplx z) -> cplx { return (f(z + scale) - f(z)) / scale; };
    for (auto& c : cand) {
        cplx q = quotient(c.z);
        c.valid = std::isfinite(q.real()) && std::isfinite(q.imag()) && q != cplx(0.0);
        if (c.valid) c.logq = std::log(q);  // modulus part final; argument re-based below
    }

    // anchor the branch at the first valid candidate via a principal trace
    long anchor = -1;
    for (std::size_t i = 0; i < cand.size(); ++i)
        if (cand[i].valid) {
            anchor = static_cast<long>(i);
            break;
        }
    if (anchor < 0) return {0, kNegInf};
    {
        auto est = estimate_exponents(f, cand[anchor].z, {scale},
                                      {cplx(1.0, 0.0), true, opts.far_scale});
        cand[anchor].logq = est[0].logval;
        cand[anchor].linked = true;
    }

    // BFS over 4-neighbor lattice adjacency, unwrapping arguments
    auto relink = [&](cplx za, cplx la, cplx zb, cplx qb) -> std::pair<bool, cplx> {
        // connect log along the segment za -> zb with midpoint insertions
        cplx qa = std::exp(la);
        cplx z0 = za, l0 = la, q0 = qa;
        int steps = 1 << opts.max_relink;
        cplx dz = (zb - z0) / static_cast<double>(steps);
        for (int i = 1; i <= steps; ++i) {
            cplx z1 = z0 + dz;
            cplx q1 = (i == steps) ? qb : quotient(z1);
            if (q1 == cplx(0.0) || !std::isfinite(q1.real())) return {false, 0.0};
            cplx ratio = q1 / q0;
            if (std::abs(std::arg(ratio)) >= kPi / 2.0) return {false, 0.0};
            l0 += std::log(ratio);
            z0 = z1;
            q0 = q1;
        }
        return {true, l0};
    };

    std::vector<long> queue{anchor};
    const long dx[4] = {1, -1, 0, 0};
    const long dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        long ci = queue.back();
        queue.pop_back();
        const Cand& c = cand[static_cast<std::size_t>(ci)];
        long cix = std::lround((c.z.real() - domain_center.real()) / h) + half;
        long ciy = std::lround((c.z.imag() - domain_center.imag()) / h) + half;
        for (int k = 0; k < 4; ++k) {
            long nx = cix + dx[k], ny = ciy + dy[k];
            if (nx < 0 || ny < 0 || nx >= width || ny >= width) continue;
            long ni = index[static_cast<std::size_t>(ny * width + nx)];
            if (ni < 0) continue;
            Cand& nb = cand[static_cast<std::size_t>(ni)];
            if (!nb.valid || nb.linked) continue;
            cplx qn = std::exp(nb.logq);
            cplx ratio = qn / std::exp(c.logq);
            if (std::abs(std::arg(ratio)) < kPi / 2.0) {
                nb.logq = c.logq + std::log(ratio);
            } else {
                auto [ok, lv] = relink(c.z, c.logq, nb.z, qn);
                if (!ok) continue;
                nb.logq = lv;
            }
            nb.linked = true;
            queue.push_back(ni);
        }
    }

    // qualification windows on the quotient exponents, then greedy packing
    // with a hash-grid occupancy check (cell side 2*scale)
    double log_scale = std::log(scale);
    std::vector<cplx> accepted;
    double min_dist2 = 4.0 * scale * scale;
    double cell = 2.0 * scale;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> occupancy;
    auto cell_key = [&](double x, double y) {
        auto cx = static_cast<std::int64_t>(std::floor(x / cell));
        auto cy = static_cast<std::int64_t>(std::floor(y / cell));
        return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
    };
    for (const auto& c : cand) {
        if (!c.valid || !c.linked) continue;
        double log_df = c.logq.real() + log_scale;
        double a_est = log_df / log_scale;
        double g_est = c.logq.imag() / log_df;
        if (std::abs(a_est - alpha) > eps || std::abs(g_est - gamma) > eps) continue;
        bool clash = false;
        for (int oy = -1; oy <= 1 && !clash; ++oy)
            for (int ox = -1; ox <= 1 && !clash; ++ox) {
                auto it = occupancy.find(cell_key(c.z.real() + ox * cell, c.z.imag() + oy * cell));
                if (it == occupancy.end()) continue;
                for (std::uint32_t ai : it->second)
                    if (std::norm(accepted[ai] - c.z) < min_dist2) {
                        clash = true;
                        break;
                    }
            }
        if (!clash) {
            occupancy[cell_key(c.z.real(), c.z.imag())].push_back(
                static_cast<std::uint32_t>(accepted.size()));
            accepted.push_back(c.z);
        }
    }
    std::size_t count = accepted.size();
    double lr = count == 0 ? kNegInf : std::log(static_cast<double>(count)) / std::log(1.0 / scale);
    return {count, lr};
}

}  // namespace qclab
