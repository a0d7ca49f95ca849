#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclab/region.hpp"
#include "qclab/spectra.hpp"
#include "qclab/util.hpp"

namespace qclab {

// Extremal map construction: nested annuli carrying iterated spiral maps.
//
// Given K > 1 and an admissible exponent tau = alpha(1 + i gamma) strictly
// inside the pointwise disk, the cone parameter t in (0,1] is the smallest
// positive number with 1 + (tau-1)/t =: tau0 on the boundary circle.  The
// tree then nests, inside each level-(j-1) annulus' inner disk of radius
// s r^{j-1} (s = r^t), N = floor(s/2r)^2 level-j disks of radius r^j.  Each
// annulus carries the rotation map
//
//   psi_B(z) = w + R ((z-w)/|z-w|) (|z-w|/R)^{tau0}        on B \ sB
//
// extended by the similarity z -> w + s^{tau0 - 1}(z-w) inside sB (the factor
// is forced by continuity at |z-w| = sR) and by the identity outside B.  The
// composed map stretches level-j centers with |phi(z+r^j)-phi(z)| = r^{j
// alpha} and rotates them by arg = j gamma0 alpha0 log s; the centers
// accumulate on a self-similar Cantor set of box dimension log N / log(1/r),
// approaching 2(1-t) as r -> 0.

struct ConeParameters {
    double t;
    cplx tau0;
    double alpha0;
    double gamma0;
};

// Smallest positive t with 1 + (tau-1)/t in the closed pointwise disk.
// Writing x = 1/t, x solves
//   |tau-1|^2 x^2 - 2(c-1) Re(tau-1) x - (K + 1/K - 2) = 0,
// whose constant term is negative, so the positive root is unique.
inline ConeParameters solve_cone_parameter(double K, double alpha, double gamma) {
    if (!(K > 1.0)) throw std::invalid_argument("solve_cone_parameter: K > 1 required");
    if (!(alpha > 0.0)) throw std::invalid_argument("solve_cone_parameter: alpha > 0 required");
    cplx tau(alpha, alpha * gamma);
    auto loc = region_contains(RegionSpec::pointwise_disk(K), tau);
    if (loc == RegionLocation::Outside)
        throw std::invalid_argument("solve_cone_parameter: tau outside the pointwise disk");
    if (loc == RegionLocation::Boundary) {
        return {1.0, tau, alpha, gamma};
    }
    double c = 0.5 * (K + 1.0 / K);
    double a2 = std::norm(tau - 1.0);
    if (a2 == 0.0) {
        // tau = 1: the spectrum is 2 and the cone degenerates; report t = 0
        // with the rightmost boundary exponent as a conventional direction.
        return {0.0, cplx(K, 0.0), K, 0.0};
    }
    double b = (c - 1.0) * (tau.real() - 1.0);
    double q = K + 1.0 / K - 2.0;
    double x = (b + std::sqrt(b * b + a2 * q)) / a2;
    double t = 1.0 / x;
    cplx tau0 = 1.0 + (tau - 1.0) * x;
    return {t, tau0, tau0.real(), tau0.imag() / tau0.real()};
}

struct CantorNode {
    cplx center;
    std::uint32_t parent;  // index in the previous level
};

class CantorMap {
  public:
    // Direct construction from cone data; build_cantor_map derives the cone
    // from (K, alpha, gamma).
    CantorMap(ConeParameters cone, double r, int depth, std::size_t node_cap = 2'000'000)
        : cone_(cone), r_(r), depth_(depth) {
        if (!(r > 0.0 && r < 0.125)) throw std::invalid_argument("CantorMap: r in (0, 1/8) required");
        if (depth < 0) throw std::invalid_argument("CantorMap: depth >= 0 required");
        if (!(cone.t > 0.0)) throw std::invalid_argument("CantorMap: degenerate cone (t = 0)");
        s_ = std::pow(r_, cone_.t);
        m_axis_ = static_cast<long>(std::floor(s_ / (2.0 * r_)));
        if (m_axis_ < 1) {
            double threshold = std::pow(0.5, 1.0 / (1.0 - cone_.t));
            throw std::invalid_argument("CantorMap: r too large, no child disks fit (need r <= " +
                                        format_double(threshold) + ")");
        }
        n_children_ = m_axis_ * m_axis_;
        smallness_ok_ = r_ < std::pow(2.0, -4.0) * s_;
        sigma0_ = std::exp((cone_.tau0 - 1.0) * std::log(s_));

        offsets_ = child_offsets_units(m_axis_);
        // containment of the deterministic placement: every child disk of
        // radius r^j at offset u*r^j must lie inside the inner disk s r^{j-1}
        double reach = 0.0;
        for (cplx u : offsets_) reach = std::max(reach, std::abs(u) + 1.0);
        if (reach * r_ > s_ * (1.0 + 1e-12))
            throw std::logic_error("CantorMap: placement does not fit the inner disk");

        levels_.push_back({CantorNode{cplx(0.0), 0}});
        std::size_t total = 1;
        for (int j = 1; j <= depth_; ++j) {
            const auto& prev = levels_.back();
            total += prev.size() * static_cast<std::size_t>(n_children_);
            if (total > node_cap)
                throw std::invalid_argument("CantorMap: node count exceeds cap at depth " +
                                            std::to_string(j));
            std::vector<CantorNode> level;
            level.reserve(prev.size() * n_children_);
            double rj = std::pow(r_, j);
            for (std::uint32_t pi = 0; pi < prev.size(); ++pi)
                for (cplx u : offsets_) level.push_back({prev[pi].center + u * rj, pi});
            levels_.push_back(std::move(level));
        }
    }

    const ConeParameters& cone() const { return cone_; }
    double r() const { return r_; }
    double s() const { return s_; }
    int depth() const { return depth_; }
    long children_per_node() const { return n_children_; }
    long grid_per_axis() const { return m_axis_; }
    bool smallness_condition_ok() const { return smallness_ok_; }
    cplx similarity_factor() const { return sigma0_; }
    const std::vector<std::vector<CantorNode>>& levels() const { return levels_; }

    // Centers of all level-`level` disks (N^level points).
    std::vector<cplx> points(int level) const {
        if (level < 0 || level > depth_)
            throw std::invalid_argument("CantorMap::points: level must be in [0, depth]");
        std::vector<cplx> out;
        out.reserve(levels_[level].size());
        for (const auto& n : levels_[level]) out.push_back(n.center);
        return out;
    }

    // Evaluate the composed map.  Walks the annulus tree by lattice
    // arithmetic, so evaluation does not consult the materialized levels and
    // costs O(depth).  Total on C: identity outside the unit disk.
    cplx operator()(cplx z) const {
        cplx center = 0.0;       // current node center (source side)
        cplx image = 0.0;        // image of the current node center
        cplx sim = 1.0;          // composed ancestor similarity factor
        double R = 1.0;          // current node outer radius (= r^level)
        int level = 0;
        for (;;) {
            cplx d = z - center;
            double dist = std::abs(d);
            if (dist >= R) {
                // outside this node's disk: ancestors act as a similarity
                return image + sim * d;
            }
            if (dist >= s_ * R) {
                // annulus: rotation map in image coordinates
                cplx unit = d / dist;
                return image + sim * R * unit * std::exp(cone_.tau0 * std::log(dist / R));
            }
            // inner disk: similarity, then descend into a child if one
            // contains z and depth remains
            sim *= sigma0_;
            if (level == depth_) return image + sim * d;
            double rj = R * r_;
            cplx child = find_child(d, rj);
            if (!child_contains(d, child, rj)) return image + sim * d;
            center += child;
            image += sim * child;
            R = rj;
            ++level;
        }
    }

    // Offsets of child centers in units of the child radius r^j.  Lattice
    // spacing is 2 units; for odd M the symmetric lattice would put a child
    // at the puncture, so the grid shifts by one unit (for M = 1 the single
    // child sits at (1, 0), tangent to the inner-disk boundary).
    static std::vector<cplx> child_offsets_units(long M) {
        std::vector<cplx> out;
        if (M == 1) {
            out.push_back(cplx(1.0, 0.0));
            return out;
        }
        std::vector<double> axis(M);
        for (long i = 0; i < M; ++i)
            axis[i] = (M % 2 == 0) ? static_cast<double>(2 * i - M + 1)
                                   : static_cast<double>(2 * i - M + 2);
        for (long iy = 0; iy < M; ++iy)
            for (long ix = 0; ix < M; ++ix) out.push_back(cplx(axis[ix], axis[iy]));
        return out;
    }

  private:
    // Nearest lattice child offset (absolute, scaled by rj) to displacement d.
    cplx find_child(cplx d, double rj) const {
        long M = m_axis_;
        if (M == 1) return cplx(rj, 0.0);
        auto snap = [&](double u) {
            double idx = (M % 2 == 0) ? (u / rj + M - 1.0) / 2.0 : (u / rj + M - 2.0) / 2.0;
            double i = std::max(0.0, std::min(static_cast<double>(M - 1), std::round(idx)));
            return (M % 2 == 0) ? (2.0 * i - M + 1.0) * rj : (2.0 * i - M + 2.0) * rj;
        };
        return cplx(snap(d.real()), snap(d.imag()));
    }

    static bool child_contains(cplx d, cplx child, double rj) { return std::abs(d - child) < rj; }

    ConeParameters cone_;
    double r_;
    int depth_;
    double s_;
    long m_axis_ = 0;
    long n_children_ = 0;
    bool smallness_ok_ = false;
    cplx sigma0_;
    std::vector<cplx> offsets_;
    std::vector<std::vector<CantorNode>> levels_;
};

inline CantorMap build_cantor_map(double K, double alpha, double gamma, double r, int depth) {
    ConeParameters cone = solve_cone_parameter(K, alpha, gamma);
    if (cone.t == 0.0)
        throw std::invalid_argument("build_cantor_map: tau = 1 has no annulus construction");
    return CantorMap(cone, r, depth);
}

}  // namespace qclab
