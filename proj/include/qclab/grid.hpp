#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclab/util.hpp"

namespace qclab {

// Uniform rectangular sampling of a complex field.  Samples sit at
// origin + spacing*(ix + i iy); storage is row-major by scanline, index
// iy*nx + ix.  Grids carrying Beltrami data keep nx, ny powers of two
// (FFT-friendly) and the support inside half the box extent (periodization
// guard, margin factor >= 2).

struct ComplexGrid {
    int nx = 0, ny = 0;
    cplx origin{};
    double spacing = 0.0;
    std::vector<cplx> data;

    ComplexGrid() = default;
    ComplexGrid(int nx_, int ny_, cplx origin_, double spacing_)
        : nx(nx_), ny(ny_), origin(origin_), spacing(spacing_),
          data(static_cast<std::size_t>(nx_) * ny_) {
        if (nx <= 0 || ny <= 0 || !(spacing > 0.0))
            throw std::invalid_argument("ComplexGrid: positive dimensions and spacing required");
    }

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * nx + ix;
    }
    cplx& at(int ix, int iy) { return data[index(ix, iy)]; }
    cplx at(int ix, int iy) const { return data[index(ix, iy)]; }
    cplx z_at(int ix, int iy) const { return origin + spacing * cplx(ix, iy); }
    cplx box_center() const { return origin + 0.5 * spacing * cplx(nx, ny); }
    std::size_t size() const { return data.size(); }

    bool power_of_two_dims() const {
        auto p2 = [](int n) { return n > 0 && (n & (n - 1)) == 0; };
        return p2(nx) && p2(ny);
    }

    // nearest node index to z (clamped)
    void nearest_node(cplx z, int& ix, int& iy) const {
        ix = static_cast<int>(std::lround((z.real() - origin.real()) / spacing));
        iy = static_cast<int>(std::lround((z.imag() - origin.imag()) / spacing));
        ix = std::max(0, std::min(nx - 1, ix));
        iy = std::max(0, std::min(ny - 1, iy));
    }

    bool contains(cplx z) const {
        double x = (z.real() - origin.real()) / spacing;
        double y = (z.imag() - origin.imag()) / spacing;
        return x >= 0.0 && y >= 0.0 && x <= nx - 1 && y <= ny - 1;
    }

    // bilinear interpolation; requires contains(z)
    cplx interpolate(cplx z) const {
        double x = (z.real() - origin.real()) / spacing;
        double y = (z.imag() - origin.imag()) / spacing;
        int ix = std::min(static_cast<int>(std::floor(x)), nx - 2);
        int iy = std::min(static_cast<int>(std::floor(y)), ny - 2);
        ix = std::max(ix, 0);
        iy = std::max(iy, 0);
        double fx = x - ix, fy = y - iy;
        return (1 - fx) * (1 - fy) * at(ix, iy) + fx * (1 - fy) * at(ix + 1, iy) +
               (1 - fx) * fy * at(ix, iy + 1) + fx * fy * at(ix + 1, iy + 1);
    }

    double l2_norm() const {
        double s = 0.0;
        for (cplx v : data) s += std::norm(v);
        return spacing * std::sqrt(s);
    }
};

// square grid of n x n nodes covering [-halfwidth, halfwidth)^2, node n/2 at 0
inline ComplexGrid make_square_grid(int n, double halfwidth = 2.0) {
    double h = 2.0 * halfwidth / n;
    return ComplexGrid(n, n, cplx(-halfwidth, -halfwidth), h);
}

// --- QCGRID1 file format ------------------------------------------------------
//
// One ASCII header line `QCGRID1 {json}` with keys nx, ny, origin_re,
// origin_im, spacing, followed by nx*ny little-endian (re, im) double pairs
// in storage order.  Round-trips bit-exactly.

static_assert(std::endian::native == std::endian::little,
              "QCGRID1 I/O assumes a little-endian host");

inline void write_qcgrid(const ComplexGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_qcgrid: cannot open " + path);
    out << "QCGRID1 {\"nx\":" << g.nx << ",\"ny\":" << g.ny
        << ",\"origin_re\":" << format_double(g.origin.real())
        << ",\"origin_im\":" << format_double(g.origin.imag())
        << ",\"spacing\":" << format_double(g.spacing) << "}\n";
    out.write(reinterpret_cast<const char*>(g.data.data()),
              static_cast<std::streamsize>(g.data.size() * sizeof(cplx)));
    if (!out) throw std::runtime_error("write_qcgrid: write failed for " + path);
}

inline ComplexGrid read_qcgrid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_qcgrid: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("QCGRID1 ", 0) != 0)
        throw std::runtime_error("read_qcgrid: bad magic in " + path);
    auto grab = [&](const std::string& key) -> double {
        auto pos = header.find("\"" + key + "\":");
        if (pos == std::string::npos)
            throw std::runtime_error("read_qcgrid: missing key " + key);
        pos += key.size() + 3;
        return std::strtod(header.c_str() + pos, nullptr);
    };
    int nx = static_cast<int>(grab("nx"));
    int ny = static_cast<int>(grab("ny"));
    ComplexGrid g(nx, ny, cplx(grab("origin_re"), grab("origin_im")), grab("spacing"));
    in.read(reinterpret_cast<char*>(g.data.data()),
            static_cast<std::streamsize>(g.data.size() * sizeof(cplx)));
    if (in.gcount() != static_cast<std::streamsize>(g.data.size() * sizeof(cplx)))
        throw std::runtime_error("read_qcgrid: truncated payload in " + path);
    return g;
}

}  // namespace qclab
