#pragma once

#include <charconv>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qclab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

// Shortest double string that round-trips exactly (17 significant digits).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Complex values are written as "re+imi" (e.g. "1.5+0.75i", "2", "-0.3i").
// Parsing is locale-free via std::from_chars.
inline std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string s;
    if (z.real() != 0.0) s += format_double(z.real());
    std::string im = format_double(z.imag());
    if (!im.empty() && im[0] != '-' && !s.empty()) s += "+";
    s += im;
    s += "i";
    return s;
}

namespace detail {
// Parses a double starting at s[pos]; advances pos. Accepts leading sign.
inline std::optional<double> parse_number(const std::string& s, size_t& pos) {
    if (pos >= s.size()) return std::nullopt;
    const char* first = s.data() + pos;
    const char* last = s.data() + s.size();
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) {
        // from_chars rejects a leading '+'
        if (*first == '+') {
            res = std::from_chars(first + 1, last, v);
            if (res.ec != std::errc()) return std::nullopt;
        } else {
            return std::nullopt;
        }
    }
    pos = static_cast<size_t>(res.ptr - s.data());
    return v;
}
}  // namespace detail

inline std::optional<cplx> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;
    if (s == "i") return cplx(0, 1);
    if (s == "-i" || s == "+i") return cplx(0, s[0] == '-' ? -1 : 1);

    size_t pos = 0;
    auto first = detail::parse_number(s, pos);
    if (!first) return std::nullopt;
    if (pos == s.size()) return cplx(*first, 0.0);
    if (pos == s.size() - 1 && s[pos] == 'i') return cplx(0.0, *first);

    // "re+imi" form; the imaginary part may degenerate to "+i"/"-i".
    if (pos + 1 == s.size() - 1 && (s[pos] == '+' || s[pos] == '-') && s.back() == 'i')
        return cplx(*first, s[pos] == '-' ? -1.0 : 1.0);
    auto second = detail::parse_number(s, pos);
    if (!second || pos != s.size() - 1 || s[pos] != 'i') return std::nullopt;
    return cplx(*first, *second);
}

// QCLAB_THREADS caps internal parallelism; defaults to hardware concurrency.
inline unsigned thread_cap() {
    static const unsigned cap = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("QCLAB_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && v < 1024) return static_cast<unsigned>(v);
        }
        return hw;
    }();
    return cap;
}

// Deterministic chunked parallel map: fn(begin, end, chunk_index) over [0, n).
// Chunk boundaries depend only on n and the thread cap, so per-chunk results
// can be combined in fixed order regardless of scheduling.
template <typename Fn>
inline void parallel_chunks(std::size_t n, Fn&& fn) {
    unsigned nthreads = thread_cap();
    if (n == 0) return;
    if (nthreads <= 1 || n < 1024) {
        fn(std::size_t{0}, n, 0u);
        return;
    }
    std::size_t chunk = (n + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    unsigned idx = 0;
    for (std::size_t b = 0; b < n; b += chunk, ++idx)
        pool.emplace_back([&fn, b, e = std::min(b + chunk, n), idx] { fn(b, e, idx); });
    for (auto& t : pool) t.join();
}

}  // namespace qclab
