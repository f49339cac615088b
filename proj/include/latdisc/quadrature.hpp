#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace latdisc {

// Raised when an iterative quadrature fails to reach its target accuracy.
struct PrecisionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

} // namespace detail

// Composite 16-point Gauss-Legendre with `panels` equal panels on [a, b].
template <typename F>
auto gauss_panels(F&& f, double a, double b, int panels)
    -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    const double h = (b - a) / panels;
    R total{};
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        R acc{};
        for (int i = 0; i < 8; ++i) {
            const double d = 0.5 * h * detail::kGL16Nodes[i];
            acc += detail::kGL16Weights[i] * (f(mid + d) + f(mid - d));
        }
        total += acc * (0.5 * h);
    }
    return total;
}

// Panel-doubling Gauss quadrature: doubles until two refinements agree.
template <typename F>
auto gauss_doubling(F&& f, double a, double b, int panels0, double abs_tol,
                    double rel_tol, int max_doublings = 12)
    -> decltype(f(0.0)) {
    auto prev = gauss_panels(f, a, b, panels0);
    for (int d = 0; d < max_doublings; ++d) {
        panels0 *= 2;
        auto cur = gauss_panels(f, a, b, panels0);
        const double diff = std::abs(cur - prev);
        if (diff <= abs_tol + rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    throw PrecisionFailure("gauss_doubling: no convergence");
}

namespace detail {

template <typename F>
double adapt_simpson_rec(F& f, double a, double b, double fa, double fm,
                         double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson for real integrands.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 40) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adapt_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Trapezoid rule with interval doubling for complex integrands. Converges
// spectrally for smooth functions whose derivatives vanish at the endpoints.
template <typename F>
std::complex<double> trapezoid_doubling(F&& f, double a, double b, int n0,
                                        double abs_tol, double rel_tol,
                                        int max_doublings = 24) {
    const double len = b - a;
    std::complex<double> sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n0; ++i) sum += f(a + len * i / n0);
    std::complex<double> prev = sum * (len / n0);
    int n = n0;
    for (int d = 0; d < max_doublings; ++d) {
        // add the midpoints of the current grid
        for (int i = 0; i < n; ++i) sum += f(a + len * (i + 0.5) / n);
        n *= 2;
        std::complex<double> cur = sum * (len / n);
        if (std::abs(cur - prev) <= abs_tol + rel_tol * std::abs(cur))
            return cur;
        prev = cur;
    }
    throw PrecisionFailure("trapezoid_doubling: no convergence");
}

} // namespace latdisc
