#pragma once

// Fourier transform of the indicator of a rotated superellipse: exact
// Gauss-Green boundary quadrature, the curvature-explicit two-term
// asymptotics with a fitted error budget, and the flat-normal blow-up
// profile.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "latdisc/geometry.hpp"
#include "latdisc/quadrature.hpp"

namespace latdisc::fourier {

using geometry::RotatedDomain;
using geometry::SuperellipseDomain;
using Complex = std::complex<double>;

// e(f) = exp(-2 pi i f), fixed module-wide.
inline Complex e_of(double f) {
    return std::exp(Complex(0.0, -2.0 * M_PI * f));
}

// Independent J1 oracle from the integral representation
// J1(x) = (1/pi) int_0^pi cos(tau - x sin tau) dtau, by trapezoid
// (spectrally accurate for periodic analytic integrands).
inline double bessel_j1(double x) {
    const int n = 512 + 4 * int(std::ceil(std::abs(x)));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = (i + 0.5) * M_PI / n;
        acc += std::cos(tau - x * std::sin(tau));
    }
    return acc * (1.0 / n);
}

namespace detail {

// One graph piece of the base boundary: position, unit exterior normal and
// arc-length element as functions of the graph abscissa.
struct GraphPiece {
    bool x_graph;   // true: y = sgn * f(x); false: x = sgn * f(y)
    double sgn;
    double lo, hi;  // abscissa range
};

// Abscissa of the |slope| = 1 point in the first quadrant, on the x side.
inline double corner_abscissa(const SuperellipseDomain& dom) {
    const int w = dom.omega();
    const double s = std::pow(dom.a() / dom.b(), 1.0 / (w - 1));
    const double n_c = std::pow(1.0 + std::pow(s, double(w)), -1.0 / w);
    return dom.a() * s * n_c;
}

// Integral of n_l(x) e(lambda <x, xi>) ds over the full base boundary.
// Split into four graph pieces at the |slope| = 1 points so each piece has
// bounded metric and no derivative blow-up.
inline Complex boundary_integral(const SuperellipseDomain& dom, Vec2 xi,
                                 double lambda, int l) {
    const int w = dom.omega();
    const double a = dom.a(), b = dom.b();
    const double uc = corner_abscissa(dom);
    const double vc = b * std::pow(1.0 - geometry::ipow(uc / a, w), 1.0 / w);

    auto piece = [&](const GraphPiece& p) {
        auto f = [&](double s) {
            double x, y, df;
            if (p.x_graph) {
                x = s;
                const double core =
                    std::pow(1.0 - geometry::ipow(s / a, w), 1.0 / w);
                y = p.sgn * b * core;
                // dy/dx from implicit differentiation
                df = -p.sgn * (b / a) * geometry::spow(s / a, w - 1) /
                     std::pow(core, double(w - 1));
            } else {
                y = s;
                const double core =
                    std::pow(1.0 - geometry::ipow(s / b, w), 1.0 / w);
                x = p.sgn * a * core;
                df = -p.sgn * (a / b) * geometry::spow(s / b, w - 1) /
                     std::pow(core, double(w - 1));
            }
            const double ds = std::sqrt(1.0 + df * df);
            const double gx = geometry::spow(x / a, w - 1) / a;
            const double gy = geometry::spow(y / b, w - 1) / b;
            const double gn = std::hypot(gx, gy);
            const double nl = (l == 1 ? gx : gy) / gn;
            return nl * e_of(lambda * (x * xi.x + y * xi.y)) * ds;
        };
        const double len = p.hi - p.lo;
        const double periods = lambda * M_SQRT2 * len / (2.0 * M_PI);
        const int panels0 = std::max(4, int(std::ceil(periods / 1.5)));
        return gauss_doubling(f, p.lo, p.hi, panels0, 1e-13, 1e-10, 8);
    };

    Complex total = 0.0;
    for (const GraphPiece& p :
         {GraphPiece{true, +1.0, -uc, uc}, GraphPiece{true, -1.0, -uc, uc},
          GraphPiece{false, +1.0, -vc, vc}, GraphPiece{false, -1.0, -vc, vc}})
        total += piece(p);
    return total;
}

} // namespace detail

// Numeric chi-hat_{B_theta}(lambda xi) via the Gauss-Green identity
// 2 pi i lambda xi_l chi-hat = -(n_l ds)-hat, pulled back to the base frame.
inline Complex ft_numeric(const RotatedDomain& dom, Vec2 xi, double lambda,
                          int l_override = 0) {
    if (lambda <= 0.0)
        throw std::invalid_argument("ft_numeric: lambda must be > 0");
    const Vec2 u = dom.rotation().apply_transpose(xi).normalized();
    const int l = l_override != 0 ? l_override
                                  : (std::abs(u.x) >= std::abs(u.y) ? 1 : 2);
    const double ul = l == 1 ? u.x : u.y;
    if (ul == 0.0)
        throw std::invalid_argument("ft_numeric: xi_l vanishes for chosen l");
    const Complex nlds = detail::boundary_integral(dom.base(), u, lambda, l);
    return -nlds / (Complex(0.0, 2.0 * M_PI) * lambda * ul);
}

// Two-term leading asymptotics of (n_l ds)-hat(lambda xi), base frame pullback.
inline Complex nlds_asymptotic(const RotatedDomain& dom, Vec2 xi,
                               double lambda, int l) {
    if (l != 1 && l != 2) throw std::invalid_argument("nlds_asymptotic: l in {1,2}");
    const Vec2 un = xi.normalized();
    const double kp = dom.curvature(un);
    const double km = dom.curvature(-un);
    if (kp <= 0.0 || km <= 0.0)
        throw std::domain_error("nlds_asymptotic: flat normal direction");
    const double xl = l == 1 ? un.x : un.y;
    const Complex c1 = std::exp(Complex(0.0, M_PI / 4.0));
    const Complex c2 = std::exp(Complex(0.0, -M_PI / 4.0));
    return (c1 * xl / std::sqrt(kp) * e_of(lambda * dom.support(un)) -
            c2 * xl / std::sqrt(km) * e_of(-lambda * dom.support(-un))) /
           std::sqrt(lambda);
}

// Two-term leading asymptotics of chi-hat itself.
inline Complex ft_asymptotic_value(const RotatedDomain& dom, Vec2 xi,
                                   double lambda) {
    const Vec2 un = xi.normalized();
    const double kp = dom.curvature(un);
    const double km = dom.curvature(-un);
    if (kp <= 0.0 || km <= 0.0)
        throw std::domain_error("ft_asymptotic: flat normal direction");
    const Complex a1 = std::exp(Complex(0.0, 3.0 * M_PI / 4.0)) / (2.0 * M_PI);
    const Complex a2 = std::exp(Complex(0.0, -3.0 * M_PI / 4.0)) / (2.0 * M_PI);
    return (a1 / std::sqrt(kp) * e_of(lambda * dom.support(un)) +
            a2 / std::sqrt(km) * e_of(-lambda * dom.support(-un))) *
           std::pow(lambda, -1.5);
}

// Shape of the asymptotic error term; the constant in front is fitted once
// per domain (calibrate below), since the analysis leaves it implicit.
inline double error_shape(double lambda, double delta) {
    return std::pow(lambda, -2.5) * std::pow(delta, -3.5) +
           std::pow(lambda, -2.0) * std::pow(delta, -4.0);
}

struct FourierEval {
    Vec2 xi;
    double lambda = 0.0;
    Complex numeric{};
    Complex asymptotic{};
    double error_budget = 0.0;
    double delta_xi = 0.0;
};

// One fitted constant per domain: sup over a reference grid (delta >= 0.5)
// of |numeric - asymptotic| / error_shape, doubled for headroom.
inline double calibrate_error_constant(const RotatedDomain& dom) {
    double cfit = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double ang = (i + 0.37) * M_PI / 8.0;
        const Vec2 xi{std::cos(ang), std::sin(ang)};
        const double delta = dom.delta_xi(xi);
        if (delta < 0.5) continue;
        for (double lam : {50.0, 90.0, 160.0, 290.0, 520.0}) {
            const double err =
                std::abs(ft_numeric(dom, xi, lam) -
                         ft_asymptotic_value(dom, xi, lam));
            cfit = std::max(cfit, err / error_shape(lam, delta));
        }
    }
    return 2.0 * cfit;
}

inline FourierEval ft_asymptotic(const RotatedDomain& dom, Vec2 xi,
                                 double lambda, double c_fit) {
    FourierEval ev;
    ev.xi = xi.normalized();
    ev.lambda = lambda;
    ev.delta_xi = dom.delta_xi(ev.xi);
    if (ev.delta_xi <= 0.0)
        throw std::domain_error("ft_asymptotic: flat normal, use ft_numeric");
    ev.asymptotic = ft_asymptotic_value(dom, ev.xi, lambda);
    ev.numeric = ft_numeric(dom, ev.xi, lambda);
    ev.error_budget = c_fit * error_shape(lambda, ev.delta_xi);
    return ev;
}

// Phi(xi) = sup_{r>0} r^{3/2} |chi-hat(r xi)|, approximated over a log grid.
inline double phi_profile(const RotatedDomain& dom, Vec2 xi, double r_max,
                          int n_grid) {
    if (n_grid < 200)
        throw std::invalid_argument("phi_profile: n_grid >= 200 required");
    if (r_max <= 1.0)
        throw std::invalid_argument("phi_profile: r_max > 1 required");
    double sup = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double r = std::pow(r_max, double(i) / (n_grid - 1));
        sup = std::max(sup,
                       std::pow(r, 1.5) * std::abs(ft_numeric(dom, xi, r)));
    }
    return sup;
}

namespace detail {

// Phi with the large-r part of the sup taken from the two-term asymptotics
// (the numeric quadrature is priced out there; the sup of the asymptotic
// envelope is what the large-r tail converges to).
inline double phi_hybrid(const RotatedDomain& dom, Vec2 xi) {
    double sup = 0.0;
    for (int i = 0; i < 120; ++i) {
        const double r = std::pow(40.0, i / 119.0);
        sup = std::max(sup,
                       std::pow(r, 1.5) * std::abs(ft_numeric(dom, xi, r)));
    }
    for (int i = 0; i < 400; ++i) {
        const double r = 1e6 * std::pow(10.0, i / 399.0);
        sup = std::max(sup, std::pow(r, 1.5) *
                                std::abs(ft_asymptotic_value(dom, xi, r)));
    }
    return sup;
}

} // namespace detail

// Log-log slope of Phi against the angle off a flat normal, over
// phi in [1e-5, 1e-3]; the decay law predicts -(w-2)/(2(w-1)). Closer to
// the flat normal the large-r envelope dominates the sup; at wider angles
// transition-region bumps at moderate r flatten the apparent slope.
inline double randol_slope(const RotatedDomain& dom) {
    if (dom.base().omega() < 4)
        throw std::domain_error("randol_slope: domain has no flat normal");
    const int n = 15;
    std::vector<double> lx, ly;
    for (int i = 0; i < n; ++i) {
        const double phi = 1e-5 * std::pow(100.0, double(i) / (n - 1));
        const Vec2 base_dir{std::cos(phi), std::sin(phi)};
        const Vec2 xi = dom.rotation().apply(base_dir);
        lx.push_back(std::log(phi));
        ly.push_back(std::log(detail::phi_hybrid(dom, xi)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace latdisc::fourier
