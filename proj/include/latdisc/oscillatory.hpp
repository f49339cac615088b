#pragma once

// Oscillatory-integral utilities: a reference integrator, the 1-D stationary
// phase expansion with its explicit certified error constant, the
// nonstationary-phase decay fit, and quantitative inverse-function radii.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "latdisc/quadrature.hpp"

namespace latdisc::oscillatory {

using Complex = std::complex<double>;

// A smooth function with caller-supplied derivatives u^{(j)} up to
// max_order, supported (to working precision) in [lo, hi].
struct SmoothFunction1D {
    std::function<double(double, int)> deriv; // (x, j) -> u^{(j)}(x)
    double lo = -1.0;
    double hi = 1.0;
    int max_order = 0;

    double operator()(double x) const { return deriv(x, 0); }
};

// p(x) e^{-c x^2} with derivatives generated by the polynomial recurrence
// d/dx (p e^{-cx^2}) = (p' - 2cx p) e^{-cx^2}.
inline SmoothFunction1D gaussian_poly(std::vector<double> coeffs, double c,
                                      int max_order) {
    if (c <= 0.0) throw std::invalid_argument("gaussian_poly: c must be > 0");
    std::vector<std::vector<double>> polys{std::move(coeffs)};
    for (int j = 1; j <= max_order; ++j) {
        const auto& p = polys.back();
        std::vector<double> d(p.size() + 1, 0.0);
        for (size_t i = 1; i < p.size(); ++i) d[i - 1] += i * p[i];
        for (size_t i = 0; i < p.size(); ++i) d[i + 1] -= 2.0 * c * p[i];
        polys.push_back(std::move(d));
    }
    // support cutoff where the Gaussian tail is negligible
    const double R = std::sqrt(40.0 / c);
    SmoothFunction1D u;
    u.lo = -R;
    u.hi = R;
    u.max_order = max_order;
    u.deriv = [polys = std::move(polys), c](double x, int j) {
        const auto& p = polys.at(j);
        double v = 0.0;
        for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
        return v * std::exp(-c * x * x);
    };
    return u;
}

// Reference oscillatory integrator: integral of u(x) e^{i lambda f(x)} dx by
// composite Gauss panels sized to the oscillation, then panel doubling.
inline Complex osc_quad(const SmoothFunction1D& u,
                        const std::function<double(double)>& phase,
                        double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("osc_quad: lambda < 0");
    double max_freq = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double x = u.lo + (u.hi - u.lo) * i / 64.0;
        const double h = 1e-5 * (u.hi - u.lo);
        max_freq = std::max(
            max_freq, std::abs(phase(x + h) - phase(x - h)) / (2.0 * h));
    }
    const double periods = lambda * max_freq * (u.hi - u.lo) / (2.0 * M_PI);
    // 16-point panels at roughly 2 periods each are already past the spectral
    // knee; one doubling then certifies the result
    const int panels0 = std::max(8, int(std::ceil(periods / 2.0)));
    auto f = [&](double x) {
        return u(x) * std::exp(Complex(0.0, lambda * phase(x)));
    };
    return gauss_doubling(f, u.lo, u.hi, panels0, 1e-12, 1e-9, 6);
}

struct PhaseReport {
    Complex integral_value{};
    Complex approximation{};
    double certified_bound = 0.0;
    double observed_error = 0.0;
    double lambda = 0.0;
    int order = 0;
};

inline double l2_norm(const SmoothFunction1D& u, int j) {
    auto sq = [&](double x) {
        const double v = u.deriv(x, j);
        return v * v;
    };
    return std::sqrt(gauss_doubling(sq, u.lo, u.hi, 32, 1e-14, 1e-10, 10));
}

// Expansion of integral u(x) e^{-i lambda x^2/2} dx about the stationary
// point, with the explicit (2^{1-k} sqrt(pi)/k!) error constant.
inline PhaseReport stationary_phase_1d(const SmoothFunction1D& u,
                                       double lambda, int k) {
    if (k < 1) throw std::invalid_argument("stationary_phase_1d: k >= 1");
    if (lambda <= 0.0)
        throw std::invalid_argument("stationary_phase_1d: lambda > 0");
    if (u.max_order < 2 * k + 1)
        throw std::invalid_argument(
            "stationary_phase_1d: derivative order insufficient");

    PhaseReport rep;
    rep.lambda = lambda;
    rep.order = k;

    const Complex rot = std::sqrt(2.0 * M_PI) *
                        std::exp(Complex(0.0, -M_PI / 4.0)) /
                        std::sqrt(lambda);
    Complex sum = 0.0;
    double fact = 1.0;
    for (int j = 0; j < k; ++j) {
        if (j > 0) fact *= j;
        sum += std::pow(Complex(0.0, 2.0 * lambda), -j) * u.deriv(0.0, 2 * j) /
               fact;
    }
    rep.approximation = rot * sum;

    double kfact = 1.0;
    for (int j = 2; j <= k; ++j) kfact *= j;
    rep.certified_bound = std::pow(2.0, 1.0 - k) * std::sqrt(M_PI) / kfact *
                          std::pow(lambda, -k - 0.5) *
                          (l2_norm(u, 2 * k) + l2_norm(u, 2 * k + 1));

    rep.integral_value =
        osc_quad(u, [](double x) { return -0.5 * x * x; }, lambda);
    rep.observed_error = std::abs(rep.integral_value - rep.approximation);
    return rep;
}

// Smallest constant making |K| lambda^{-k} sum_j sup|u^(j)| |f'|^{j-2k} an
// upper bound for |integral u e^{i lambda f}| over the given lambda grid.
inline double nonstationary_bound_check(
    const SmoothFunction1D& u, const std::function<double(double)>& phase,
    const std::vector<double>& lambda_grid, int k) {
    if (u.max_order < k)
        throw std::invalid_argument("nonstationary_bound_check: need k derivatives");
    // gradient floor and sup norms over the support
    double min_grad = 1e300;
    std::vector<double> sup(k + 1, 0.0);
    const int n = 2048;
    for (int i = 0; i <= n; ++i) {
        const double x = u.lo + (u.hi - u.lo) * i / n;
        const double h = 1e-6;
        min_grad = std::min(min_grad,
                            std::abs(phase(x + h) - phase(x - h)) / (2.0 * h));
        for (int j = 0; j <= k; ++j)
            sup[j] = std::max(sup[j], std::abs(u.deriv(x, j)));
    }
    if (min_grad <= 0.0)
        throw std::invalid_argument("nonstationary_bound_check: gradient floor violated");
    double C = 0.0;
    for (double lam : lambda_grid) {
        const double lhs = std::abs(osc_quad(u, phase, lam));
        double rhs = 0.0;
        for (int j = 0; j <= k; ++j)
            rhs += sup[j] * std::pow(min_grad, j - 2 * k);
        rhs *= (u.hi - u.lo) * std::pow(lam, -k);
        if (rhs > 0.0) C = std::max(C, lhs / rhs);
    }
    return C;
}

// Quantitative inverse-function-theorem radii: f bijective from B(a, r1)
// onto a set containing B(f(a), r2).
struct IftRadii {
    double r1;
    double r2;
};

inline IftRadii ift_radii(double c, double C, int d, double r0) {
    if (c <= 0.0 || C <= 0.0 || r0 <= 0.0 || d < 1)
        throw std::invalid_argument("ift_radii: positive inputs required");
    double fact = 1.0;
    for (int i = 2; i <= d - 1; ++i) fact *= i;
    const double r1 =
        std::min(c / (2.0 * std::pow(double(d), 3.5) * fact * std::pow(C, d)),
                 r0);
    const double r2 =
        c * r1 / (4.0 * std::pow(double(d), 1.5) * fact * std::pow(C, d - 1));
    return {r1, r2};
}

} // namespace latdisc::oscillatory
