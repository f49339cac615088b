#pragma once

// Mollified lattice counts by truncated Poisson summation: the bump
// mollifier with a tabulated radial Fourier transform, the two-sided
// sandwich bracketing of the exact count, and the D1/D2 split diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "latdisc/counting.hpp"
#include "latdisc/fourier.hpp"
#include "latdisc/geometry.hpp"

namespace latdisc::poisson {

using geometry::Region;
using geometry::RotatedDomain;
using Complex = std::complex<double>;

// Normalized bump exp(-1/(1-|y|^2)) on the unit ball. The transform is
// radial; rho_hat(s) = int_{-1}^{1} q(u) cos(2 pi s u) du with q the
// one-dimensional projection of rho, tabulated once and interpolated.
class Mollifier {
  public:
    Mollifier() {
        // projection q(u) at composite Gauss nodes on [0, 1]
        const int panels = 96;
        const double h = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * h;
            for (int i = 0; i < 8; ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const double u =
                        mid + sgn * 0.5 * h * detail_node(i);
                    nodes_.push_back(u);
                    weights_.push_back(0.5 * h * detail_weight(i));
                }
            }
        }
        double mass = 0.0;
        qvals_.resize(nodes_.size());
        for (size_t i = 0; i < nodes_.size(); ++i) {
            qvals_[i] = projection_raw(nodes_[i]);
            mass += 2.0 * weights_[i] * qvals_[i]; // even in u
        }
        norm_ = 1.0 / mass;
        for (double& q : qvals_) q *= norm_;

        table_.resize(kTableSize);
        for (int j = 0; j < kTableSize; ++j) {
            const double s = j * kStep;
            double acc = 0.0;
            for (size_t i = 0; i < nodes_.size(); ++i)
                acc += weights_[i] * qvals_[i] *
                       std::cos(2.0 * M_PI * s * nodes_[i]);
            table_[j] = 2.0 * acc;
        }
        env_.resize(kTableSize);
        double run = 0.0;
        for (int j = kTableSize - 1; j >= 0; --j) {
            run = std::max(run, std::abs(table_[j]));
            env_[j] = run;
        }
    }

    double rho(Vec2 y) const {
        const double r2 = y.norm2();
        if (r2 >= 1.0) return 0.0;
        return norm_ * std::exp(-1.0 / (1.0 - r2));
    }

    // Radial transform by Catmull-Rom interpolation of the table.
    double rho_hat(double s) const {
        s = std::abs(s);
        if (s >= (kTableSize - 2) * kStep) return 0.0;
        const int i = int(s / kStep);
        const double u = s / kStep - i;
        const double ym1 = i >= 1 ? table_[i - 1] : table_[1]; // even in s
        const double y0 = table_[i], y1 = table_[i + 1];
        const double y2 = i + 2 < kTableSize ? table_[i + 2] : 0.0;
        const double a = -0.5 * ym1 + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
        const double b = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
        const double c = 0.5 * (y1 - ym1);
        return ((a * u + b) * u + c) * u + y0;
    }

    // Decreasing majorant of |rho_hat| from the table onward.
    double envelope(double s) const {
        s = std::abs(s);
        const int i = int(s / kStep);
        if (i >= kTableSize) return env_.back();
        return env_[i];
    }

    double tail_threshold() const { return env_.back(); }
    double radius() const { return (kTableSize - 1) * kStep; }

  private:
    static constexpr int kTableSize = 8192;
    static constexpr double kStep = 48.0 / (kTableSize - 1);

    static double detail_node(int i) { return latdisc::detail::kGL16Nodes[i]; }
    static double detail_weight(int i) {
        return latdisc::detail::kGL16Weights[i];
    }

    // q(u) = int rho_raw(u, v) dv, rho_raw the unnormalized bump.
    double projection_raw(double u) const {
        const double vmax = std::sqrt(1.0 - u * u);
        auto f = [&](double v) {
            const double r2 = u * u + v * v;
            if (r2 >= 1.0) return 0.0;
            return std::exp(-1.0 / (1.0 - r2));
        };
        return gauss_doubling(f, -vmax, vmax, 8, 1e-15, 1e-13, 10);
    }

    std::vector<double> nodes_, weights_, qvals_;
    std::vector<double> table_, env_;
    double norm_ = 1.0;
};

// Shared instance: the table build is deterministic and domain-independent.
inline const Mollifier& standard_mollifier() {
    static const Mollifier m;
    return m;
}

struct PoissonCount {
    double t = 0.0;
    double theta = 0.0;
    double epsilon = 0.0;
    double value = 0.0;
    int k_max = 0;
    double tail_bound = 0.0;
    Complex sum_D1{};
    Complex sum_D2{};
    double delta = 0.5;
};

namespace detail {

// chi-hat source switch: the curvature-explicit asymptotics once lambda is
// large and the direction is far enough from a flat normal that the fitted
// error is negligible at term level; exact quadrature otherwise.
inline Complex chi_hat(const RotatedDomain& dom, Vec2 xi,
                       double lambda) {
    const double d = dom.delta_xi(xi);
    if (lambda >= 50.0 &&
        (d >= 0.5 || lambda * std::pow(d, 3.5) >= 10.0))
        return fourier::ft_asymptotic_value(dom, xi, lambda);
    return fourier::ft_numeric(dom, xi, lambda);
}

// Truncation radius: smallest K with the certified tail below the target.
inline int choose_k_max(const Mollifier& mol, double t, double eps,
                        int omega, double& tail_out) {
    const double target = 1e-6 * std::sqrt(t);
    const int cap = 20000;
    std::vector<double> ring(cap + 1, 0.0);
    for (int m = 1; m <= cap; ++m) {
        const double env = mol.envelope(eps * m);
        if (env == 0.0) break;
        const double lam = t * m;
        // strictly convex directions decay like lambda^{-3/2}; the flat
        // normals (O(1) lattice directions per ring) only like
        // lambda^{-1-1/omega}; both pieces enter the certified tail
        ring[m] = env * t * t *
                  ((2.0 * M_PI * m + 8.0) * std::pow(lam, -1.5) +
                   8.0 * 4.0 * std::pow(lam, -1.0 - 1.0 / omega));
    }
    double tail = 0.0;
    int k = cap;
    for (int m = cap; m >= 1; --m) {
        if (tail + ring[m] > target) break;
        tail += ring[m];
        k = m - 1;
    }
    if (k >= cap)
        throw std::invalid_argument(
            "mollified_count: epsilon too small for the truncation budget");
    tail_out = tail;
    return k;
}

} // namespace detail

// N_{eps,theta}(t) = area t^2 + t^2 sum_{0<|k|<=k_max} chi-hat(tk) rho-hat(eps k),
// with a certified bound on everything dropped or skipped.
inline PoissonCount mollified_count(const RotatedDomain& dom, double t,
                                    double eps, double delta = 0.5,
                                    const Mollifier& mol = standard_mollifier(),
                                    int k_max_override = 0) {
    if (t < 2.0) throw std::invalid_argument("mollified_count: t >= 2");
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("mollified_count: eps in (0, 1)");
    PoissonCount pc;
    pc.t = t;
    pc.theta = dom.theta();
    pc.epsilon = eps;
    pc.delta = delta;
    pc.k_max = detail::choose_k_max(mol, t, eps, dom.base().omega(),
                                    pc.tail_bound);
    if (k_max_override > 0) pc.k_max = k_max_override;

    const int omega = dom.base().omega();
    Complex d1 = 0.0, d2 = 0.0;
    // half plane; the -k term is the conjugate, so the pair sum is real
    for (int k2 = 0; k2 <= pc.k_max; ++k2) {
        for (int k1 = (k2 == 0 ? 1 : -pc.k_max); k1 <= pc.k_max; ++k1) {
            const double r = std::hypot(double(k1), double(k2));
            if (r > pc.k_max || r == 0.0) continue;
            const double rh = mol.rho_hat(eps * r);
            const double lam = t * r;
            // cheap certified bound; skip negligible terms into the tail
            const double bound = t * t * std::abs(rh) * 4.0 *
                                 std::pow(lam, -1.0 - 1.0 / omega);
            if (bound < 1e-9) {
                pc.tail_bound += 2.0 * bound;
                continue;
            }
            const Vec2 xi{k1 / r, k2 / r};
            const Complex term =
                t * t * detail::chi_hat(dom, xi, lam) * rh;
            const Complex pair = term + std::conj(term);
            if (dom.region_classify({double(k1), double(k2)}, delta) ==
                Region::D1)
                d1 += pair;
            else
                d2 += pair;
        }
    }
    pc.sum_D1 = d1;
    pc.sum_D2 = d2;
    pc.value = counting::area(dom.base()) * t * t + (d1 + d2).real();
    return pc;
}

// The same truncated sum partitioned by the D1/D2 classification.
inline std::pair<Complex, Complex> split_sums(const RotatedDomain& dom,
                                              double t, double eps,
                                              double delta) {
    const PoissonCount pc = mollified_count(dom, t, eps, delta);
    return {pc.sum_D1, pc.sum_D2};
}

struct SandwichResult {
    bool ok = false;
    double lower = 0.0;
    double upper = 0.0;
    double exact = 0.0;
    double c1 = 0.0;
    PoissonCount lo_count, hi_count;
};

// Exact count bracketed by mollified counts at t -+ C1 eps, C1 = 1.01/inradius
// (so that B(0, 1/C1) is inside the body).
inline SandwichResult sandwich_check(const RotatedDomain& dom, double t,
                                     double eps) {
    SandwichResult sr;
    sr.c1 = 1.01 / dom.base().inradius();
    sr.lo_count = mollified_count(dom, t - sr.c1 * eps, eps);
    sr.hi_count = mollified_count(dom, t + sr.c1 * eps, eps);
    sr.exact = double(counting::count_certified(dom, t).count);
    sr.lower = sr.lo_count.value - sr.lo_count.tail_bound;
    sr.upper = sr.hi_count.value + sr.hi_count.tail_bound;
    sr.ok = sr.lower <= sr.exact && sr.exact <= sr.upper;
    return sr;
}

struct Schedule {
    double epsilon = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double zeta = 1.0 / 3831.0;
    double sigma = 0.0;
};

// Dyadic smoothing schedule: eps = 2^{-j alpha(w)}, delta = 2^{-j beta(w)}.
inline Schedule schedule(int j, int omega) {
    if (j < 1) throw std::invalid_argument("schedule: j >= 1");
    if (omega < 2 || omega % 2 != 0)
        throw std::invalid_argument("schedule: omega even >= 2");
    Schedule s;
    if (omega == 2) {
        // strictly convex: no flat normals, D2 empty
        s.alpha = 1.0 / 3.0;
        s.beta = 0.0;
        s.epsilon = std::pow(2.0, -double(j) * s.alpha);
        s.delta = 0.0;
        return s;
    }
    const double den = 1277.0 * omega - 2496.0;
    s.alpha = (426.0 * omega - 832.0) / den;
    s.beta = (omega - 2.0) / den;
    s.sigma = 832.0 / (1277.0 * den);
    s.epsilon = std::pow(2.0, -double(j) * s.alpha);
    s.delta = std::pow(2.0, -double(j) * s.beta);
    return s;
}

} // namespace latdisc::poisson
