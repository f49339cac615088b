#pragma once

// Two-dimensional exponential sums S(T, M*; G, F), the q-fold
// Weyl-van der Corput differencing transform, the constructive
// integer-vector machinery, and the support-function derivative
// determinant h_q.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "latdisc/geometry.hpp"
#include "latdisc/quadrature.hpp"

namespace latdisc::expsum {

using geometry::RotatedDomain;
using latdisc::Vec2;
using Complex = std::complex<double>;

inline Complex e_of(double f) {
    return std::exp(Complex(0.0, -2.0 * M_PI * f));
}

// Dense bivariate polynomial; derivatives are exact, which the differencing
// identity tests rely on.
class Poly2 {
  public:
    Poly2() : nx_(1), ny_(1), c_(1, 0.0) {}
    // rows[i][j] multiplies x^i y^j
    explicit Poly2(std::vector<std::vector<double>> rows) {
        nx_ = int(rows.size());
        ny_ = 1;
        for (const auto& r : rows) ny_ = std::max(ny_, int(r.size()));
        c_.assign(size_t(nx_) * ny_, 0.0);
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < int(rows[i].size()); ++j)
                at(i, j) = rows[i][j];
    }

    double operator()(Vec2 p) const {
        double v = 0.0;
        for (int i = nx_ - 1; i >= 0; --i) {
            double row = 0.0;
            for (int j = ny_ - 1; j >= 0; --j) row = row * p.y + at(i, j);
            v = v * p.x + row;
        }
        return v;
    }

    Poly2 dx() const {
        Poly2 d = zeros(std::max(nx_ - 1, 1), ny_);
        for (int i = 1; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j) d.at(i - 1, j) = i * at(i, j);
        return d;
    }

    Poly2 dy() const {
        Poly2 d = zeros(nx_, std::max(ny_ - 1, 1));
        for (int i = 0; i < nx_; ++i)
            for (int j = 1; j < ny_; ++j) d.at(i, j - 1) = j * at(i, j);
        return d;
    }

    Poly2 dir(Vec2 v) const {
        Poly2 a = dx(), b = dy(), out = zeros(std::max(a.nx_, b.nx_),
                                              std::max(a.ny_, b.ny_));
        for (int i = 0; i < out.nx_; ++i)
            for (int j = 0; j < out.ny_; ++j)
                out.at(i, j) = v.x * a.get(i, j) + v.y * b.get(i, j);
        return out;
    }

  private:
    static Poly2 zeros(int nx, int ny) {
        Poly2 p;
        p.nx_ = nx;
        p.ny_ = ny;
        p.c_.assign(size_t(nx) * ny, 0.0);
        return p;
    }
    double& at(int i, int j) { return c_[size_t(i) * ny_ + j]; }
    double at(int i, int j) const { return c_[size_t(i) * ny_ + j]; }
    double get(int i, int j) const {
        return (i < nx_ && j < ny_) ? at(i, j) : 0.0;
    }

    int nx_, ny_;
    std::vector<double> c_;
};

// Amplitude on a disk of radius r: the standard bump, so that the support
// is strictly inside any Omega of radius > r.
inline std::function<double(Vec2)> bump_amplitude(double r,
                                                            double height = 1.0) {
    return [r, height](Vec2 p) {
        const double s = p.norm2() / (r * r);
        if (s >= 1.0) return 0.0;
        return height * std::exp(-1.0 / (1.0 - s));
    };
}

struct ExpSumInstance {
    double T = 1.0;
    double M_star = 10.0;
    std::function<double(Vec2)> G;
    Poly2 F;
    double omega_radius = 1.0; // Omega = B(0, omega_radius)
};

struct SumReport {
    Complex value{};
    double abs_mass = 0.0; // sum of |G(m/M*)|
};

inline SumReport eval_sum_report(const ExpSumInstance& inst) {
    if (inst.M_star > 1e4)
        throw std::invalid_argument("eval_sum: M_star over the cost guard");
    if (inst.M_star <= 1.0)
        throw std::invalid_argument("eval_sum: M_star must be > 1");
    SumReport rep;
    const long R = long(std::ceil(inst.M_star * inst.omega_radius)) + 1;
    for (long m2 = -R; m2 <= R; ++m2) {
        for (long m1 = -R; m1 <= R; ++m1) {
            const Vec2 x{m1 / inst.M_star, m2 / inst.M_star};
            const double g = inst.G(x);
            if (g == 0.0) continue;
            rep.abs_mass += std::abs(g);
            rep.value += g * e_of(inst.T * inst.F(x));
        }
    }
    return rep;
}

inline Complex eval_sum(const ExpSumInstance& inst) {
    const SumReport rep = eval_sum_report(inst);
    if (std::abs(rep.value) > rep.abs_mass * (1.0 + 1e-12))
        throw std::logic_error("eval_sum: triangle inequality violated");
    return rep.value;
}

struct DifferencedInstance {
    int q = 1;
    int Q = 2;
    std::vector<Vec2> shifts; // r_1..r_q, integral
    std::vector<int> h;                 // h_1..h_q
    std::function<double(Vec2)> G_q;
    std::function<double(Vec2)> F_q;
    double omega_q_radius = 0.0;
};

// q-fold forward difference Delta_{h_q r_q / M*} ... Delta_{h_1 r_1 / M*} F.
inline double forward_difference(const Poly2& F, Vec2 x,
                                 const std::vector<Vec2>& shifts,
                                 const std::vector<int>& h, double M_star) {
    const int q = int(shifts.size());
    double acc = 0.0;
    for (int mask = 0; mask < (1 << q); ++mask) {
        Vec2 p = x;
        int bits = 0;
        for (int l = 0; l < q; ++l)
            if (mask & (1 << l)) {
                p = p + shifts[l] * (double(h[l]) / M_star);
                ++bits;
            }
        acc += ((q - bits) % 2 == 0 ? 1.0 : -1.0) * F(p);
    }
    return acc;
}

// The Weyl-van der Corput differencing data: the 2^q-fold product amplitude
// and the integral-representation phase.
inline DifferencedInstance difference_transform(
    const ExpSumInstance& inst, int q,
    const std::vector<Vec2>& shifts, const std::vector<int>& h) {
    if (q < 1 || int(shifts.size()) != q || int(h.size()) != q)
        throw std::invalid_argument("difference_transform: q/shifts/h mismatch");
    for (const auto& r : shifts)
        if (r.x == 0.0 && r.y == 0.0)
            throw std::invalid_argument("difference_transform: zero shift");
    for (int hl : h)
        if (hl < 1)
            throw std::invalid_argument("difference_transform: h_l >= 1");

    DifferencedInstance di;
    di.q = q;
    di.Q = 1 << q;
    di.shifts = shifts;
    di.h = h;

    const double M = inst.M_star;
    double shrink = 0.0;
    for (int l = 0; l < q; ++l) shrink += h[l] * shifts[l].norm() / M;
    di.omega_q_radius = inst.omega_radius - shrink;

    auto G = inst.G;
    di.G_q = [G, shifts, h, q, M](Vec2 x) {
        double prod = 1.0;
        for (int mask = 0; mask < (1 << q); ++mask) {
            Vec2 p = x;
            for (int l = 0; l < q; ++l)
                if (mask & (1 << l)) p = p + shifts[l] * (double(h[l]) / M);
            prod *= G(p);
            if (prod == 0.0) return 0.0;
        }
        return prod;
    };

    // <r_1, grad> ... <r_q, grad> F, exact for polynomial phases
    Poly2 D = inst.F;
    for (int l = 0; l < q; ++l) D = D.dir(shifts[l]);

    di.F_q = [D, shifts, h, q, M](Vec2 x) {
        // tensor 16-point Gauss-Legendre over (0,1)^q; exact for the
        // polynomial integrand well past any phase used here
        std::array<double, 16> nodes, weights;
        for (int i = 0; i < 8; ++i) {
            nodes[2 * i] = 0.5 - 0.5 * latdisc::detail::kGL16Nodes[i];
            nodes[2 * i + 1] = 0.5 + 0.5 * latdisc::detail::kGL16Nodes[i];
            weights[2 * i] = weights[2 * i + 1] =
                0.5 * latdisc::detail::kGL16Weights[i];
        }
        double acc = 0.0;
        std::vector<int> idx(q, 0);
        while (true) {
            Vec2 p = x;
            double w = 1.0;
            for (int l = 0; l < q; ++l) {
                p = p + shifts[l] * (double(h[l]) / M * nodes[idx[l]]);
                w *= weights[idx[l]];
            }
            acc += w * D(p);
            int l = 0;
            while (l < q && ++idx[l] == 16) idx[l++] = 0;
            if (l == q) break;
        }
        return acc;
    };
    return di;
}

struct VdcReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double H = 0.0;
    int q = 1;
};

// Both sides of the differencing inequality, all inner sums evaluated
// directly; ratio is the implied constant.
inline VdcReport vdc_inequality_report(const ExpSumInstance& inst, int q,
                                       const std::vector<Vec2>& shifts,
                                       double H) {
    if (H <= 1.0 || H > inst.M_star)
        throw std::invalid_argument("vdc_inequality_report: 1 < H <= M*");
    VdcReport rep;
    rep.q = q;
    rep.H = H;
    const int Q = 1 << q;
    rep.lhs = std::pow(std::abs(eval_sum(inst)), double(Q));

    std::vector<double> Hl(q);
    double Hprod = 1.0;
    for (int l = 1; l <= q; ++l) {
        Hl[l - 1] = std::pow(H, std::pow(2.0, double(l - q)));
        Hprod *= Hl[l - 1];
    }

    double inner = 0.0;
    std::vector<int> hv(q, 1);
    while (true) {
        bool in_range = true;
        for (int l = 0; l < q; ++l)
            if (!(hv[l] < Hl[l])) in_range = false;
        if (in_range) {
            auto di = difference_transform(inst, q, shifts, hv);
            double Hs = 1.0;
            for (int l = 0; l < q; ++l) Hs *= hv[l];
            ExpSumInstance differenced;
            differenced.T = Hs * inst.T * std::pow(inst.M_star, -double(q));
            differenced.M_star = inst.M_star;
            differenced.G = di.G_q;
            differenced.omega_radius = inst.omega_radius;
            // F_q is not polynomial in closed form here; sum directly
            const long R =
                long(std::ceil(inst.M_star * inst.omega_radius)) + 1;
            Complex s = 0.0;
            for (long m2 = -R; m2 <= R; ++m2)
                for (long m1 = -R; m1 <= R; ++m1) {
                    const Vec2 x{m1 / inst.M_star,
                                           m2 / inst.M_star};
                    const double g = di.G_q(x);
                    if (g == 0.0) continue;
                    s += g * e_of(differenced.T * di.F_q(x));
                }
            inner += std::abs(s);
        }
        int l = 0;
        while (l < q && ++hv[l] > int(std::ceil(Hl[l]))) hv[l++] = 1;
        if (l == q) break;
    }

    const double M = inst.M_star;
    rep.rhs = std::pow(M, 2.0 * Q) / H +
              std::pow(M, 2.0 * (Q - 1)) / Hprod * inner;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

struct VstarResult {
    long long v1x = 0, v1y = 0;
    long long v2x = 0, v2y = 0;
    long long L = 0; // |det(v1, v2)| = N1^2 + N2^2
    long long N = 0;
};

// Orthogonal equal-length integer vectors aligned with xi to accuracy 1/N;
// default N preserves the |v*| ~ K^{-4q} scaling.
inline VstarResult construct_vstar(Vec2 xi, int q, double K,
                                   long long N_override = 0) {
    VstarResult r;
    if (N_override > 0) {
        if (double(N_override) < 2.0 * M_SQRT2)
            throw std::invalid_argument("construct_vstar: N >= 2 sqrt 2");
        r.N = N_override;
    } else {
        if (!(K > 0.0 && K < 1.0))
            throw std::invalid_argument("construct_vstar: K in (0, 1)");
        r.N = std::max<long long>(
            3, (long long)std::ceil(std::pow(K, -4.0 * q)));
    }
    const Vec2 u = xi.normalized();
    const long long n1 = llround(double(r.N) * u.x);
    const long long n2 = llround(double(r.N) * u.y);
    r.v1x = -n2;
    r.v1y = n1;
    r.v2x = n1;
    r.v2y = n2;
    r.L = n1 * n1 + n2 * n2;
    return r;
}

namespace detail {

// 4th-order central-difference stencils, offsets -3..3.
inline const std::array<std::array<long double, 7>, 5>& stencils() {
    static const std::array<std::array<long double, 7>, 5> s = {{
        {0.0L, 0.0L, 0.0L, 1.0L, 0.0L, 0.0L, 0.0L},
        {0.0L, 1.0L / 12, -8.0L / 12, 0.0L, 8.0L / 12, -1.0L / 12, 0.0L},
        {0.0L, -1.0L / 12, 16.0L / 12, -30.0L / 12, 16.0L / 12, -1.0L / 12,
         0.0L},
        {1.0L / 8, -1.0L, 13.0L / 8, 0.0L, -13.0L / 8, 1.0L, -1.0L / 8},
        {-1.0L / 6, 2.0L, -13.0L / 2, 28.0L / 3, -13.0L / 2, 2.0L,
         -1.0L / 6},
    }};
    return s;
}

// Support function in long double; the stencil cancellation needs the
// extra mantissa bits.
inline long double support_ld(const RotatedDomain& dom, long double x,
                              long double y) {
    const long double c = dom.rotation().c, s = dom.rotation().s;
    const long double bx = c * x + s * y;
    const long double by = -s * x + c * y;
    const int w = dom.base().omega();
    const long double p = (long double)w / (w - 1);
    const long double u = dom.base().a() * fabsl(bx);
    const long double v = dom.base().b() * fabsl(by);
    const long double m = u > v ? u : v;
    if (m == 0.0L) return 0.0L;
    return m * powl(powl(u / m, p) + powl(v / m, p), 1.0L / p);
}

// Mixed partial d^m_{u1} d^n_{u2} of H_theta(y + u1 v1 + u2 v2) at 0 by a
// tensor stencil with the given per-direction steps.
inline long double mixed_partial(const RotatedDomain& dom, Vec2 y,
                                 Vec2 v1, Vec2 v2, int m,
                                 int n, long double h1, long double h2) {
    const auto& st = stencils();
    long double acc = 0.0L;
    for (int si = -3; si <= 3; ++si) {
        const long double ci = st[m][si + 3];
        if (ci == 0.0L) continue;
        for (int ti = -3; ti <= 3; ++ti) {
            const long double cj = st[n][ti + 3];
            if (cj == 0.0L) continue;
            const long double px = (long double)y.x + si * h1 * v1.x +
                                   ti * h2 * v2.x;
            const long double py = (long double)y.y + si * h1 * v1.y +
                                   ti * h2 * v2.y;
            acc += ci * cj * support_ld(dom, px, py);
        }
    }
    for (int i = 0; i < m; ++i) acc /= h1;
    for (int i = 0; i < n; ++i) acc /= h2;
    return acc;
}

} // namespace detail

// h_q(y, v1, v2) = det(g_ij) with g_ij the (q+2)-order mixed directional
// derivatives of H_theta along (v1, v2); Richardson-extrapolated to 6th
// order with step tied to the curvature scale.
inline double hq_determinant(const RotatedDomain& dom, Vec2 y,
                             Vec2 v1, Vec2 v2, int q) {
    if (q < 1 || q > 3)
        throw std::invalid_argument("hq_determinant: q in {1, 2, 3}");
    const double K = dom.curvature(y);
    if (K < 1e-3)
        throw std::domain_error("hq_determinant: near-flat normal rejected");

    const long double h0 = 1e-2L * (long double)std::min(K * K, 1.0);
    const long double h1 = h0 / (long double)v1.norm();
    const long double h2 = h0 / (long double)v2.norm();

    auto g = [&](int m, int n, long double f) {
        return detail::mixed_partial(dom, y, v1, v2, m, n, h1 * f, h2 * f);
    };
    auto rich = [&](int m, int n) {
        const long double coarse = g(m, n, 1.0L);
        const long double fine = g(m, n, 0.5L);
        return (16.0L * fine - coarse) / 15.0L;
    };
    // g11 = d^3_{u1} d^{q-1}_{u2}, g12 = d^2_{u1} d^q_{u2},
    // g22 = d_{u1} d^{q+1}_{u2}
    const long double g11 = rich(3, q - 1);
    const long double g12 = rich(2, q);
    const long double g22 = rich(1, q + 1);
    return double(g11 * g22 - g12 * g12);
}

// Direct evaluation of the single-sum bound with caller-supplied constant;
// the restriction regime is reported, not asserted.
struct PropBound {
    double main = 0.0;
    double remainder = 0.0;
    double total = 0.0;
    bool restriction_ok = false;
    bool mstar_ok = false;
};

inline PropBound single_sum_bound(double K, double T, double M_star, int q,
                                  double constant = 1.0) {
    if (!(K > 0.0 && K < 1.0))
        throw std::invalid_argument("single_sum_bound: K in (0, 1)");
    const double Q = std::pow(2.0, q);
    PropBound b;
    b.main = std::pow(std::pow(K, -12.0 * q - 1.0) * T *
                          std::pow(M_star, 6.0 * Q - q - 6.0),
                      1.0 / (3.0 * Q - 2.0));
    b.remainder =
        std::pow(K, -(20.0 * q + 4.0) / Q) * std::pow(M_star, 2.0 - 2.0 / Q) *
        (std::pow(K, -(12.0 * q + 4.0) / Q) +
         std::pow(std::pow(K, 12.0 * q + 1.0) / T * std::pow(M_star, q + 2.0),
                  1.0 / (3.0 * Q - 2.0)) *
             (std::pow(std::pow(K, -20.0 * q - 7.0) / T * std::pow(M_star, q),
                       1.0 / Q) +
              std::pow(std::log(M_star), 1.0 / Q)));
    b.total = constant * (b.main + b.remainder);
    b.restriction_ok =
        T >= std::pow(K, (8.0 * q + 4.0) / Q - 5.0) *
                 std::pow(M_star, q - 1.0 + 2.0 / Q);
    b.mstar_ok = M_star >= std::pow(K, -4.0 * q - 2.0);
    return b;
}

} // namespace latdisc::expsum
