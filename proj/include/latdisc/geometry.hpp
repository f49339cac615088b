#pragma once

// Finite-type convex planar domains (superellipse family), their Gauss map,
// curvature, support function, and rotated variants.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "latdisc/vec2.hpp"

namespace latdisc::geometry {

// sgn(x)*|x|^p for even-superellipse gradients (p need not be an integer).
inline double spow(double x, double p) {
    if (x == 0.0) return 0.0;
    return x > 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

// x^n for integer n >= 0 by squaring; exact for the even powers used in
// membership tests.
inline double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

struct BoundaryPoint {
    Vec2 position;
    Vec2 normal;    // unit exterior normal
    Vec2 tangent;   // unit tangent, {tangent, -normal} oriented like {e1, e2}
    double curvature = 0.0;
};

struct FlatPoint {
    Vec2 position;
    int type = 4; // curvature vanishes to order type - 2
};

// Boundary {(x1/a)^omega + (x2/b)^omega = 1}, omega even >= 2.
class SuperellipseDomain {
  public:
    SuperellipseDomain(int omega, double a = 1.0, double b = 1.0)
        : omega_(omega), a_(a), b_(b) {
        if (omega < 2 || omega % 2 != 0)
            throw std::invalid_argument("superellipse: omega must be even and >= 2");
        if (a <= 0.0 || b <= 0.0)
            throw std::invalid_argument("superellipse: semi-axes must be positive");
    }

    int omega() const { return omega_; }
    double a() const { return a_; }
    double b() const { return b_; }

    // gauge(x) = ((|x1|/a)^w + (|x2|/b)^w)^{1/w}; x in B iff gauge(x) <= 1.
    double gauge(Vec2 p) const {
        const double u = std::abs(p.x) / a_, v = std::abs(p.y) / b_;
        if (u == 0.0 && v == 0.0) return 0.0;
        const double m = std::max(u, v);
        return m * std::pow(ipow(u / m, omega_) + ipow(v / m, omega_),
                            1.0 / omega_);
    }

    bool contains(Vec2 p) const { return gauge(p) <= 1.0; }

    // Support function H(xi) = ((a|xi1|)^p + (b|xi2|)^p)^{1/p}, p = w/(w-1).
    double support(Vec2 xi) const {
        if (xi.x == 0.0 && xi.y == 0.0)
            throw std::invalid_argument("support: zero vector");
        const double p = double(omega_) / (omega_ - 1);
        const double u = a_ * std::abs(xi.x), v = b_ * std::abs(xi.y);
        const double m = std::max(u, v);
        return m * std::pow(std::pow(u / m, p) + std::pow(v / m, p), 1.0 / p);
    }

    // Unique boundary point whose exterior normal is parallel to xi.
    Vec2 gauss_position(Vec2 xi) const {
        if (xi.x == 0.0 && xi.y == 0.0)
            throw std::invalid_argument("gauss_position: zero vector");
        Vec2 u = xi.normalized();
        const double q = 1.0 / (omega_ - 1);
        const double p = double(omega_) / (omega_ - 1);
        const double w1 = a_ * std::abs(u.x), w2 = b_ * std::abs(u.y);
        // x_i = a_i sgn(u_i)|u_i a_i|^{1/(w-1)} / (sum |u_j a_j|^{w/(w-1)})^{1/w}
        const double scale = std::pow(std::pow(w1, p) + std::pow(w2, p),
                                      -1.0 / omega_);
        return {a_ * spow(u.x * a_, q) * scale, b_ * spow(u.y * b_, q) * scale};
    }

    // Curvature at a boundary point via the implicit-curve formula for
    // F = (x1/a)^w + (x2/b)^w.
    double curvature_at(Vec2 p) const {
        const int w = omega_;
        const double fx = w * spow(p.x / a_, w - 1) / a_;
        const double fy = w * spow(p.y / b_, w - 1) / b_;
        const double fxx = w * (w - 1) * ipow(p.x / a_, w - 2) / (a_ * a_);
        const double fyy = w * (w - 1) * ipow(p.y / b_, w - 2) / (b_ * b_);
        const double g2 = fx * fx + fy * fy;
        return (fxx * fy * fy + fyy * fx * fx) / (g2 * std::sqrt(g2));
    }

    std::vector<FlatPoint> flat_points() const {
        if (omega_ == 2) return {};
        return {{{a_, 0.0}, omega_},
                {{-a_, 0.0}, omega_},
                {{0.0, b_}, omega_},
                {{0.0, -b_}, omega_}};
    }

    // Largest boundary distance from the origin.
    double circumradius() const {
        double r = std::max(a_, b_);
        for (int i = 0; i < 512; ++i) {
            const double phi = (i + 0.5) * (2.0 * M_PI / 512);
            r = std::max(r, gauss_position({std::cos(phi), std::sin(phi)}).norm());
        }
        return r;
    }

    double inradius() const { return std::min(a_, b_); }

  private:
    int omega_;
    double a_, b_;
};

enum class Region { D1, D2 };

// A base domain together with a rotation angle; all rotated quantities are
// pulled back through R_theta^t.
class RotatedDomain {
  public:
    RotatedDomain(SuperellipseDomain base, double theta)
        : base_(base), theta_(theta), rot_(theta) {}

    const SuperellipseDomain& base() const { return base_; }
    double theta() const { return theta_; }
    const Rotation& rotation() const { return rot_; }

    double gauge(Vec2 p) const { return base_.gauge(rot_.apply_transpose(p)); }
    bool contains(Vec2 p) const { return gauge(p) <= 1.0; }

    // H_theta(xi) = H(R_theta^t xi)
    double support(Vec2 xi) const {
        return base_.support(rot_.apply_transpose(xi));
    }

    BoundaryPoint gauss_point(Vec2 xi) const {
        if (xi.x == 0.0 && xi.y == 0.0)
            throw std::invalid_argument("gauss_point: zero vector");
        const Vec2 u = rot_.apply_transpose(xi);
        const Vec2 pos = base_.gauss_position(u);
        BoundaryPoint bp;
        bp.position = rot_.apply(pos);
        bp.normal = rot_.apply(u.normalized());
        bp.tangent = {-bp.normal.y, bp.normal.x};
        bp.curvature = curvature(xi);
        return bp;
    }

    // K^theta_xi = K_{R_theta^t xi}; exactly 0 when the pulled-back direction
    // is within 1e-14 of an axis for omega >= 4.
    double curvature(Vec2 xi) const {
        if (xi.x == 0.0 && xi.y == 0.0)
            throw std::invalid_argument("curvature: zero vector");
        const Vec2 u = rot_.apply_transpose(xi).normalized();
        if (base_.omega() >= 4 &&
            (std::abs(u.x) < 1e-14 || std::abs(u.y) < 1e-14))
            return 0.0;
        return base_.curvature_at(base_.gauss_position(u));
    }

    double delta_xi(Vec2 xi) const {
        return std::min(curvature(xi), curvature(-xi));
    }

    Region region_classify(Vec2 k, double delta) const {
        if (k.x == 0.0 && k.y == 0.0)
            throw std::invalid_argument("region_classify: zero vector");
        if (delta <= 0.0)
            throw std::invalid_argument("region_classify: delta must be positive");
        return delta_xi(k) <= delta ? Region::D2 : Region::D1;
    }

    std::vector<FlatPoint> flat_points() const {
        auto pts = base_.flat_points();
        for (auto& fp : pts) fp.position = rot_.apply(fp.position);
        return pts;
    }

  private:
    SuperellipseDomain base_;
    double theta_;
    Rotation rot_;
};

// Central finite-difference Hessian of H_theta at xi. Step policy:
// h = 1e-4 * max(K_xi, 0.1), balancing truncation against the K^{-3}
// third-derivative growth.
struct Hessian2 {
    double h11, h12, h22;

    void eigenvalues(double& lo, double& hi) const {
        const double tr = h11 + h22;
        const double disc = std::sqrt(std::max(
            0.0, (h11 - h22) * (h11 - h22) + 4.0 * h12 * h12));
        lo = 0.5 * (tr - disc);
        hi = 0.5 * (tr + disc);
        if (std::abs(lo) > std::abs(hi)) std::swap(lo, hi);
    }
};

inline Hessian2 support_hessian(const RotatedDomain& dom, Vec2 xi,
                                double h = 0.0) {
    const double K = dom.curvature(xi);
    if (h == 0.0) h = 1e-4 * std::max(K, 0.1);
    auto H = [&](double dx, double dy) {
        return dom.support({xi.x + dx, xi.y + dy});
    };
    const double h0 = H(0, 0);
    Hessian2 out;
    out.h11 = (H(h, 0) - 2.0 * h0 + H(-h, 0)) / (h * h);
    out.h22 = (H(0, h) - 2.0 * h0 + H(0, -h)) / (h * h);
    out.h12 = (H(h, h) - H(h, -h) - H(-h, h) + H(-h, -h)) / (4.0 * h * h);
    return out;
}

// Neighborhood size for the angle-curvature law: the arc (off a flat normal)
// where the curvature stays below half its maximum over the quadrant.
inline double flat_neighborhood_angle(const RotatedDomain& dom) {
    if (dom.base().omega() < 4)
        throw std::domain_error("flat_neighborhood_angle: no flat points");
    const RotatedDomain base(dom.base(), 0.0);
    double kmax = 0.0;
    for (int i = 1; i < 64; ++i) {
        const double phi = i * (M_PI / 2) / 64;
        kmax = std::max(kmax, base.curvature({std::cos(phi), std::sin(phi)}));
    }
    double lo = 0.0, hi = M_PI / 4;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (base.curvature({std::cos(mid), std::sin(mid)}) < 0.5 * kmax)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Lemma-2.1 diagnostic: the angle between n(P) and the flat normal, divided
// by K^{(w-1)/(w-2)} at the point whose normal makes angle phi with it.
inline double angle_curvature_ratio(const RotatedDomain& dom,
                                    const FlatPoint& flat, double phi) {
    const int w = flat.type;
    if (w < 4)
        throw std::domain_error("angle_curvature_ratio: not a flat point type");
    const double phi_max = flat_neighborhood_angle(dom);
    if (phi <= 0.0 || phi >= phi_max)
        throw std::out_of_range("angle_curvature_ratio: phi outside neighborhood");
    const Vec2 n0 = flat.position.normalized(); // axis point: normal is radial
    const Rotation r(phi);
    const double K = dom.curvature(r.apply(n0));
    return phi / std::pow(K, double(w - 1) / (w - 2));
}

} // namespace latdisc::geometry
