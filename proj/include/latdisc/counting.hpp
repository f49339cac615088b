#pragma once

// Exact lattice-point counts of t*B_theta, the area term, and the remainder
// P_B(t), with a certified boundary margin and a brute-force oracle.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "latdisc/geometry.hpp"

namespace latdisc::counting {

using geometry::RotatedDomain;
using geometry::SuperellipseDomain;

struct CountResult {
    std::uint64_t count = 0;
    double area_term = 0.0;
    double remainder = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    bool ambiguous = false;
    double t = 0.0;
};

// area(B) = 4ab Gamma(1+1/w)^2 / Gamma(1+2/w)
inline double area(const SuperellipseDomain& dom) {
    const double w = dom.omega();
    const double g1 = std::tgamma(1.0 + 1.0 / w);
    const double g2 = std::tgamma(1.0 + 2.0 / w);
    return 4.0 * dom.a() * dom.b() * g1 * g1 / g2;
}

namespace detail {

// Certification threshold on |gauge(k) - t|; the float noise floor of the
// gauge grows linearly in t.
inline double margin_eta(double t) { return 1e-9 + 1e-13 * t; }

struct MarginTracker {
    double min_margin = std::numeric_limits<double>::infinity();
    bool ambiguous = false;

    void observe(double gauge_val, double t) {
        const double m = std::abs(gauge_val - t);
        if (m < min_margin) min_margin = m;
        if (m < margin_eta(t)) ambiguous = true;
    }
};

// Closed membership: k in tB iff gauge(k) <= t.
inline bool member(const RotatedDomain& dom, double x, double y, double t,
                   MarginTracker& mt) {
    const double g = dom.gauge({x, y});
    mt.observe(g, t);
    return g <= t;
}

// theta that maps Z^2 to itself for the symmetric superellipse.
inline bool lattice_preserving(const RotatedDomain& dom) {
    if (dom.base().a() != 1.0 || dom.base().b() != 1.0) return false;
    const double q = dom.theta() / (M_PI / 2);
    return std::abs(q - std::round(q)) < 1e-15;
}

inline unsigned __int128 upow128(std::uint64_t x, int n) {
    unsigned __int128 r = 1, b = x;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// Exact integer count of n1^w + n2^w <= t^w; no floating point.
inline std::uint64_t count_integer_exact(int w, std::uint64_t t) {
    const unsigned __int128 tw = upow128(t, w);
    std::uint64_t total = 0;
    for (std::uint64_t n2 = 0; n2 <= t; ++n2) {
        const unsigned __int128 rem = tw - upow128(n2, w);
        // largest n1 with n1^w <= rem, seeded from a float estimate
        std::uint64_t n1 = std::uint64_t(
            std::floor(std::pow(double(rem), 1.0 / w) + 0.5));
        while (upow128(n1, w) > rem) --n1;
        while (upow128(n1 + 1, w) <= rem) ++n1;
        // quadrant assembly: row n2 contributes points (+-n1..) x (+-n2)
        const std::uint64_t row = 2 * n1 + 1;
        total += (n2 == 0) ? row : 2 * row;
    }
    return total;
}

// Chord crossing of gauge(., y) = t on [lo, hi] with gauge(lo)<=t<gauge(hi)
// or the mirrored arrangement; plain bisection to absolute tolerance.
inline double bisect_crossing(const RotatedDomain& dom, double y, double t,
                              double inside, double outside) {
    for (int it = 0; it < 60 && std::abs(outside - inside) > 0.25; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (dom.gauge({mid, y}) <= t)
            inside = mid;
        else
            outside = mid;
    }
    return inside;
}

} // namespace detail

// O(t^2) scan of the bounding box; oracle for count_exact.
inline std::uint64_t count_brute(const RotatedDomain& dom, double t) {
    if (t > 2000.0)
        throw std::invalid_argument("count_brute: t over the quadratic guard");
    detail::MarginTracker mt;
    const double R = t * dom.base().circumradius() + 1.0;
    const long n = long(std::floor(R));
    std::uint64_t total = 0;
    for (long n2 = -n; n2 <= n; ++n2)
        for (long n1 = -n; n1 <= n; ++n1)
            if (detail::member(dom, double(n1), double(n2), t, mt)) ++total;
    return total;
}

// Row scan: locate each horizontal chord by convexity, then certify the
// borderline lattice points against the margin threshold.
inline CountResult count_exact(const RotatedDomain& dom, double t) {
    if (t < 1.0) throw std::invalid_argument("count_exact: t must be >= 1");
    CountResult res;
    res.t = t;
    res.area_term = area(dom.base()) * t * t;

    if (detail::lattice_preserving(dom) &&
        std::abs(t - std::round(t)) < 1e-12) {
        res.count = detail::count_integer_exact(
            dom.base().omega(), std::uint64_t(std::llround(t)));
        res.min_margin = 0.0;
        res.remainder = double(res.count) - res.area_term;
        return res;
    }

    detail::MarginTracker mt;
    const double ymax = t * dom.support({0.0, 1.0});
    const double ymin = -t * dom.support({0.0, -1.0});
    const double X = t * std::max(dom.support({1.0, 0.0}),
                                  dom.support({-1.0, 0.0})) + 1.0;
    std::uint64_t total = 0;
    // one extra row each side: the support value can round just below an
    // integer row that still touches the boundary
    for (long n2 = long(std::ceil(ymin)) - 1; n2 <= long(std::floor(ymax)) + 1;
         ++n2) {
        const double y = double(n2);
        // convexity: gauge(., y) is convex; ternary search for its minimum
        double lo = -X, hi = X;
        while (hi - lo > 0.125) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (dom.gauge({m1, y}) < dom.gauge({m2, y}))
                hi = m2;
            else
                lo = m1;
        }
        const double xm = 0.5 * (lo + hi);
        if (dom.gauge({xm, y}) > t) {
            // near-tangent row: any chord is narrower than the search
            // tolerance, so at most the nearest lattice point can be inside
            for (double dx : {-1.0, 0.0, 1.0})
                if (detail::member(dom, std::round(xm) + dx, y, t, mt)) ++total;
            continue;
        }
        double xr = detail::bisect_crossing(dom, y, t, xm, X);
        double xl = detail::bisect_crossing(dom, y, t, xm, -X);
        long nr = long(std::floor(xr + 0.5));
        while (detail::member(dom, double(nr + 1), y, t, mt)) ++nr;
        while (nr >= long(std::ceil(xl - 1.5)) &&
               !detail::member(dom, double(nr), y, t, mt))
            --nr;
        long nl = long(std::ceil(xl - 0.5));
        while (detail::member(dom, double(nl - 1), y, t, mt)) --nl;
        while (nl <= nr && !detail::member(dom, double(nl), y, t, mt)) ++nl;
        if (nr >= nl) total += std::uint64_t(nr - nl + 1);
    }
    res.count = total;
    res.min_margin = mt.min_margin;
    res.ambiguous = mt.ambiguous;
    res.remainder = double(res.count) - res.area_term;
    return res;
}

inline CountResult remainder(const RotatedDomain& dom, double t) {
    return count_exact(dom, t);
}

// Retry policy for ambiguous boundaries: nudge t until certification holds.
inline CountResult count_certified(const RotatedDomain& dom, double t,
                                   int max_retries = 8) {
    CountResult res = count_exact(dom, t);
    for (int i = 0; i < max_retries && res.ambiguous; ++i)
        res = count_exact(dom, t + (i + 1) * 1e-7);
    return res;
}

} // namespace latdisc::counting
