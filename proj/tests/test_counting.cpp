#include "doctest.h"

#include <cmath>

#include "latdisc/counting.hpp"
#include "latdisc/quadrature.hpp"

using namespace latdisc;
using namespace latdisc::geometry;
using namespace latdisc::counting;

TEST_CASE("brute-force counts: small closed disks") {
    RotatedDomain d(SuperellipseDomain(2), 0.0);
    CHECK(count_brute(d, 1.0) == 5); // origin plus the four boundary points
    CHECK(count_brute(d, 10.0) == 317);

    RotatedDomain q(SuperellipseDomain(4), 0.0);
    CHECK(count_brute(q, 1.0) == 5);
    CHECK_THROWS_AS(count_brute(d, 3000.0), std::invalid_argument);
}

TEST_CASE("count_exact matches the oracle") {
    for (int omega : {2, 4, 6}) {
        for (double theta : {0.0, 0.3, 1.0, 2.399}) {
            RotatedDomain dom(SuperellipseDomain(omega), theta);
            for (double t = 1.0; t <= 24.0; t += 0.5) {
                auto res = count_exact(dom, t);
                CHECK(res.count == count_brute(dom, t));
            }
        }
    }
}

TEST_CASE("exact integer path agrees with brute force") {
    for (int omega : {2, 4, 6}) {
        RotatedDomain dom(SuperellipseDomain(omega), 0.0);
        for (double t : {1.0, 2.0, 7.0, 31.0}) {
            auto res = count_exact(dom, t);
            CHECK(res.count == count_brute(dom, t));
        }
    }
}

TEST_CASE("closedness: axis points of the quartic are counted at integer t") {
    RotatedDomain q(SuperellipseDomain(4), 0.0);
    // t=3: (3,0) on boundary; exact path counts it
    auto with = count_exact(q, 3.0);
    auto just_inside = count_exact(q, 3.0 + 1e-6);
    auto just_outside = count_exact(q, 3.0 - 1e-6);
    CHECK(with.count == just_inside.count);
    CHECK(with.count == just_outside.count + 4);
}

TEST_CASE("area closed form vs Green's-theorem quadrature") {
    CHECK(area(SuperellipseDomain(2)) == doctest::Approx(M_PI).epsilon(1e-12));
    for (int omega : {4, 6, 64}) {
        SuperellipseDomain dom(omega, 1.0, 1.0);
        const double quad =
            4.0 * adaptive_simpson(
                      [&](double x) {
                          return std::pow(1.0 - ipow(x, omega), 1.0 / omega);
                      },
                      0.0, 1.0, 1e-12);
        CHECK(area(dom) == doctest::Approx(quad).epsilon(1e-9));
    }
    CHECK(area(SuperellipseDomain(4)) == doctest::Approx(3.7081).epsilon(1e-4));
    CHECK(std::abs(area(SuperellipseDomain(64)) - 4.0) / 4.0 < 0.02);
    // rotation invariance is structural: area takes only the base domain
    CHECK(area(SuperellipseDomain(4, 2.0, 0.5)) ==
          doctest::Approx(area(SuperellipseDomain(4)) * 1.0).epsilon(1e-12));
}

TEST_CASE("remainder values and trivial bound") {
    RotatedDomain d(SuperellipseDomain(2), 0.0);
    auto res = remainder(d, 10.0);
    CHECK(res.count == 317);
    CHECK(res.remainder == doctest::Approx(317.0 - 100.0 * M_PI).epsilon(1e-12));

    // |P(t)| = O(t): generous domain constant
    RotatedDomain q(SuperellipseDomain(4), 0.7);
    for (double t : {4.0, 16.0, 64.0, 256.0}) {
        auto r = count_certified(q, t);
        CHECK(std::abs(r.remainder) < 10.0 * t);
    }
}

TEST_CASE("monotonicity in t") {
    RotatedDomain dom(SuperellipseDomain(4), 1.234);
    std::uint64_t prev = 0;
    for (double t = 1.0; t < 20.0; t += 0.37) {
        auto res = count_exact(dom, t);
        CHECK(res.count >= prev);
        prev = res.count;
    }
}

TEST_CASE("quarter-turn symmetry for a=b superellipses") {
    for (double theta : {0.2, 0.9}) {
        RotatedDomain a(SuperellipseDomain(4), theta);
        RotatedDomain b(SuperellipseDomain(4), theta + M_PI / 2);
        for (double t : {3.1, 9.7, 17.3}) {
            CHECK(count_exact(a, t).count == count_exact(b, t).count);
        }
    }
}

TEST_CASE("remainder/t ratio decreases along dyadic t") {
    RotatedDomain dom(SuperellipseDomain(2), 0.456);
    double prev = 1e300;
    for (double t : {256.0, 1024.0, 4096.0}) {
        auto r = count_certified(dom, t + 0.1234);
        const double ratio = std::abs(r.remainder) / t;
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("origin always counted") {
    RotatedDomain dom(SuperellipseDomain(6, 1.0, 0.9), 2.0);
    CHECK(count_exact(dom, 1.0).count >= 1);
    CHECK_THROWS_AS(count_exact(dom, 0.5), std::invalid_argument);
}
