#include "doctest.h"

#include <cmath>

#include "latdisc/poisson.hpp"

using namespace latdisc;
using namespace latdisc::geometry;
using namespace latdisc::poisson;

namespace {

// independent radial oracle: rho_hat(s) = 2 pi int_0^1 r rho(r) J0(2 pi s r) dr
double j0_ref(double x) {
    const int n = 512 + 4 * int(std::ceil(std::abs(x)));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = (i + 0.5) * M_PI / n;
        acc += std::cos(x * std::sin(tau));
    }
    return acc / n;
}

} // namespace

TEST_CASE("mollifier: normalization and transform basics") {
    const Mollifier& mol = standard_mollifier();
    CHECK(mol.rho_hat(0.0) == doctest::Approx(1.0).epsilon(1e-12));

    // unit mass by an independent polar quadrature
    const double mass =
        2.0 * M_PI *
        adaptive_simpson([&](double r) { return r * mol.rho({r, 0.0}); }, 0.0,
                         1.0, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

    for (double s : {0.3, 1.7, 4.0, 9.5, 20.0})
        CHECK(std::abs(mol.rho_hat(s)) <= 1.0);

    // decay below the declared tail threshold at the table radius
    CHECK(mol.tail_threshold() < 1e-9);
    CHECK(mol.envelope(40.0) < 1e-8);
    CHECK(mol.envelope(2.0) >= mol.envelope(10.0));
}

TEST_CASE("mollifier transform against a Hankel oracle") {
    const Mollifier& mol = standard_mollifier();
    for (double s : {0.5, 2.3, 7.1}) {
        const double oracle =
            2.0 * M_PI *
            adaptive_simpson(
                [&](double r) {
                    return r * mol.rho({r, 0.0}) * j0_ref(2.0 * M_PI * s * r);
                },
                0.0, 1.0, 1e-12);
        CHECK(mol.rho_hat(s) == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("schedule formulas") {
    auto s4 = schedule(3, 4);
    CHECK(s4.alpha == doctest::Approx(872.0 / 2612.0).epsilon(1e-15));
    CHECK(s4.beta == doctest::Approx(2.0 / 2612.0).epsilon(1e-15));
    CHECK(s4.sigma == doctest::Approx(832.0 / (1277.0 * 2612.0)).epsilon(1e-15));
    CHECK(s4.zeta == doctest::Approx(1.0 / 3831.0).epsilon(1e-15));
    CHECK(s4.epsilon == doctest::Approx(std::pow(2.0, -3.0 * s4.alpha)).epsilon(1e-14));
    CHECK(s4.delta == doctest::Approx(std::pow(2.0, -3.0 * s4.beta)).epsilon(1e-14));

    // alpha tends to 426/1277 for large omega
    CHECK(schedule(1, 400).alpha == doctest::Approx(426.0 / 1277.0).epsilon(2e-2));

    // strictly convex: no flat directions to schedule around
    auto s2 = schedule(5, 2);
    CHECK(s2.delta == 0.0);

    CHECK_THROWS_AS(schedule(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(schedule(1, 3), std::invalid_argument);
}

TEST_CASE("mollified count approximates the disk count") {
    RotatedDomain disk(SuperellipseDomain(2), 0.0);
    auto pc = mollified_count(disk, 10.0, 0.05);
    // the circle of radius 10 carries 12 lattice points; mollification
    // weights each boundary point by ~1/2, so the smoothed count sits near
    // 317 - 6 no matter how small eps is
    CHECK(std::abs(pc.value - 311.0) <= 1.0);
    // off the boundary coincidence: the smoothed value must land between
    // the exact counts of the slightly shrunk and grown dilates
    auto off = mollified_count(disk, 10.2, 0.05);
    const double c1eps = 1.01 * 0.05;
    CHECK(off.value >= double(counting::count_brute(disk, 10.2 - c1eps)) -
                           off.tail_bound - 1e-6);
    CHECK(off.value <= double(counting::count_brute(disk, 10.2 + c1eps)) +
                           off.tail_bound + 1e-6);
    CHECK(pc.tail_bound <= 1e-6 * std::sqrt(10.0) + 1e-3);
    CHECK(std::abs((pc.sum_D1 + pc.sum_D2).imag()) <=
          1e-8 * std::abs(pc.value));
    // disk at delta = 0.5: no near-flat directions at all
    CHECK(std::abs(pc.sum_D2) == 0.0);
}

TEST_CASE("tail honesty under k_max doubling") {
    RotatedDomain disk(SuperellipseDomain(2), 0.3);
    auto pc = mollified_count(disk, 8.0, 0.2);
    auto pc2 = mollified_count(disk, 8.0, 0.2, 0.5, standard_mollifier(),
                               2 * pc.k_max);
    CHECK(std::abs(pc2.value - pc.value) <=
          pc.tail_bound + pc2.tail_bound + 1e-9);
}

TEST_CASE("mollified count input guards") {
    RotatedDomain disk(SuperellipseDomain(2), 0.0);
    CHECK_THROWS_AS(mollified_count(disk, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(mollified_count(disk, 10.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(mollified_count(disk, 10.0, 1e-4), std::invalid_argument);
}

TEST_CASE("split sums: partition identity and region contents") {
    RotatedDomain q(SuperellipseDomain(4), 0.0);
    const double t = 8.0, eps = 0.25;
    auto pc = mollified_count(q, t, eps, 0.01);
    // axis directions are exactly flat for omega = 4 at theta = 0
    CHECK(std::abs(pc.sum_D2) > 0.0);
    const double total = (pc.sum_D1 + pc.sum_D2).real();
    CHECK(pc.value == doctest::Approx(counting::area(q.base()) * t * t + total)
                          .epsilon(1e-12));

    // same sum, different delta: partition moves but the total is unchanged
    auto pc2 = mollified_count(q, t, eps, 0.4);
    const double total2 = (pc2.sum_D1 + pc2.sum_D2).real();
    CHECK(total2 == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("sandwich inequality on quartic and disk") {
    RotatedDomain q(SuperellipseDomain(4), 0.7);
    {
        const double t = 12.3, eps = std::pow(t, -1.0 / 3.0);
        auto sr = sandwich_check(q, t, eps);
        CHECK(sr.ok);
        CHECK(sr.lower <= sr.upper);
        CHECK(sr.c1 == doctest::Approx(1.01).epsilon(1e-12));
    }
    {
        RotatedDomain disk(SuperellipseDomain(2), 1.1);
        auto sr = sandwich_check(disk, 17.6, std::pow(17.6, -1.0 / 3.0));
        CHECK(sr.ok);
    }
}

TEST_CASE("sandwich with heavy smoothing stays valid") {
    RotatedDomain q(SuperellipseDomain(4), 0.3);
    auto tight = sandwich_check(q, 9.4, 0.15);
    auto loose = sandwich_check(q, 9.4, 0.45);
    CHECK(tight.ok);
    CHECK(loose.ok);
    CHECK(loose.upper - loose.lower >= tight.upper - tight.lower);
}
