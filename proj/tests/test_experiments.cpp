#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "latdisc/experiments.hpp"

using namespace latdisc;
using namespace latdisc::experiments;

TEST_CASE("parse_domain grammar") {
    auto d = parse_domain("superellipse:omega=4,a=1,b=1,theta=0.73");
    CHECK(d.omega == 4);
    CHECK(d.a == 1.0);
    CHECK(d.b == 1.0);
    CHECK(d.theta == doctest::Approx(0.73));

    auto min = parse_domain("superellipse:omega=2");
    CHECK(min.omega == 2);
    CHECK(min.a == 1.0);
    CHECK(min.theta == 0.0);

    auto perm = parse_domain("superellipse:theta=1.1,omega=6,b=2");
    CHECK(perm.omega == 6);
    CHECK(perm.b == 2.0);

    CHECK_THROWS_AS(parse_domain("ellipse:omega=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("superellipse:a=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("superellipse:omega=3"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("superellipse:omega=4,c=1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("superellipse:omega=4,a=xyz"),
                    std::invalid_argument);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.j_max = 17;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.j_max = 10;
    cfg.j_min = 12;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.j_min = 6;
    cfg.theta_count = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("fit_exponent on synthetic data") {
    SUBCASE("exact power law is recovered with zero error") {
        std::vector<std::pair<double, double>> pts;
        for (int j = 4; j < 10; ++j) {
            const double lt = j * std::log(2.0);
            pts.emplace_back(lt, 0.75 * lt + 1.3);
        }
        auto f = fit_exponent(pts);
        CHECK(f.slope == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(f.stderr_ < 1e-12);
    }

    SUBCASE("one outlier block shows up in the standard error") {
        std::vector<std::pair<double, double>> pts;
        for (int j = 4; j < 10; ++j) {
            const double lt = j * std::log(2.0);
            pts.emplace_back(lt, 0.75 * lt);
        }
        pts[3].second += 2.0;
        auto f = fit_exponent(pts);
        CHECK(f.stderr_ > 0.1);
    }

    SUBCASE("degenerate and short inputs rejected") {
        std::vector<std::pair<double, double>> flat(6, {1.0, 2.0});
        CHECK_THROWS_AS(fit_exponent(flat), std::domain_error);
        std::vector<std::pair<double, double>> few{{1, 1}, {2, 2}, {3, 3}};
        CHECK_THROWS_AS(fit_exponent(few), std::invalid_argument);
    }
}

TEST_CASE("theta sampling: explicit list, single, and seeded draws") {
    ExperimentConfig cfg;
    cfg.thetas = {0.1, 0.9};
    CHECK(sample_thetas(cfg, 0.5) == std::vector<double>{0.1, 0.9});

    cfg.thetas.clear();
    cfg.theta_count = 1;
    CHECK(sample_thetas(cfg, 0.5) == std::vector<double>{0.5});

    cfg.theta_count = 8;
    auto a = sample_thetas(cfg, 0.5);
    auto b = sample_thetas(cfg, 0.5);
    CHECK(a == b);
    CHECK(a.size() == 8);
    for (double th : a) {
        CHECK(th >= 0.0);
        CHECK(th < M_PI / 2.0);
    }
    cfg.seed = 2;
    CHECK(sample_thetas(cfg, 0.5) != a);
}

TEST_CASE("run_scaling: disk exponent and determinism") {
    ExperimentConfig cfg;
    cfg.domain = "superellipse:omega=2";
    cfg.j_min = 5;
    cfg.j_max = 9;
    auto res = run_scaling(cfg);
    REQUIRE(res.fits.size() == 1);
    CHECK(res.fits[0].fit.slope > 0.0);
    CHECK(res.fits[0].fit.slope < 0.9);
    CHECK(res.rows.size() == 5);
    for (const auto& row : res.rows) CHECK(row.sup_norm >= 0.0);

    std::ostringstream s1, s2;
    write_scaling_csv(s1, cfg, res);
    write_scaling_csv(s2, cfg, run_scaling(cfg));
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("# latdisc artifact v1\n", 0) == 0);
    CHECK(s1.str().find("theta,j,sup_remainder,sup_norm,fitted_exponent") !=
          std::string::npos);
}

TEST_CASE("run_mode dispatch and verdicts") {
    ExperimentConfig cfg;
    std::ostringstream os;

    SUBCASE("unknown mode is a usage error") {
        cfg.mode = "frobnicate";
        CHECK_THROWS_AS(run_mode(cfg, os), std::invalid_argument);
    }

    SUBCASE("vdc battery holds its ratio threshold") {
        cfg.mode = "vdc";
        CHECK(run_mode(cfg, os));
        CHECK(os.str().find("q,T,Mstar,H,lhs,rhs,ratio") !=
              std::string::npos);
    }

    SUBCASE("poisson sandwich sweep is all-true") {
        cfg.mode = "poisson-sandwich";
        cfg.domain = "superellipse:omega=4";
        cfg.theta_count = 2;
        cfg.seed = 9;
        CHECK(run_mode(cfg, os));
        CHECK(os.str().find(",true") != std::string::npos);
        CHECK(os.str().find("false") == std::string::npos);
    }

    SUBCASE("randol mode lands on the quartic exponent") {
        cfg.mode = "randol";
        cfg.domain = "superellipse:omega=4";
        CHECK(run_mode(cfg, os));
        CHECK(os.str().find("omega,theta,slope,expected") !=
              std::string::npos);
    }
}

TEST_CASE("fourier-profile mode: trend verdict and dump shape") {
    ExperimentConfig cfg;
    cfg.mode = "fourier-profile";
    cfg.domain = "superellipse:omega=4,theta=0.45";
    std::ostringstream os;
    CHECK(run_mode(cfg, os));
    const std::string s = os.str();
    CHECK(s.find("omega,theta,xi_angle,lambda,re_num,im_num,re_asym,"
                 "im_asym,delta_xi") != std::string::npos);
    // every emitted direction passed the delta filter
    size_t rows = 0;
    for (char c : s)
        if (c == '\n') ++rows;
    CHECK(rows > 100);
}
