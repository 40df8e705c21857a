#include <doctest.h>

#include <cmath>
#include <random>

#include "testutil.hpp"
#include "wulff/error.hpp"
#include "wulff/torsion.hpp"

using namespace wulff;

namespace {

const AnisotropicNorm& euclid() {
    static AnisotropicNorm n(NormSpec::pnorm(2.0));
    return n;
}

const WulffGeometry exact_disk{2, M_PI, 0, 0.0};

// Independent oracle for the radial torsion value: minimize the sampled
// radial energy over profiles phi(R) = 0 by projected gradient descent with
// Barzilai-Borwein steps. Lambda = 0 (smooth case).
double radial_profile_descent_oracle(double R, int nodes) {
    const double dr = R / nodes;
    std::vector<double> phi(nodes, 0.0); // phi[i] at r_i = i dr, phi(R) = 0 implicit
    std::vector<double> grad(nodes, 0.0), prev_phi, prev_grad;

    const auto energy_grad = [&](const std::vector<double>& p, std::vector<double>& g) {
        std::fill(g.begin(), g.end(), 0.0);
        double e = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double next = (i + 1 < nodes) ? p[i + 1] : 0.0;
            const double rmid = (i + 0.5) * dr;
            const double slope = (next - p[i]) / dr;
            const double w = 2.0 * M_PI * rmid * dr;
            e += (0.5 * slope * slope - 0.5 * (p[i] + next)) * w;
            g[i] += (-slope / dr - 0.5) * w;
            if (i + 1 < nodes) g[i + 1] += (slope / dr - 0.5) * w;
        }
        return e;
    };

    double e = energy_grad(phi, grad);
    double step = 1e-3;
    for (int it = 0; it < 3000; ++it) {
        prev_phi = phi;
        prev_grad = grad;
        for (int i = 0; i < nodes; ++i) phi[i] = std::max(phi[i] - step * grad[i], 0.0);
        e = energy_grad(phi, grad);
        // Barzilai-Borwein step from the last displacement pair.
        double sy = 0.0, yy = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double s = phi[i] - prev_phi[i];
            const double y = grad[i] - prev_grad[i];
            sy += s * y;
            yy += y * y;
        }
        if (yy > 0.0 && sy > 0.0) step = std::clamp(sy / yy, 1e-8, 1e3);
    }
    return -e;
}

} // namespace

TEST_CASE("radial_torsion_minimizer") {
    SUBCASE("classical disk torsion at Lambda = 0") {
        const RadialMinimizer rm = radial_torsion_minimizer(exact_disk, 1.0, 0.0, 512);
        CHECK(rm.dead_core_radius == 0.0);
        CHECK(std::abs(rm.torsion - M_PI / 16.0) < 1e-4);
        CHECK_FALSE(rm.dense_scan_fallback);
    }
    SUBCASE("cross-validation against the profile-space descent oracle") {
        const RadialMinimizer rm = radial_torsion_minimizer(exact_disk, 1.0, 0.0, 512);
        const double oracle = radial_profile_descent_oracle(1.0, 256);
        CHECK(std::abs(rm.torsion - oracle) < 1e-3);
    }
    SUBCASE("R^4 scaling is exact for the quadrature too") {
        const RadialMinimizer r1 = radial_torsion_minimizer(exact_disk, 1.0, 0.0, 512);
        const RadialMinimizer r2 = radial_torsion_minimizer(exact_disk, 2.0, 0.0, 512);
        CHECK(r2.torsion == doctest::Approx(16.0 * r1.torsion).epsilon(1e-6));
    }
    SUBCASE("large Lambda forces a full dead core and zero torsion") {
        const RadialMinimizer rm = radial_torsion_minimizer(exact_disk, 1.0, 50.0, 256);
        CHECK(rm.dead_core_radius == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(rm.torsion == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("torsion is nonincreasing in Lambda") {
        double prev = std::numeric_limits<double>::infinity();
        for (double lam : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
            const double t = radial_torsion_minimizer(exact_disk, 1.0, lam, 256).torsion;
            CHECK(t <= prev + 1e-12);
            prev = t;
        }
    }
    SUBCASE("minimizer structure: phi constant on the core, decreasing outside") {
        // Any positive penalty opens a dead core; past Lambda = 1/16 the zero
        // competitor wins outright, so probe well below that.
        const RadialMinimizer rm = radial_torsion_minimizer(exact_disk, 1.0, 0.02, 256);
        const double r0 = rm.dead_core_radius;
        REQUIRE(r0 > 0.0);
        REQUIRE(r0 < 1.0);
        CHECK(rm.phi(0.0) == doctest::Approx(rm.phi(0.5 * r0)));
        CHECK(rm.phi(1.0) == doctest::Approx(0.0));
        CHECK(rm.phi_prime(0.5 * r0) == 0.0);
        double prev = rm.phi(r0);
        for (int i = 1; i <= 50; ++i) {
            const double cur = rm.phi(r0 + (1.0 - r0) * i / 50);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("beats 200 random admissible annulus profiles") {
        std::mt19937_64 rng(31337);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double lambda = 0.07;
        const RadialMinimizer rm = radial_torsion_minimizer(exact_disk, 1.0, lambda, 256);
        for (int t = 0; t < 200; ++t) {
            const double r0 = unif(rng);
            CHECK(rm.value <= radial_torsion_energy(exact_disk, 1.0, lambda, r0, 256) + 1e-10);
        }
    }
}

TEST_CASE("eval_penalized_functional") {
    SUBCASE("zero field") {
        GridField psi = testutil::square_field(64, [](double, double) { return 0.0; });
        CHECK(eval_penalized_functional(psi, euclid(), 0.0) == 0.0);
    }
    SUBCASE("disk torsion function evaluates to about -pi/16") {
        const GridField psi = testutil::wulff_ball_field(
            euclid(), 1.0, 256,
            [](double x, double y) { return (1.0 - x * x - y * y) / 4.0; });
        CHECK(eval_penalized_functional(psi, euclid(), 0.0) ==
              doctest::Approx(-M_PI / 16.0).epsilon(0.02));
    }
    SUBCASE("large Lambda charges the full support") {
        const GridField psi = testutil::wulff_ball_field(
            euclid(), 1.0, 128,
            [](double x, double y) { return (1.0 - x * x - y * y) / 4.0; });
        const double big = eval_penalized_functional(psi, euclid(), 100.0);
        CHECK(big > 100.0 * psi.omega_measure() - 1.0);
        CHECK(big > 0.0);
    }
    SUBCASE("negative Lambda rejected") {
        GridField psi = testutil::square_field(16, [](double, double) { return 0.0; });
        CHECK_THROWS_AS(eval_penalized_functional(psi, euclid(), -1.0), Error);
    }
}

TEST_CASE("zero_extension_jump") {
    const Polygon square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    SUBCASE("constant trace on the unit square") {
        const GridField psi = testutil::square_field(128, [](double, double) { return 1.0; });
        CHECK(zero_extension_jump(psi, square, euclid()) == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("weighted norm: per-edge normal evaluation") {
        Eigen::MatrixXd A(2, 2);
        A << 4.0, 0.0, 0.0, 1.0;
        const AnisotropicNorm wnorm(NormSpec::weighted(A));
        const GridField psi = testutil::square_field(128, [](double, double) { return 1.0; });
        // Vertical edges have normal e1 with H = 2, horizontal edges H = 1.
        CHECK(zero_extension_jump(psi, square, wnorm) == doctest::Approx(6.0).epsilon(1e-9));
    }
    SUBCASE("vanishing trace") {
        const GridField psi = testutil::square_field(128, [](double x, double y) {
            return x * (1.0 - x) * y * (1.0 - y);
        });
        CHECK(zero_extension_jump(psi, square, euclid()) == doctest::Approx(0.0).epsilon(1e-3));
    }
    SUBCASE("analytic trace within half a percent") {
        // psi = x on the unit square: boundary integral = 2 int_0^1 x dx + 1 = 2.
        const GridField psi = testutil::square_field(256, [](double x, double) { return x; });
        CHECK(zero_extension_jump(psi, square, euclid()) == doctest::Approx(2.0).epsilon(0.005));
    }
    SUBCASE("non-simple polygon rejected") {
        const Polygon bowtie{{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}};
        const GridField psi = testutil::square_field(32, [](double, double) { return 1.0; });
        CHECK_THROWS_AS(zero_extension_jump(psi, bowtie, euclid()), Error);
    }
}

TEST_CASE("eval_insulation_functional") {
    const Polygon square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    SUBCASE("constant competitor on the unit square at m = 1") {
        const GridField psi = testutil::square_field(128, [](double, double) { return 1.0; });
        CHECK(eval_insulation_functional(psi, square, euclid(), 1.0) ==
              doctest::Approx(16.0).epsilon(1e-6));
    }
    SUBCASE("constant on a Wulff ball: closed form") {
        const double R = 0.8;
        const GridField psi = testutil::wulff_ball_field(euclid(), R, 256,
                                                         [](double, double) { return 1.0; });
        Polygon circle;
        for (const auto& p : wulff_boundary(euclid(), R, 512))
            circle.vertices.push_back({p[0], p[1]});
        for (double m : {0.5, 1.0, 2.0}) {
            const double expected = 4.0 / (m * R * R); // (n kappa R)^2 / (m kappa^2 R^4)
            CHECK(eval_insulation_functional(psi, circle, euclid(), m) ==
                  doctest::Approx(expected).epsilon(0.02));
        }
    }
    SUBCASE("m to infinity sends the value to zero") {
        const GridField psi = testutil::square_field(64, [](double, double) { return 1.0; });
        const double v = eval_insulation_functional(psi, square, euclid(), 1e9);
        CHECK(v < 1e-6);
    }
    SUBCASE("zero field rejected") {
        const GridField psi = testutil::square_field(32, [](double, double) { return 0.0; });
        CHECK_THROWS_AS(eval_insulation_functional(psi, square, euclid(), 1.0), Error);
        CHECK_THROWS_AS(eval_insulation_functional(psi, square, euclid(), 0.0), Error);
    }
}

TEST_CASE("saint_venant_compare") {
    const Polygon square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    const GridField grid = rasterize_polygon(square, 48);
    const WulffGeometry geom = wulff_constant(euclid(), 512);

    SUBCASE("penalized mode on the unit square") {
        SaintVenantOptions opts;
        opts.mode = TorsionMode::Penalized;
        opts.lambda = 0.0;
        opts.trials = 2;
        opts.max_iterations = 600;
        const TorsionReport rep = saint_venant_compare(grid, square, euclid(), geom, opts);
        CHECK(rep.inequality_pass);
        CHECK(rep.omega_value <= rep.star_value + rep.inequality_tol);
        // The disk of the same area has T = pi R^4 / 16 with R = 1/sqrt(pi)-ish.
        const double R = rep.wulff_radius;
        CHECK(rep.star_value == doctest::Approx(M_PI * std::pow(R, 4) / 16.0).epsilon(0.01));
        for (const auto& t : rep.trials) {
            CHECK(t.relations.pass);
            CHECK(std::abs(t.relations.energy_lhs - t.relations.energy_rhs) <=
                  1e-9 * std::max(1.0, t.relations.energy_lhs));
        }
        // A sane descent should get within 25% of the classical square value.
        CHECK(rep.omega_value > 0.0);
    }
    SUBCASE("penalized mode on the Wulff ball itself: two sides agree") {
        Polygon circle;
        for (const auto& p : wulff_boundary(euclid(), 1.0, 256))
            circle.vertices.push_back({p[0], p[1]});
        const GridField ball = rasterize_polygon(circle, 64);
        SaintVenantOptions opts;
        opts.mode = TorsionMode::Penalized;
        opts.lambda = 0.0;
        opts.trials = 2;
        opts.max_iterations = 1200;
        const TorsionReport rep = saint_venant_compare(ball, circle, euclid(), geom, opts);
        CHECK(rep.inequality_pass);
        // Optimizer gap only: the sides should be close on the extremal shape.
        CHECK(rep.omega_value == doctest::Approx(rep.star_value).epsilon(0.25));
    }
    SUBCASE("insulation mode on the unit square") {
        SaintVenantOptions opts;
        opts.mode = TorsionMode::Insulation;
        opts.m = 1.0;
        opts.trials = 2;
        opts.max_iterations = 600;
        const TorsionReport rep = saint_venant_compare(grid, square, euclid(), geom, opts);
        CHECK(rep.inequality_pass);
        for (const auto& t : rep.trials) CHECK(t.relations.pass);
        CHECK(rep.omega_value > 0.0);
        CHECK(rep.star_value > 0.0);
    }
}

TEST_CASE("rasterize_polygon") {
    const Polygon square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    const GridField g = rasterize_polygon(square, 64);
    CHECK(g.omega_measure() == doctest::Approx(1.0).epsilon(0.05));
    const Polygon bowtie{{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}};
    CHECK_THROWS_AS(rasterize_polygon(bowtie, 64), Error);
}
