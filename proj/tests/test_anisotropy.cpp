#include <doctest.h>

#include <cmath>
#include <random>

#include "testutil.hpp"
#include "wulff/anisotropy.hpp"
#include "wulff/error.hpp"

using namespace wulff;

namespace {

AnisotropicNorm pnorm(double p, int dim = 2) { return AnisotropicNorm(NormSpec::pnorm(p, dim)); }

AnisotropicNorm weighted41() {
    Eigen::MatrixXd A(2, 2);
    A << 4.0, 0.0, 0.0, 1.0;
    return AnisotropicNorm(NormSpec::weighted(A));
}

AnisotropicNorm hexagon_norm() {
    std::vector<std::vector<double>> dirs;
    for (int k = 0; k < 6; ++k) {
        const double th = M_PI * k / 3.0;
        dirs.push_back({std::cos(th), std::sin(th)});
    }
    return AnisotropicNorm(NormSpec::polytope(dirs));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("eval_norm basics") {
    const double v34[2] = {3.0, 4.0};
    const double v0[2] = {0.0, 0.0};
    const double v1m2[2] = {1.0, -2.0};
    CHECK(pnorm(2.0).value(std::span<const double>(v34, 2)) == doctest::Approx(5.0));
    CHECK(pnorm(kInf).value(std::span<const double>(v1m2, 2)) == doctest::Approx(2.0));
    for (const auto& norm : {pnorm(2.0), pnorm(1.5), weighted41(), hexagon_norm()})
        CHECK(norm.value(std::span<const double>(v0, 2)) == 0.0);
    const double bad[2] = {1.0, std::nan("")};
    CHECK_THROWS_AS((void)pnorm(2.0).value(std::span<const double>(bad, 2)), Error);
}

TEST_CASE("eval_polar closed forms match the brute-force supremum") {
    // Self-dual Euclidean case.
    const double v34[2] = {3.0, 4.0};
    CHECK(pnorm(2.0).polar(std::span<const double>(v34, 2)) == doctest::Approx(5.0));

    // Dual of l-inf is l-1: sup of <(1,1), u>/max|u| over 1e6 directions.
    const double ones[2] = {1.0, 1.0};
    const auto ninf = pnorm(kInf);
    const double oracle_inf =
        testutil::brute_force_polar(ninf, std::span<const double>(ones, 2), 1000000);
    CHECK(ninf.polar(std::span<const double>(ones, 2)) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(oracle_inf == doctest::Approx(2.0).epsilon(1e-3));

    // p = 3: dual exponent 3/2; axis vector has unit dual norm.
    const double e1[2] = {1.0, 0.0};
    const auto n3 = pnorm(3.0);
    const double oracle_3 =
        testutil::brute_force_polar(n3, std::span<const double>(e1, 2), 1000000);
    CHECK(n3.polar(std::span<const double>(e1, 2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle_3 == doctest::Approx(1.0).epsilon(1e-3));

    // All norm kinds against the brute-force oracle on random points.
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& norm : {pnorm(1.5), pnorm(4.0), weighted41(), hexagon_norm()}) {
        for (int trial = 0; trial < 5; ++trial) {
            const double x[2] = {gauss(rng), gauss(rng)};
            const double exact = norm.polar(std::span<const double>(x, 2));
            const double brute =
                testutil::brute_force_polar(norm, std::span<const double>(x, 2), 200000);
            CHECK(brute == doctest::Approx(exact).epsilon(1e-3));
        }
    }
}

TEST_CASE("polytope polar in n = 3 via vertex enumeration") {
    // Support function of the cross-polytope is max |x_i|; its polar is the
    // l1 norm (gauge of the cross-polytope).
    std::vector<std::vector<double>> dirs;
    for (int axis = 0; axis < 3; ++axis)
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(3, 0.0);
            d[axis] = s;
            dirs.push_back(d);
        }
    const AnisotropicNorm octa(NormSpec::polytope(dirs));
    const double x[3] = {0.3, -2.0, 1.1};
    CHECK(octa.value(std::span<const double>(x, 3)) == doctest::Approx(2.0));
    CHECK(octa.polar(std::span<const double>(x, 3)) == doctest::Approx(3.4));
}

TEST_CASE("grad_norm") {
    const double v34[2] = {3.0, 4.0};
    const auto g2 = pnorm(2.0).gradient(std::span<const double>(v34, 2));
    CHECK(g2[0] == doctest::Approx(0.6));
    CHECK(g2[1] == doctest::Approx(0.8));

    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    const AnisotropicNorm we(NormSpec::weighted(eye));
    const double e2[2] = {0.0, 1.0};
    const auto gw = we.gradient(std::span<const double>(e2, 2));
    CHECK(gw[0] == doctest::Approx(0.0));
    CHECK(gw[1] == doctest::Approx(1.0));

    // p = 4 at (1,1): 2^(-3/4) per component, cross-checked by central
    // differences of the explicit formula.
    const auto n4 = pnorm(4.0);
    const double ones[2] = {1.0, 1.0};
    const auto g4 = n4.gradient(std::span<const double>(ones, 2));
    const double expected = std::pow(2.0, -0.75);
    const auto fd = testutil::fd_gradient(
        [](std::span<const double> v) {
            return std::pow(std::pow(v[0], 4.0) + std::pow(v[1], 4.0), 0.25);
        },
        std::span<const double>(ones, 2), 1e-5);
    CHECK(g4[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(g4[0] == doctest::Approx(fd[0]).epsilon(1e-7));
    CHECK(g4[1] == doctest::Approx(fd[1]).epsilon(1e-7));

    const double zero[2] = {0.0, 0.0};
    CHECK_THROWS_AS((void)n4.gradient(std::span<const double>(zero, 2)), Error);
    CHECK_THROWS_AS((void)hexagon_norm().gradient(std::span<const double>(ones, 2)), Error);
    CHECK_THROWS_AS((void)pnorm(kInf).gradient(std::span<const double>(ones, 2)), Error);
}

TEST_CASE("wulff_constant") {
    SUBCASE("Euclidean disk") {
        const WulffGeometry g = wulff_constant(pnorm(2.0), 1024);
        CHECK(std::abs(g.kappa_n - M_PI) < 1e-3);
        CHECK(std::abs(g.kappa_n - M_PI) <= g.kappa_error_estimate);
    }
    SUBCASE("l-inf norm: Wulff ball is the cross-polytope, area 2^n/n!") {
        const WulffGeometry g = wulff_constant(pnorm(kInf), 1024);
        CHECK(std::abs(g.kappa_n - 2.0) < 1e-3);
    }
    SUBCASE("l-1 norm: Wulff ball is the cube, area 2^n") {
        const WulffGeometry g = wulff_constant(pnorm(1.0), 1024);
        CHECK(std::abs(g.kappa_n - 4.0) < 1e-3);
    }
    SUBCASE("refinement never moves kappa by more than the estimate") {
        for (const auto& norm : {pnorm(2.0), pnorm(1.0), weighted41(), hexagon_norm()}) {
            const WulffGeometry coarse = wulff_constant(norm, 128);
            const WulffGeometry fine = wulff_constant(norm, 256);
            CHECK(std::abs(fine.kappa_n - coarse.kappa_n) <= coarse.kappa_error_estimate);
        }
    }
    SUBCASE("n = 3 Euclidean ball") {
        const WulffGeometry g = wulff_constant(pnorm(2.0, 3), 64);
        CHECK(g.kappa_n == doctest::Approx(4.0 * M_PI / 3.0).epsilon(2e-3));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(wulff_constant(pnorm(2.0), 16), Error);
        CHECK_THROWS_AS(wulff_constant(pnorm(2.0, 4), 64), Error);
    }
}

TEST_CASE("wulff_perimeter") {
    WulffGeometry disk{2, M_PI, 1024, 1e-6};
    CHECK(wulff_perimeter(disk, 1.0) == doctest::Approx(2.0 * M_PI));
    CHECK(wulff_perimeter(disk, 2.0) == doctest::Approx(4.0 * M_PI));
    CHECK_THROWS_AS(wulff_perimeter(disk, 0.0), Error);

    // l-inf: Wulff ball is the l1 diamond; direct edge sum of |e| H(nu).
    WulffGeometry diamond{2, 2.0, 1024, 1e-6};
    const auto ninf = pnorm(kInf);
    const Vec2 verts[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    double edge_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Vec2 a = verts[k], b = verts[(k + 1) % 4];
        const Vec2 nu = segment_normal(a, b);
        edge_sum += norm2(b - a) * ninf.value2(nu[0], nu[1]);
    }
    CHECK(edge_sum == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(wulff_perimeter(diamond, 1.0) == doctest::Approx(edge_sum).epsilon(1e-12));
}

TEST_CASE("verify_duality_identities") {
    SUBCASE("Euclidean: exact up to rounding") {
        const DualityReport r = verify_duality_identities(pnorm(2.0), 200, 1e-12);
        CHECK(r.pass);
    }
    SUBCASE("weighted diag(4,1): closed-form polar") {
        const DualityReport r = verify_duality_identities(weighted41(), 1000, 1e-8);
        CHECK(r.pass);
        CHECK(r.max_dev_polar_of_grad < 1e-8);
    }
    SUBCASE("p = 4 against the finite-difference oracle") {
        const auto n4 = pnorm(4.0);
        const DualityReport r = verify_duality_identities(n4, 1000, 1e-6);
        CHECK(r.pass);
        // Oracle: gradients by central differences of value().
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const double x[2] = {gauss(rng), gauss(rng)};
            if (std::hypot(x[0], x[1]) < 0.1) continue;
            const double step = 1e-5 * std::max(1.0, std::hypot(x[0], x[1]));
            const auto fd = testutil::fd_gradient(
                [&](std::span<const double> v) { return n4.value(v); },
                std::span<const double>(x, 2), step);
            const auto an = n4.gradient(std::span<const double>(x, 2));
            CHECK(an[0] == doctest::Approx(fd[0]).epsilon(1e-6));
            CHECK(an[1] == doctest::Approx(fd[1]).epsilon(1e-6));
        }
    }
    SUBCASE("crystalline norms are rejected") {
        CHECK_THROWS_AS(verify_duality_identities(hexagon_norm(), 10, 1e-6), Error);
    }
}

TEST_CASE("norm invariants by sampling") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> tdist(-100.0, 100.0);
    for (const auto& norm : {pnorm(1.5), pnorm(2.0), pnorm(3.0), pnorm(kInf), pnorm(1.0),
                              weighted41(), hexagon_norm()}) {
        const auto [alpha, beta] = norm.bounds();
        REQUIRE(alpha > 0.0);
        REQUIRE(alpha <= beta);
        for (int i = 0; i < 300; ++i) {
            const double xi[2] = {gauss(rng), gauss(rng)};
            const double eta[2] = {gauss(rng), gauss(rng)};
            const double t = tdist(rng);
            const auto sp = std::span<const double>(xi, 2);
            const double h = norm.value(sp);
            const double len = std::hypot(xi[0], xi[1]);
            if (len < 1e-9) continue;
            // Homogeneity.
            const double txi[2] = {t * xi[0], t * xi[1]};
            CHECK(std::abs(norm.value(std::span<const double>(txi, 2)) - std::abs(t) * h) <=
                  1e-12 * h * (1.0 + std::abs(t)));
            // Triangle inequality.
            const double sum[2] = {xi[0] + eta[0], xi[1] + eta[1]};
            CHECK(norm.value(std::span<const double>(sum, 2)) <=
                  h + norm.value(std::span<const double>(eta, 2)) + 1e-12);
            // Equivalence bounds.
            CHECK(h >= alpha * len * (1.0 - 1e-12));
            CHECK(h <= beta * len * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("bidual: polar of the polar returns the norm") {
    // Numeric H(xi) = sup <xi,u>/Hpolar(u) over a dense fan, for all kinds.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& norm : {pnorm(1.5), pnorm(3.0), weighted41(), hexagon_norm()}) {
        for (int i = 0; i < 10; ++i) {
            const double xi[2] = {gauss(rng), gauss(rng)};
            if (std::hypot(xi[0], xi[1]) < 1e-6) continue;
            double best = 0.0;
            for (int k = 0; k < 20000; ++k) {
                const double th = 2.0 * M_PI * k / 20000;
                const double u[2] = {std::cos(th), std::sin(th)};
                const double hp = norm.polar(std::span<const double>(u, 2));
                best = std::max(best, (xi[0] * u[0] + xi[1] * u[1]) / hp);
            }
            CHECK(best ==
                  doctest::Approx(norm.value(std::span<const double>(xi, 2))).epsilon(1e-4));
        }
    }
}

TEST_CASE("NormSpec parsing") {
    CHECK(NormSpec::parse("p:2").p == 2.0);
    CHECK(NormSpec::parse("p:inf").p == kInf);
    const NormSpec w = NormSpec::parse("weighted:4,0,1");
    CHECK(w.kind == NormKind::WeightedEuclidean);
    CHECK(w.weight(0, 0) == 4.0);
    CHECK_THROWS_AS(NormSpec::parse("p:0.5"), Error);
    CHECK_THROWS_AS(NormSpec::parse("nonsense"), Error);
    CHECK_THROWS_AS(NormSpec::parse("polytope:/nonexistent/file"), Error);
    try {
        NormSpec::parse("p:0.5");
    } catch (const Error& e) {
        CHECK(e.code() == "config:p-out-of-range");
    }
}

TEST_CASE("polytope validation") {
    CHECK_THROWS_AS(AnisotropicNorm(NormSpec::polytope({{1.0, 0.0}, {0.0, 1.0}})), Error);
    CHECK_THROWS_AS(
        AnisotropicNorm(NormSpec::polytope({{1.0, 0.0}, {-1.0, 0.0}})), Error); // no span
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0; // indefinite
    CHECK_THROWS_AS(AnisotropicNorm(NormSpec::weighted(bad)), Error);
}
