#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lame/elliptic.hpp"

using namespace lame;
using std::numbers::pi;

namespace {

double crel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Reference wp by brute-force lattice sum plus quartic/sextic tail
// corrections; independent of the series-and-duplication route. The tail
// window is circular so the closing integral matches the summed region.
cplx wp_lattice_sum_oracle(const Lattice& lat, cplx z, int N = 400) {
    cplx s{0.0, 0.0};
    for (int m = -N; m <= N; ++m) {
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx w(2.0 * lat.omega * m, 2.0 * lat.omega_prime * n);
            const cplx d = z - w;
            s += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    // sums of Omega^{-4}, Omega^{-6} over the region outside the N-box, out
    // to a large disk. The continuum tail beyond the disk cancels in angle
    // (e^{-4 i theta} and e^{-6 i theta} average to zero on rings), so the
    // windowed sum already carries ~1e-15 accuracy.
    const double R_disk = 2.0 * 4000.0 * std::min(lat.omega, lat.omega_prime);
    const int M4 = static_cast<int>(R_disk / (2.0 * lat.omega)) + 1;
    const int M6 = static_cast<int>(R_disk / (2.0 * lat.omega_prime)) + 1;
    double s4o = 0.0, s6o = 0.0;
    for (int m = -M4; m <= M4; ++m) {
        for (int n = -M6; n <= M6; ++n) {
            if (std::abs(m) <= N && std::abs(n) <= N) continue;
            const cplx w(2.0 * lat.omega * m, 2.0 * lat.omega_prime * n);
            if (std::norm(w) > R_disk * R_disk) continue;
            const cplx w2 = w * w;
            const cplx w4 = w2 * w2;
            s4o += (1.0 / w4).real();
            s6o += (1.0 / (w4 * w2)).real();
        }
    }
    return 1.0 / (z * z) + s + 3.0 * (z * z) * s4o + 5.0 * (z * z * z * z) * s6o;
}

}  // namespace

TEST_CASE("invariants for the (5.5, 2) lattice match the reference values") {
    EllipticContext ctx({5.5, 2.0});
    CHECK(std::abs(ctx.g2() - 0.50734283032019714815) < 1e-12);
    CHECK(std::abs(ctx.g3() - (-0.069543837816632307011)) < 1e-13);
    CHECK(std::abs(ctx.e1() - 0.20649035648042431114) < 1e-13);
    CHECK(std::abs(ctx.e2() - 0.20474346942474603178) < 1e-13);
    CHECK(std::abs(ctx.e3() - (-0.41123382590517034292)) < 1e-13);
    CHECK(std::abs(ctx.eta1() - (-0.34549315727959132262)) < 1e-13);
    CHECK(std::abs(ctx.eta3() - cplx(0.0, -0.41123320751892350263)) < 1e-13);
}

TEST_CASE("square lattice has g3 = 0, scaled lattice obeys homogeneity") {
    EllipticContext sq({1.0, 1.0});
    CHECK(std::abs(sq.g3()) < 1e-15);

    EllipticContext big({11.0, 4.0});
    CHECK(std::abs(big.g2() - 0.50734283032019714815 / 16.0) < 1e-14);
    CHECK(std::abs(big.g3() - (-0.069543837816632307011) / 64.0) < 1e-15);
}

TEST_CASE("q-series invariants agree with truncated lattice sums") {
    Lattice lat{5.5, 2.0};
    EllipticContext ctx(lat);
    auto ls = lattice_sum_invariants(lat, 160);
    CHECK(std::abs(ls.g2 - ctx.g2()) < 10.0 * ls.tail_bound_g2 + 1e-9);
    CHECK(std::abs(ls.g3 - ctx.g3()) < 10.0 * ls.tail_bound_g3 + 1e-11);
}

TEST_CASE("context construction rejects bad input") {
    CHECK_THROWS_AS(EllipticContext({-1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(EllipticContext({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(EllipticContext({1.0, 1.0}, 1e-3), std::invalid_argument);
}

TEST_CASE("reduce_to_cell") {
    EllipticContext ctx({5.5, 2.0});
    auto r = reduce_to_cell(ctx, cplx(0.3, 0.1));
    CHECK(r.m == 0);
    CHECK(r.n == 0);
    CHECK(std::abs(r.z_red - cplx(0.3, 0.1)) < 1e-15);

    r = reduce_to_cell(ctx, cplx(2.0 * 5.5 + 0.3, 0.0));
    CHECK(r.m == 1);
    CHECK(r.n == 0);
    CHECK(std::abs(r.z_red - cplx(0.3, 0.0)) < 1e-14);

    r = reduce_to_cell(ctx, cplx(-2.0 * 5.5, 2.0 * 2.0 + 0.1));
    CHECK(r.m == -1);
    CHECK(r.n == 1);
    CHECK(std::abs(r.z_red - cplx(0.0, 0.1)) < 1e-14);
}

TEST_CASE("wp against independent references") {
    EllipticContext ctx({5.5, 2.0});
    CHECK(crel(wp(ctx, cplx(0.31, 0.17)), cplx(4.302520635210243299, -6.7429614286044846411)) < 1e-13);
    CHECK(crel(wp(ctx, cplx(2.5, -1.2)), cplx(0.18908895256020043305, 0.045073889812054678823)) < 1e-13);
    CHECK(crel(wp(ctx, cplx(5.2, 1.9)), cplx(0.20465677545938615789, -6.6694278822837725497e-5)) < 1e-13);

    // half periods
    CHECK(std::abs(wp(ctx, ctx.half_period1()) - ctx.e1()) < 1e-13);
    CHECK(std::abs(wp_prime(ctx, ctx.half_period1())) < 1e-13);
    CHECK(std::abs(wp_prime(ctx, ctx.half_period3())) < 1e-13);

    // leading Laurent behaviour
    const cplx z(1e-3, 0.0);
    CHECK(std::abs(wp(ctx, z) * z * z - 1.0) < 1e-5);

    // brute-force lattice sum oracle at omega_1
    const cplx oracle = wp_lattice_sum_oracle(ctx.lattice(), ctx.half_period1());
    CHECK(std::abs(wp(ctx, ctx.half_period1()) - oracle) < 1e-9);
}

TEST_CASE("zeta and sigma reference values") {
    EllipticContext ctx({5.5, 2.0});
    CHECK(crel(zeta(ctx, cplx(0.31, 0.17)), cplx(2.4799731681991787462, -1.3603712479808125597)) < 1e-13);
    CHECK(crel(zeta(ctx, cplx(2.5, -1.2)), cplx(0.26131005610274756209, 0.27581147816557541374)) < 1e-13);
    CHECK(crel(sigma(ctx, cplx(0.31, 0.17)), cplx(0.31000935815765011604, 0.16999306583314951383)) < 1e-13);
    CHECK(crel(sigma(ctx, cplx(2.5, -1.2)), cplx(2.6200312622582949262, -0.9393475091038716981)) < 1e-13);
}

TEST_CASE("zeta is odd; sigma is odd; sigma(z)/z -> 1") {
    EllipticContext ctx({5.5, 2.0});
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ux(-5.4, 5.4), uy(-1.9, 1.9);
    int tested = 0;
    while (tested < 50) {
        const cplx z(ux(rng), uy(rng));
        if (ctx.lattice_distance(z) < 0.05) continue;
        CHECK(std::abs(zeta(ctx, -z) + zeta(ctx, z)) < 1e-10 * (1.0 + std::abs(zeta(ctx, z))));
        CHECK(std::abs(sigma(ctx, -z) + sigma(ctx, z)) < 1e-10 * (1.0 + std::abs(sigma(ctx, z))));
        ++tested;
    }
    const cplx ztiny(1e-4, 0.0);
    CHECK(std::abs(sigma(ctx, ztiny) / ztiny - 1.0) < 1e-8);
}

TEST_CASE("quasi-periodicity through the unreduced core path") {
    EllipticContext ctx({5.5, 2.0});
    const cplx w1 = ctx.half_period1();
    const cplx w3 = ctx.half_period3();
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(-1.5, 1.5);
    for (int i = 0; i < 20; ++i) {
        const cplx z(ux(rng), uy(rng));
        if (ctx.lattice_distance(z) < 0.1 || ctx.lattice_distance(z + 2.0 * w1) < 0.1 ||
            ctx.lattice_distance(z + 2.0 * w3) < 0.1) {
            continue;
        }
        auto v0 = ctx.eval_core(z);
        auto v1 = ctx.eval_core(z + 2.0 * w1);
        auto v3 = ctx.eval_core(z + 2.0 * w3);
        CHECK(std::abs(v1.zeta - v0.zeta - 2.0 * ctx.eta1()) < 1e-10);
        CHECK(std::abs(v3.zeta - v0.zeta - 2.0 * ctx.eta3()) < 1e-10);
        // sigma(z+2w1) = -sigma(z) exp(2 eta1 (z+w1)), same with eta3 and w3
        const cplx r1 = v1.sigma.value() / (-v0.sigma.value() * std::exp(2.0 * ctx.eta1() * (z + w1)));
        const cplx r3 = v3.sigma.value() / (-v0.sigma.value() * std::exp(2.0 * ctx.eta3() * (z + w3)));
        CHECK(std::abs(r1 - 1.0) < 1e-10);
        CHECK(std::abs(r3 - 1.0) < 1e-10);
        // wp is genuinely periodic
        CHECK(crel(v1.p, v0.p) < 1e-11);
        CHECK(crel(v3.p, v0.p) < 1e-11);
    }
    // Legendre relation
    CHECK(std::abs(ctx.eta1() * w3 - ctx.eta3() * w1 - cplx(0.0, pi / 2.0)) < 1e-12);
}

TEST_CASE("differential identity and zeta addition formula at random points") {
    EllipticContext ctx({5.5, 2.0});
    const double guard = 0.05 * std::min(ctx.lattice().omega, ctx.lattice().omega_prime);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ux(-5.4, 5.4), uy(-1.9, 1.9);
    int tested = 0;
    while (tested < 120) {
        const cplx z(ux(rng), uy(rng));
        if (ctx.lattice_distance(z) < guard) continue;
        const cplx p = wp(ctx, z);
        const cplx p1 = wp_prime(ctx, z);
        const double resid = std::abs(p1 * p1 - (4.0 * p * p * p - ctx.g2() * p - ctx.g3()));
        CHECK(resid / (1.0 + std::pow(std::abs(p), 3)) < 10.0 * ctx.tol());
        ++tested;
    }
    // zeta(u+v) - zeta(u-v) - 2 zeta(v) = -wp'(v)/(wp(u)-wp(v))
    tested = 0;
    while (tested < 40) {
        const cplx u(ux(rng), uy(rng));
        const cplx v(ux(rng) * 0.4, uy(rng) * 0.4);
        if (ctx.lattice_distance(u) < guard || ctx.lattice_distance(v) < guard ||
            ctx.lattice_distance(u + v) < guard || ctx.lattice_distance(u - v) < guard ||
            std::abs(wp(ctx, u) - wp(ctx, v)) < 1e-3) {
            continue;
        }
        const cplx resid = zeta(ctx, u + v) - zeta(ctx, u - v) - 2.0 * zeta(ctx, v) +
                           wp_prime(ctx, v) / (wp(ctx, u) - wp(ctx, v));
        CHECK(std::abs(resid) < 10.0 * ctx.tol() * (1.0 + std::abs(zeta(ctx, u + v))));
        ++tested;
    }
}

TEST_CASE("derivative relations by central differences") {
    EllipticContext ctx({5.5, 2.0});
    const double h = 1e-5;
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> ux(-4.0, 4.0), uy(-1.5, 1.5);
    int tested = 0;
    while (tested < 20) {
        const cplx z(ux(rng), uy(rng));
        if (ctx.lattice_distance(z) < 0.3) continue;
        // d/dz log sigma = zeta
        const cplx dlog = (std::log(sigma(ctx, z + h)) - std::log(sigma(ctx, z - h))) / (2.0 * h);
        CHECK(std::abs(dlog - zeta(ctx, z)) < 1e-6);
        // d zeta/dz = -wp
        const cplx dz = (zeta(ctx, z + h) - zeta(ctx, z - h)) / (2.0 * h);
        CHECK(std::abs(dz + wp(ctx, z)) < 1e-6);
        // d wp/dz = wp'
        const cplx dp = (wp(ctx, z + h) - wp(ctx, z - h)) / (2.0 * h);
        CHECK(std::abs(dp - wp_prime(ctx, z)) < 1e-5 * (1.0 + std::abs(dp)));
        ++tested;
    }
}

TEST_CASE("realness and ordering on the rectangle") {
    EllipticContext ctx({5.5, 2.0});
    const cplx w3 = ctx.half_period3();
    for (double x : {0.1, 0.9, 2.3, 4.4, 5.2}) {
        CHECK(std::abs(wp(ctx, cplx(x, 0.0) + w3).imag()) < 1e-12);
        CHECK(std::abs(zeta(ctx, cplx(x, 0.0)).imag()) < 1e-12);
        CHECK(std::abs(zeta(ctx, cplx(0.0, 0.33 * x)).real()) < 1e-12);
    }
    CHECK(ctx.e3() < ctx.e2());
    CHECK(ctx.e2() < ctx.e1());
}

TEST_CASE("pole guard and sigma range guard") {
    EllipticContext ctx({5.5, 2.0});
    CHECK_THROWS_AS(wp(ctx, cplx(1e-10, 0.0)), PoleProximityError);
    CHECK_THROWS_AS(zeta(ctx, cplx(11.0, 4.0) + cplx(1e-10, 1e-10)), PoleProximityError);
    // |sigma| leaves the double range far from the cell (quadratic exponent;
    // the sign of eta1 decides between overflow and underflow)
    CHECK_THROWS_AS(sigma(ctx, cplx(300.5, 0.2)), SigmaOverflowError);
    auto s = sigma_scaled(ctx, cplx(300.5, 0.2));
    CHECK(std::isfinite(s.log_abs()));
    CHECK(std::abs(s.log_abs()) > 700.0);

    EllipticContext tall({1.0, 5.0});
    CHECK_THROWS_AS(sigma(tall, cplx(300.5, 0.2)), SigmaOverflowError);
    CHECK(sigma_scaled(tall, cplx(300.5, 0.2)).log_abs() > 700.0);
}

TEST_CASE("anisotropic lattice still meets identities") {
    EllipticContext ctx({6.0, 1.5});
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ux(-5.9, 5.9), uy(-1.45, 1.45);
    int tested = 0;
    while (tested < 40) {
        const cplx z(ux(rng), uy(rng));
        if (ctx.lattice_distance(z) < 0.05) continue;
        const cplx p = wp(ctx, z);
        const cplx p1 = wp_prime(ctx, z);
        const double resid = std::abs(p1 * p1 - (4.0 * p * p * p - ctx.g2() * p - ctx.g3()));
        CHECK(resid / (1.0 + std::pow(std::abs(p), 3)) < 1e-10);
        ++tested;
    }
    CHECK(std::abs(ctx.eta1() * ctx.half_period3() - ctx.eta3() * ctx.half_period1() -
                   cplx(0.0, pi / 2.0)) < 1e-11);
}
