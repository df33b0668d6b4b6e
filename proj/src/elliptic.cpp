#include "lame/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lame {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

using ld = long double;
using cld = std::complex<ld>;

struct CoreL {
    cld p, p1, zeta;
    cld sigma_mantissa;
    cld sigma_log;
};

}  // namespace

cplx ScaledComplex::value() const { return mantissa * std::exp(log_scale); }

double ScaledComplex::log_abs() const {
    return std::log(std::abs(mantissa)) + log_scale.real();
}

ScaledComplex& ScaledComplex::normalize() {
    double a = std::abs(mantissa);
    if (a != 0.0 && (a > 1e8 || a < 1e-8)) {
        double l = std::log(a);
        mantissa /= std::exp(l);
        log_scale += l;
    }
    return *this;
}

EllipticContext::EllipticContext(Lattice lattice, double tol) : lat_(lattice), tol_(tol) {
    if (!(lat_.omega > 0.0) || !(lat_.omega_prime > 0.0)) {
        throw std::invalid_argument("lattice half-periods must be positive");
    }
    if (!(tol_ >= 1e-15 && tol_ <= 1e-6)) {
        throw std::invalid_argument("tol outside [1e-15, 1e-6]");
    }
    r_series_ = 0.45 * 2.0 * std::min(lat_.omega, lat_.omega_prime);
    delta_pole_ = 1e-8 * std::min(lat_.omega, lat_.omega_prime);
    compute_invariants();
    compute_laurent_coefficients();
    compute_cell_constants();
}

void EllipticContext::compute_invariants() {
    // g2 = pi^4 E4 / (12 w^4), g3 = pi^6 E6 / (216 w^6), eta1 = pi^2 E2 /(12 w),
    // with E2k the level-1 Eisenstein series in qhat = exp(-2 pi w'/w).
    const ld om = lat_.omega;
    const ld qh = std::exp(-2.0L * kPiL * (ld)lat_.omega_prime / om);
    ld E2 = 1.0L, E4 = 1.0L, E6 = 1.0L;
    ld qn = 1.0L;
    bool converged = false;
    for (long n = 1; n <= 400000; ++n) {
        qn *= qh;
        const ld dn = (ld)n;
        const ld base = qn / (1.0L - qn);
        const ld n2 = dn * dn;
        E2 -= 24.0L * dn * base;
        E4 += 240.0L * dn * n2 * base;
        E6 -= 504.0L * dn * n2 * n2 * base;
        if (240.0L * dn * n2 * base < 1e-21L * std::fabs(E4) && n > 4) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ToleranceError("Eisenstein q-series did not meet tolerance (omega'/omega too small)");
    }
    const ld om4 = om * om * om * om;
    g2_ = (double)(kPiL * kPiL * kPiL * kPiL / (12.0L * om4) * E4);
    g3_ = (double)(kPiL * kPiL * kPiL * kPiL * kPiL * kPiL / (216.0L * om4 * om * om) * E6);
    eta1_ = (double)(kPiL * kPiL / (12.0L * om) * E2);
    const double disc = g2_ * g2_ * g2_ - 27.0 * g3_ * g3_;
    if (!(disc > 0.0)) {
        throw ToleranceError("lattice numerically degenerate: g2^3 - 27 g3^2 <= 0");
    }
}

void EllipticContext::compute_laurent_coefficients() {
    // wp(z) = z^-2 + sum_{k>=2} c_k z^{2k-2};  c2 = g2/20, c3 = g3/28,
    // c_k = 3/((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}  for k >= 4.
    const int K = 48;
    cl_.assign(K + 1, 0.0L);
    cl_[2] = (ld)g2_ / 20.0L;
    cl_[3] = (ld)g3_ / 28.0L;
    for (int k = 4; k <= K; ++k) {
        ld s = 0.0L;
        for (int m = 2; m <= k - 2; ++m) s += cl_[m] * cl_[k - m];
        cl_[k] = 3.0L * s / ((2.0L * k + 1.0L) * (k - 3.0L));
    }
    c_.assign(cl_.begin(), cl_.end());
}

namespace {

// Laurent series about 0 for wp, wp', zeta, log(sigma/w); |w| within the
// series radius. Long double throughout: the duplication steps downstream
// amplify base rounding near the half-period lines when e1 ~ e2.
CoreL eval_series_l(const std::vector<ld>& c, cld w) {
    const cld w2 = w * w;
    cld p{}, p1{}, zt{}, ls{};
    cld w_pow = w2;
    ld prev_term = std::numeric_limits<ld>::max();
    for (std::size_t k = 2; k < c.size(); ++k) {
        const cld term = c[k] * w_pow;
        p += term;
        p1 += (2.0L * k - 2.0L) * c[k] * w_pow / w;
        zt += term * w / (2.0L * k - 1.0L);
        ls += term * w2 / ((2.0L * k) * (2.0L * k - 1.0L));
        // two consecutive tiny terms: alternate coefficients vanish when
        // g3 ~ 0, so a single small term is not convergence
        const ld ta = std::abs(term);
        if (k > 6 && std::max(ta, prev_term) < 1e-22L * (1.0L + std::abs(p))) break;
        prev_term = ta;
        w_pow *= w2;
    }
    CoreL v;
    v.p = 1.0L / w2 + p;
    v.p1 = -2.0L / (w2 * w) + p1;
    v.zeta = 1.0L / w - zt;
    v.sigma_mantissa = w;
    v.sigma_log = -ls;
    return v;
}

CoreL eval_core_l(const std::vector<ld>& c, ld g2, ld r_series, cld z) {
    if (std::abs(z) == 0.0L) {
        throw PoleProximityError("evaluation at lattice point");
    }
    int k = 0;
    cld w = z;
    while (std::abs(w) > r_series) {
        w *= 0.5L;
        ++k;
    }
    CoreL v = eval_series_l(c, w);
    for (int j = 0; j < k; ++j) {
        const cld p = v.p, p1 = v.p1;
        const cld p2 = 6.0L * p * p - 0.5L * g2;
        const cld D = p2 / (2.0L * p1);
        const cld Dp = 6.0L * p - 2.0L * D * D;
        CoreL nv;
        nv.p = D * D - 2.0L * p;
        nv.p1 = D * Dp - p1;
        nv.zeta = 2.0L * v.zeta + D;
        // sigma(2z) = -wp'(z) sigma(z)^4
        const cld s2 = v.sigma_mantissa * v.sigma_mantissa;
        nv.sigma_mantissa = -p1 * s2 * s2;
        nv.sigma_log = 4.0L * v.sigma_log;
        const ld a = std::abs(nv.sigma_mantissa);
        if (a != 0.0L && (a > 1e6L || a < 1e-6L)) {
            const ld l = std::log(a);
            nv.sigma_mantissa /= std::exp(l);
            nv.sigma_log += l;
        }
        v = nv;
    }
    return v;
}

EllipticContext::CoreValues to_double(const CoreL& v) {
    EllipticContext::CoreValues out;
    out.p = cplx((double)v.p.real(), (double)v.p.imag());
    out.p1 = cplx((double)v.p1.real(), (double)v.p1.imag());
    out.zeta = cplx((double)v.zeta.real(), (double)v.zeta.imag());
    out.sigma.mantissa = cplx((double)v.sigma_mantissa.real(), (double)v.sigma_mantissa.imag());
    out.sigma.log_scale = cplx((double)v.sigma_log.real(), (double)v.sigma_log.imag());
    out.sigma.normalize();
    return out;
}

}  // namespace

EllipticContext::CoreValues EllipticContext::eval_core(cplx z) const {
    return to_double(eval_core_l(cl_, (ld)g2_, (ld)r_series_, cld(z.real(), z.imag())));
}

EllipticContext::CoreValues EllipticContext::eval(cplx z) const {
    const CellReduction r = reduce(z);
    CoreL v = eval_core_l(cl_, (ld)g2_, (ld)r_series_, cld(r.z_red.real(), r.z_red.imag()));
    if (r.m != 0 || r.n != 0) {
        // zeta(z) = zeta(z_red) + 2 m eta1 + 2 n eta3;
        // sigma(z) = (-1)^{m+n+mn} sigma(z_red) exp(shift * (z_red + m w1 + n w3))
        const ld md = (ld)r.m, nd = (ld)r.n;
        const cld eta1l((ld)eta1_, 0.0L);
        const cld eta3l(0.0L, (ld)eta3_.imag());
        const cld shift = 2.0L * (md * eta1l + nd * eta3l);
        v.zeta += shift;
        const cld center = cld(r.z_red.real(), r.z_red.imag()) +
                           cld(md * (ld)lat_.omega, nd * (ld)lat_.omega_prime);
        const ld sign = ((r.m + r.n + r.m * r.n) % 2 == 0) ? 1.0L : -1.0L;
        v.sigma_mantissa *= sign;
        v.sigma_log += shift * center;
    }
    return to_double(v);
}

CellReduction EllipticContext::reduce(cplx z) const {
    CellReduction r;
    r.m = std::lround(z.real() / (2.0 * lat_.omega));
    r.n = std::lround(z.imag() / (2.0 * lat_.omega_prime));
    r.z_red = z - cplx(2.0 * lat_.omega * static_cast<double>(r.m),
                       2.0 * lat_.omega_prime * static_cast<double>(r.n));
    return r;
}

double EllipticContext::lattice_distance(cplx z) const {
    return std::abs(reduce(z).z_red);
}

void EllipticContext::compute_cell_constants() {
    // e_j from wp at half-periods, eta's from zeta at half-periods; the
    // q-series eta1 is kept as a cross-check.
    const double eta1_q = eta1_;
    CoreValues v1 = eval_core(half_period1());
    CoreValues v2 = eval_core(half_period2());
    CoreValues v3 = eval_core(half_period3());
    e1_ = v1.p.real();
    e2_ = v2.p.real();
    e3_ = v3.p.real();
    const double scale = std::max(1.0, std::abs(e1_));
    const double imag_resid = std::max({std::abs(v1.p.imag()), std::abs(v2.p.imag()), std::abs(v3.p.imag())});
    if (imag_resid > 100.0 * tol_ * scale) {
        throw ToleranceError("half-period values not real within tolerance");
    }
    eta1_ = v1.zeta.real();
    if (std::abs(v1.zeta.imag()) > 100.0 * tol_ * std::max(1.0, std::abs(eta1_))) {
        throw ToleranceError("eta1 not real within tolerance");
    }
    if (std::abs(eta1_ - eta1_q) > 1e4 * tol_ * std::max(1.0, std::abs(eta1_))) {
        throw ToleranceError("eta1 mismatch between q-series and zeta(omega)");
    }
    eta3_ = v3.zeta;
    if (std::abs(eta3_.real()) > 100.0 * tol_ * std::max(1.0, std::abs(eta3_))) {
        throw ToleranceError("eta3 not purely imaginary within tolerance");
    }
    eta3_ = cplx(0.0, eta3_.imag());
    // Legendre relation eta1 w3 - eta3 w1 = pi i / 2
    const cplx legendre = eta1_ * half_period3() - eta3_ * half_period1() - cplx(0.0, kPi / 2.0);
    if (std::abs(legendre) > 1e4 * tol_) {
        throw ToleranceError("Legendre relation residual too large");
    }
    if (!(e3_ < e2_ && e2_ < e1_)) {
        throw ToleranceError("half-period values not strictly ordered e3 < e2 < e1");
    }
    const double sum = e1_ + e2_ + e3_;
    if (std::abs(sum) > 1e4 * tol_ * scale) {
        throw ToleranceError("e1 + e2 + e3 != 0");
    }
    for (double e : {e1_, e2_, e3_}) {
        const double resid = 4.0 * e * e * e - g2_ * e - g3_;
        if (std::abs(resid) > 1e4 * tol_ * std::max(1.0, std::abs(g3_))) {
            throw ToleranceError("e_j does not satisfy the Weierstrass cubic");
        }
    }
}

EllipticContext build_context(const Lattice& lattice, double tol) {
    return EllipticContext(lattice, tol);
}

CellReduction reduce_to_cell(const EllipticContext& ctx, cplx z) { return ctx.reduce(z); }

namespace {

void pole_guard(const EllipticContext& ctx, cplx z) {
    if (ctx.lattice_distance(z) < ctx.delta_pole()) {
        throw PoleProximityError("argument within delta_pole of a lattice point");
    }
}

}  // namespace

cplx wp(const EllipticContext& ctx, cplx z) {
    pole_guard(ctx, z);
    return ctx.eval(z).p;
}

cplx wp_prime(const EllipticContext& ctx, cplx z) {
    pole_guard(ctx, z);
    return ctx.eval(z).p1;
}

cplx wp_second(const EllipticContext& ctx, cplx z) {
    const cplx p = wp(ctx, z);
    return 6.0 * p * p - 0.5 * ctx.g2();
}

cplx wp_third(const EllipticContext& ctx, cplx z) {
    pole_guard(ctx, z);
    auto v = ctx.eval(z);
    return 12.0 * v.p * v.p1;
}

cplx zeta(const EllipticContext& ctx, cplx z) {
    pole_guard(ctx, z);
    return ctx.eval(z).zeta;
}

ScaledComplex sigma_scaled(const EllipticContext& ctx, cplx z) {
    return ctx.eval(z).sigma;
}

cplx sigma(const EllipticContext& ctx, cplx z) {
    const ScaledComplex s = sigma_scaled(ctx, z);
    if (std::abs(s.log_abs()) > 700.0) {
        throw SigmaOverflowError("sigma outside double range; use sigma_scaled");
    }
    return s.value();
}

LatticeSumResult lattice_sum_invariants(const Lattice& lattice, int N) {
    // plain double sum over |m|,|n| <= N; tails estimated by the integral
    // comparison with lattice-point density 1/(4 w w').
    double s4 = 0.0, s6 = 0.0;
    for (int m = -N; m <= N; ++m) {
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx w(2.0 * lattice.omega * m, 2.0 * lattice.omega_prime * n);
            const cplx w2 = w * w;
            const cplx w4 = w2 * w2;
            s4 += (1.0 / w4).real();
            s6 += (1.0 / (w4 * w2)).real();
        }
    }
    const double R = 2.0 * N * std::min(lattice.omega, lattice.omega_prime);
    const double density = 1.0 / (4.0 * lattice.omega * lattice.omega_prime);
    LatticeSumResult res;
    res.g2 = 60.0 * s4;
    res.g3 = 140.0 * s6;
    res.tail_bound_g2 = 60.0 * density * kPi / (R * R);
    res.tail_bound_g3 = 140.0 * density * kPi / (2.0 * R * R * R * R);
    return res;
}

}  // namespace lame
