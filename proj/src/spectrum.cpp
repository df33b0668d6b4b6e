#include "lame/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lame {

namespace {

constexpr double kPi = std::numbers::pi;

// Safeguarded Newton on a monotone bracket [lo, hi]: g(lo), g(hi) of
// opposite sign. g returns (value, derivative).
template <typename G>
double newton_bisect(G&& g, double lo, double hi, double x0, double xtol, int max_iter = 80) {
    auto [flo, dlo] = g(lo);
    auto [fhi, dhi] = g(hi);
    (void)dlo;
    (void)dhi;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) {
        throw std::domain_error("newton_bisect: no sign change on bracket");
    }
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < max_iter; ++it) {
        auto [f, df] = g(x);
        if (f == 0.0) return x;
        if ((f > 0) == (flo > 0)) {
            lo = x;
        } else {
            hi = x;
        }
        double step = (df != 0.0) ? -f / df : 0.0;
        double xn = x + step;
        if (!(xn > lo && xn < hi) || step == 0.0) {
            xn = 0.5 * (lo + hi);
        }
        if (std::abs(xn - x) < xtol) return xn;
        x = xn;
    }
    return x;
}

}  // namespace

SpectralContext::SpectralContext(EllipticContext ctx) : ctx_(std::move(ctx)) {
    const double e3 = ctx_.e3();
    wpp_w3_ = 6.0 * e3 * e3 - 0.5 * ctx_.g2();
    sigma_w3_ = sigma_scaled(ctx_, ctx_.half_period3());

    // wp(w3 + u) = e3 + sum b_k u^{2k}: b1 = wp''(w3)/2,
    // b_k = (12 e3 b_{k-1} + 6 sum_{i=1}^{k-2} b_i b_{k-1-i}) / (2k (2k-1))
    const int K = 26;
    b_.assign(K + 1, 0.0);
    b_[1] = 0.5 * wpp_w3_;
    for (int k = 2; k <= K; ++k) {
        double s = 12.0 * e3 * b_[k - 1];
        for (int i = 1; i <= k - 2; ++i) s += 6.0 * b_[i] * b_[k - 1 - i];
        b_[k] = s / ((2.0 * k) * (2.0 * k - 1.0));
    }
    // lam(v) = -v sqrt(hhat(v^2)), hhat(w) = b1 - b2 w + b3 w^2 - ...
    // sqrt series p: p0 = sqrt(b1), p_j = (h_j - sum p_i p_{j-i}) / (2 p0)
    p_.assign(K, 0.0);
    p_[0] = std::sqrt(b_[1]);
    for (int j = 1; j < K; ++j) {
        double h = ((j % 2) ? -1.0 : 1.0) * b_[j + 1];
        double s = 0.0;
        for (int i = 1; i <= j - 1; ++i) s += p_[i] * p_[j - i];
        p_[j] = (h - s) / (2.0 * p_[0]);
    }
    v_window_ = 0.35 * ctx_.lattice().omega_prime;
}

BandStructure band_edges(const SpectralContext& sc) { return sc.bands(); }

SpectralPoint a_from_energy(const SpectralContext& sc, double E, Band band) {
    const auto& ctx = sc.elliptic();
    const double om = sc.omega(), omp = sc.omega_p();
    const double tol = ctx.tol();
    SpectralPoint pt;
    pt.band = band;
    pt.E = E;
    if (band == Band::band1) {
        const auto b = sc.bands();
        if (E < b.band1_lo() - 1e-12 || E > b.band1_hi() + 1e-12) {
            throw std::domain_error("a_from_energy: E outside band 1");
        }
        auto g = [&](double s) {
            auto v = ctx.eval(cplx(om, s));
            return std::pair<double, double>(v.p.real() + E, (cplx(0.0, 1.0) * v.p1).real());
        };
        const double s = newton_bisect(g, 0.0, omp, 0.5 * omp, 1e-14 * omp);
        pt.a = cplx(om, s);
        pt.lam = 0.0;
    } else {
        const auto b = sc.bands();
        if (E < b.band2_lo() - 1e-12) {
            throw std::domain_error("a_from_energy: E below band 2");
        }
        // wp(is) = -E, monotone from -inf (s->0) to e3 (s = w')
        auto g = [&](double s) {
            auto v = ctx.eval(cplx(0.0, s));
            return std::pair<double, double>(v.p.real() + E, (cplx(0.0, 1.0) * v.p1).real());
        };
        double s_lo = std::min(0.5 / std::sqrt(E - ctx.e3() + 1.0), 0.5 * omp);
        while (g(s_lo).first > 0.0) s_lo *= 0.5;  // wp + E < 0 for small s
        const double s0 = std::min(1.0 / std::sqrt(std::max(E, 1.0)), 0.9 * omp);
        const double s = newton_bisect(g, s_lo, omp, s0, 1e-14 * omp);
        pt.a = cplx(0.0, s);
        pt.lam = std::sqrt(std::max(0.0, ctx.e3() + E));
    }
    (void)tol;
    return pt;
}

cplx quasimomentum(const SpectralContext& sc, cplx a) {
    const auto& ctx = sc.elliptic();
    return cplx(0.0, 1.0) * (zeta(ctx, a) - a * (ctx.eta1() / sc.omega()));
}

cplx eigenfunction(const SpectralContext& sc, cplx a, double x) {
    const auto& ctx = sc.elliptic();
    const cplx w3 = ctx.half_period3();
    const ScaledComplex num = sigma_scaled(ctx, cplx(x, 0.0) + w3 + a);
    const ScaledComplex den = sigma_scaled(ctx, cplx(x, 0.0) + w3);
    const cplx za = zeta(ctx, a);
    const cplx expo = num.log_scale - den.log_scale - za * x - ctx.eta3() * a;
    return num.mantissa / den.mantissa * std::exp(expo);
}

cplx eigenfunction_derivative(const SpectralContext& sc, cplx a, double x) {
    const auto& ctx = sc.elliptic();
    const cplx w3 = ctx.half_period3();
    const cplx lg = zeta(ctx, cplx(x, 0.0) + w3 + a) - zeta(ctx, cplx(x, 0.0) + w3) - zeta(ctx, a);
    return lg * eigenfunction(sc, a, x);
}

cplx bloch_factor(const SpectralContext& sc, cplx a, double x) {
    const auto& ctx = sc.elliptic();
    const cplx w3 = ctx.half_period3();
    const ScaledComplex num = sigma_scaled(ctx, cplx(x, 0.0) + w3 + a);
    const ScaledComplex den = sigma_scaled(ctx, cplx(x, 0.0) + w3);
    const cplx expo = num.log_scale - den.log_scale - a * (ctx.eta3() + (x / sc.omega()) * ctx.eta1());
    return num.mantissa / den.mantissa * std::exp(expo);
}

namespace {

// wp'(a)/(e3 - wp(a)) with the 0/0 at a = w3 (mod lattice) resolved by the
// edge Taylor series when u = a - w3 is small.
cplx wp_ratio_at_edge(const SpectralContext& sc, cplx u) {
    const auto& b = sc.edge_series();
    const cplx w = u * u;
    cplx num{}, den{};
    cplx wk{1.0, 0.0};
    for (std::size_t k = 1; k < b.size(); ++k) {
        num += 2.0 * static_cast<double>(k) * b[k] * wk;
        den += b[k] * wk;
        wk *= w;
    }
    return -num / (den * u);
}

}  // namespace

WronskianValue wronskian(const SpectralContext& sc, cplx a) {
    const auto& ctx = sc.elliptic();
    const cplx w3 = ctx.half_period3();
    const ScaledComplex sp = sigma_scaled(ctx, w3 + a);
    const ScaledComplex sm = sigma_scaled(ctx, w3 - a);
    const ScaledComplex s0 = sc.sigma_w3();
    const cplx pref = sp.mantissa * sm.mantissa / (s0.mantissa * s0.mantissa) *
                      std::exp(sp.log_scale + sm.log_scale - 2.0 * s0.log_scale);
    const auto ured = ctx.reduce(a - w3);
    cplx ratio;
    if (std::abs(ured.z_red) < sc.edge_window()) {
        ratio = wp_ratio_at_edge(sc, ured.z_red);
    } else {
        const auto v = ctx.eval(a);
        ratio = v.p1 / (ctx.e3() - v.p);
    }
    WronskianValue res;
    res.value = pref * ratio;
    const cplx p1 = wp_prime(ctx, a);
    res.at_band_edge = std::abs(p1) < 1e-9 * (1.0 + std::abs(wp_second(ctx, a)));
    return res;
}

cplx spectral_weight(const SpectralContext& sc, cplx a) {
    const auto& ctx = sc.elliptic();
    const cplx w3 = ctx.half_period3();
    const ScaledComplex s0 = sc.sigma_w3();
    const auto ured = ctx.reduce(a - w3);
    if (std::abs(ured.z_red) < sc.edge_window()) {
        // weight = sigma(w3)^2 e^{-2 eta3 (u + w3)} (sum_k b_k u^{2k-2}) (u/sigma(u))^2
        const cplx u = ured.z_red;
        const auto& b = sc.edge_series();
        cplx ser{};
        cplx wk{1.0, 0.0};
        const cplx w = u * u;
        for (std::size_t k = 1; k < b.size(); ++k) {
            ser += b[k] * wk;
            wk *= w;
        }
        cplx u_over_sigma_sq;
        if (std::abs(u) < 1e-12) {
            u_over_sigma_sq = 1.0;
        } else {
            const ScaledComplex su = sigma_scaled(ctx, u);
            const cplx r = su.mantissa / u * std::exp(su.log_scale);
            u_over_sigma_sq = 1.0 / (r * r);
        }
        const cplx s0sq = s0.mantissa * s0.mantissa * std::exp(2.0 * s0.log_scale);
        return s0sq * std::exp(-2.0 * ctx.eta3() * (u + w3)) * ser * u_over_sigma_sq;
    }
    const ScaledComplex sp = sigma_scaled(ctx, w3 + a);
    const ScaledComplex sm = sigma_scaled(ctx, w3 - a);
    const cplx ratio = s0.mantissa * s0.mantissa / (sp.mantissa * sm.mantissa) *
                       std::exp(2.0 * s0.log_scale - sp.log_scale - sm.log_scale);
    return -ratio * (ctx.e3() - wp(ctx, a));
}

std::optional<double> reflection_identity_check(const SpectralContext& sc, cplx a, double x,
                                                double xp) {
    const auto& ctx = sc.elliptic();
    const double om = sc.omega();
    cplx b;
    if (std::abs(a.real() - om) < 0.25 * om) {
        b = 2.0 * ctx.half_period2() - a;  // band 1
    } else if (std::abs(a.real()) < 0.25 * om) {
        b = 2.0 * ctx.half_period3() - a;  // band 2
    } else {
        throw std::domain_error("reflection_identity_check: a not on a spectral arc");
    }
    if (std::abs(a - b) < 1e-8) return std::nullopt;  // fixed point of the reflection
    const cplx lhs = eigenfunction(sc, a, xp) * eigenfunction(sc, -a, x) / wronskian(sc, a).value;
    const cplx rhs = eigenfunction(sc, b, x) * eigenfunction(sc, -b, xp) / wronskian(sc, b).value;
    return std::abs(lhs + rhs);
}

namespace {

// Real-coefficient cubic a3 x^3 + a2 x^2 + a1 x + a0; roots closed under
// conjugation.
std::array<cplx, 3> solve_real_cubic(double a3, double a2, double a1, double a0) {
    const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    std::array<cplx, 3> r;
    if (disc >= 0.0) {
        // three real roots (trig form)
        const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        if (m == 0.0) {
            r = {cplx(shift, 0.0), cplx(shift, 0.0), cplx(shift, 0.0)};
            return r;
        }
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            r[k] = cplx(shift + m * std::cos(theta - 2.0 * kPi * k / 3.0), 0.0);
        }
    } else {
        // one real root (Cardano) and a conjugate pair
        const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = (u != 0.0) ? -p / (3.0 * u) : std::cbrt(-q / 2.0 - sq);
        const double t0 = u + v;
        const double re = -t0 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        r = {cplx(shift + t0, 0.0), cplx(shift + re, im), cplx(shift + re, -im)};
    }
    return r;
}

}  // namespace

CubicReport cubic_analysis(const SpectralContext& sc) {
    const auto& ctx = sc.elliptic();
    const double zr = sc.zeta_ratio();
    const double g2 = ctx.g2(), g3 = ctx.g3();
    CubicReport rep;
    rep.zeta_ratio = zr;
    rep.coeffs = {2.0, 6.0 * zr, 0.5 * g2, g3 - 0.5 * g2 * zr};
    rep.roots = solve_real_cubic(rep.coeffs[0], rep.coeffs[1], rep.coeffs[2], rep.coeffs[3]);
    auto P = [&](cplx x) {
        return ((rep.coeffs[0] * x + rep.coeffs[1]) * x + rep.coeffs[2]) * x + rep.coeffs[3];
    };

    // multiplicity classification per the double-root threshold
    rep.multiplicity = {1, 1, 1};
    rep.near_margin = false;
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double sep = std::abs(rep.roots[i] - rep.roots[j]);
            const double scale = 1.0 + std::abs(rep.roots[i]);
            min_sep = std::min(min_sep, sep / scale);
            if (sep < 1e-7 * scale) {
                rep.multiplicity[i] += 1;
                rep.multiplicity[j] += 1;
            }
        }
    }
    if (min_sep >= 1e-7 && min_sep < 1e-4) rep.near_margin = true;
    if (rep.multiplicity[0] + rep.multiplicity[1] + rep.multiplicity[2] > 4 + 1) {
        rep.assertion_failures.push_back("triple root detected");
    }

    // critical points of P
    const double disc = zr * zr - g2 / 12.0;
    rep.corollary_holds = (disc <= 0.0);
    const cplx sq = std::sqrt(cplx(disc, 0.0));
    rep.r_plus = -zr + sq;
    rep.r_minus = -zr - sq;
    rep.P_r_plus = P(rep.r_plus);
    rep.P_r_minus = P(rep.r_minus);

    // genericity: no double root in (-inf, e3]
    rep.generic = true;
    if (!rep.corollary_holds) {
        for (int i = 0; i < 3; ++i) {
            if (rep.multiplicity[i] >= 2 && std::abs(rep.roots[i].imag()) < 1e-10 &&
                rep.roots[i].real() <= ctx.e3() + 1e-12) {
                rep.generic = false;
            }
        }
    }

    // structural assertions from the root lemma. Margins below the double
    // resolution floor are reported as marginal, not as failures: extreme
    // aspect ratios collapse the band or the gap to within rounding.
    const double res = 1e-10 * (1.0 + std::abs(ctx.e1()) + std::abs(ctx.e3()));
    int simple_in_band = 0;
    bool boundary_root = false;
    rep.root_in_band1 = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(rep.roots[i].imag()) > 1e-9) continue;
        const double x = rep.roots[i].real();
        if (x > ctx.e2() + res && x < ctx.e1() - res) {
            if (rep.multiplicity[i] == 1) {
                simple_in_band += 1;
                rep.root_in_band1 = rep.roots[i].real();
            } else {
                rep.assertion_failures.push_back("multiple root inside (e2, e1)");
            }
        } else if (x > ctx.e2() - res && x < ctx.e1() + res) {
            boundary_root = true;
            if (std::isnan(rep.root_in_band1)) rep.root_in_band1 = x;
        }
    }
    if (simple_in_band != 1) {
        if (boundary_root || ctx.e1() - ctx.e2() < 1e3 * res) {
            rep.marginal.push_back("root position in (e2, e1) below resolution");
        } else {
            rep.assertion_failures.push_back("expected exactly one simple root in (e2, e1)");
        }
    }
    const double p_scale = std::abs(rep.coeffs[1]) + std::abs(rep.coeffs[2]) + std::abs(rep.coeffs[3]);
    for (double e : {ctx.e1(), ctx.e2(), ctx.e3()}) {
        if (std::abs(P(cplx(e, 0.0))) < 1e-10 * (1.0 + p_scale)) {
            rep.marginal.push_back("P(e_j) zero within resolution");
        }
    }
    if (-zr > ctx.e3() + res && -zr < ctx.e2() - res) {
        // strict inclusion holds
    } else if (-zr > ctx.e3() - res && -zr < ctx.e2() + res) {
        rep.marginal.push_back("-zeta(omega)/omega at the boundary of (e3, e2) within resolution");
    } else {
        rep.assertion_failures.push_back("-zeta(omega)/omega outside (e3, e2)");
    }
    return rep;
}

CriticalPair critical_velocity(const SpectralContext& sc) {
    const auto rep = cubic_analysis(sc);
    if (std::isnan(rep.root_in_band1)) {
        throw std::runtime_error("critical_velocity: no simple root of P in (e2, e1)");
    }
    const auto pt = a_from_energy(sc, -rep.root_in_band1, Band::band1);
    const auto& ctx = sc.elliptic();
    const cplx p1 = wp_prime(ctx, pt.a);
    const cplx tau = cplx(0.0, 1.0) * p1 / (sc.zeta_ratio() + wp(ctx, pt.a));
    CriticalPair cp;
    cp.a0 = pt.a;
    cp.s0 = pt.a.imag();
    cp.tau0 = tau.real();
    return cp;
}

double discriminant(const SpectralContext& sc, double E) {
    const auto& ctx = sc.elliptic();
    const auto b = sc.bands();
    const double om = sc.omega(), omp = sc.omega_p();
    if (E < b.band1_lo() - 1e-12) {
        throw std::domain_error("discriminant: E below -e1");
    }
    cplx k;
    if (E <= b.band1_hi()) {
        k = quasimomentum(sc, a_from_energy(sc, std::min(E, b.band1_hi()), Band::band1).a);
    } else if (E < b.band2_lo()) {
        // gap: a on the segment [w2, w3], a = om - r + i w'
        auto g = [&](double r) {
            auto v = ctx.eval(cplx(om - r, omp));
            return std::pair<double, double>(v.p.real() + E, -v.p1.real());
        };
        const double r = newton_bisect(g, 0.0, om, 0.5 * om, 1e-13 * om);
        k = quasimomentum(sc, cplx(om - r, omp));
    } else {
        k = quasimomentum(sc, a_from_energy(sc, E, Band::band2).a);
    }
    // convention fixed by the band-edge condition Delta(-e2) = -2
    const cplx d = 2.0 * std::cos(2.0 * om * k);
    return d.real();
}

double LambdaMap::lambda_of_s(double s) const {
    const double omp = sc_->omega_p();
    const double v = s - omp;
    if (std::abs(v) < sc_->edge_window()) {
        const auto& p = sc_->sqrt_series();
        double acc = 0.0, vk = v;
        const double v2 = v * v;
        for (std::size_t j = 0; j < p.size(); ++j) {
            acc += p[j] * vk;
            vk *= v2;
        }
        return -acc;
    }
    const auto& ctx = sc_->elliptic();
    const double val = ctx.e3() - wp(ctx, cplx(0.0, s)).real();
    return (s < omp ? 1.0 : -1.0) * std::sqrt(std::max(0.0, val));
}

namespace {

// hhat(w) = sum_j (-1)^j b_{j+1} w^j and derivative
std::pair<double, double> hhat(const std::vector<double>& b, double w) {
    double h = 0.0, hp = 0.0, wk = 1.0;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        const double coef = ((j % 2) ? -1.0 : 1.0) * b[j + 1];
        h += coef * wk;
        if (j >= 1) hp += static_cast<double>(j) * coef * wk / w;
        wk *= w;
    }
    return {h, hp};
}

}  // namespace

double LambdaMap::s_of_lambda(double lam, double s_hint) const {
    const double omp = sc_->omega_p();
    const auto& b = sc_->edge_series();
    const double lam_win = lambda_of_s(omp - 0.8 * sc_->edge_window());
    if (std::abs(lam) < std::abs(lam_win)) {
        // solve w * hhat(w) = lam^2 for w = v^2 (well conditioned near 0)
        double w = lam * lam / b[1];
        for (int it = 0; it < 60; ++it) {
            auto [h, hp] = (w > 0) ? hhat(b, w) : std::pair<double, double>(b[1], 0.0);
            const double f = w * h - lam * lam;
            const double df = h + w * hp;
            const double step = f / df;
            w -= step;
            if (std::abs(step) < 1e-17 * (1.0 + std::abs(w))) break;
        }
        const double v = (lam >= 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, w));
        return omp + v;
    }
    const auto& ctx = sc_->elliptic();
    const double al = std::abs(lam);
    const double target = ctx.e3() - al * al;  // wp(is) = target, s in (0, w')
    auto g = [&](double s) {
        auto v = ctx.eval(cplx(0.0, s));
        return std::pair<double, double>(v.p.real() - target, (cplx(0.0, 1.0) * v.p1).real());
    };
    double s_lo = std::min(0.5 / std::sqrt(al * al - ctx.e3() + 1.0), 0.5 * omp);
    while (g(s_lo).first > 0.0) s_lo *= 0.5;
    double s0 = (s_hint > 0.0 && s_hint < omp) ? s_hint : 1.0 / std::max(al, 1.0 / omp);
    s0 = std::clamp(s0, s_lo, omp);
    const double s = newton_bisect(g, s_lo, omp, s0, 1e-14 * omp);
    return lam >= 0 ? s : 2.0 * omp - s;
}

cplx LambdaMap::a_of_lambda(double lam, double s_hint) const {
    return cplx(0.0, s_of_lambda(lam, s_hint));
}

double LambdaMap::jacobian(double lam, double s_hint) const {
    const auto d = a_derivs(lam, s_hint);
    return std::abs(d.d[0]);
}

LambdaMap::ADerivs LambdaMap::a_derivs(double lam, double s_hint) const {
    const double omp = sc_->omega_p();
    ADerivs out;
    const double s = s_of_lambda(lam, s_hint);
    out.s = s;
    out.a = cplx(0.0, s);
    const double v = s - omp;
    if (std::abs(v) < sc_->edge_window()) {
        // series route: lam(v) = -sum p_j v^{2j+1}; inverse-function derivatives
        const auto& p = sc_->sqrt_series();
        double l1 = 0.0, l2 = 0.0, l3 = 0.0, l4 = 0.0;
        double vk = 1.0;  // v^{2j}
        const double v2 = v * v;
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double n = 2.0 * static_cast<double>(j) + 1.0;
            l1 += -p[j] * n * vk;
            if (j >= 1) l2 += -p[j] * n * (n - 1.0) * vk / v;
            l3 += -p[j] * n * (n - 1.0) * (n - 2.0) * (j >= 1 ? vk / v2 : 0.0);
            if (j >= 2) l4 += -p[j] * n * (n - 1.0) * (n - 2.0) * (n - 3.0) * vk / (v2 * v);
            vk *= v2;
        }
        const double V1 = 1.0 / l1;
        const double V2 = -l2 * V1 * V1 * V1;
        const double V3 = (3.0 * l2 * l2 - l1 * l3) * std::pow(V1, 5);
        const double V4 = (-15.0 * l2 * l2 * l2 + 10.0 * l1 * l2 * l3 - l1 * l1 * l4) * std::pow(V1, 7);
        out.d = {cplx(0.0, V1), cplx(0.0, V2), cplx(0.0, V3), cplx(0.0, V4)};
        return out;
    }
    const auto& ctx = sc_->elliptic();
    const auto ev = ctx.eval(out.a);
    const cplx P = ev.p, P1 = ev.p1;
    const cplx P2 = 6.0 * P * P - 0.5 * ctx.g2();
    const cplx P3 = 12.0 * P * P1;
    const cplx P4 = 12.0 * P1 * P1 + 12.0 * P * P2;
    const cplx W1 = -2.0 * lam / P1;
    const cplx W2 = -(2.0 + P2 * W1 * W1) / P1;
    const cplx W3 = -(P3 * W1 * W1 * W1 + 3.0 * P2 * W1 * W2) / P1;
    const cplx W4 = -(P4 * W1 * W1 * W1 * W1 + 6.0 * P3 * W1 * W1 * W2 + 3.0 * P2 * W2 * W2 +
                      4.0 * P2 * W1 * W3) / P1;
    out.d = {W1, W2, W3, W4};
    return out;
}

}  // namespace lame
