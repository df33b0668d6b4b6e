#include "lame/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lame {

namespace {

// 16-point Gauss-Legendre on [-1, 1]
const std::array<double, 16> kGlNodes = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};

const std::array<double, 16> kGlWeights = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

const std::array<double, 16>& gl16_nodes() { return kGlNodes; }
const std::array<double, 16>& gl16_weights() { return kGlWeights; }

cplx pairwise_sum(const std::vector<cplx>& terms) {
    // recursion in index order: identical result for any thread layout that
    // produced the same per-index terms
    std::function<cplx(std::size_t, std::size_t)> rec = [&](std::size_t lo,
                                                            std::size_t hi) -> cplx {
        if (hi - lo <= 8) {
            cplx s{0.0, 0.0};
            for (std::size_t i = lo; i < hi; ++i) s += terms[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    if (terms.empty()) return {0.0, 0.0};
    return rec(0, terms.size());
}

StationaryPointSet find_stationary_points(const PhaseModel& phase, double t_hint) {
    const double lo = phase.s_lo, hi = phase.s_hi;
    const double L = hi - lo;
    const int N = 1024;
    std::vector<double> s_grid(N + 1), f1(N + 1);
    double scale1 = 0.0, scale2 = 0.0, scale3 = 0.0, scale4 = 0.0;
    for (int i = 0; i <= N; ++i) {
        s_grid[i] = lo + L * i / N;
        f1[i] = phase.df[0](s_grid[i]);
        scale1 = std::max(scale1, std::abs(f1[i]));
    }
    const int Nc = 64;
    for (int i = 0; i <= Nc; ++i) {
        const double s = lo + L * i / Nc;
        scale2 = std::max(scale2, std::abs(phase.df[1](s)));
        scale3 = std::max(scale3, std::abs(phase.df[2](s)));
        scale4 = std::max(scale4, std::abs(phase.df[3](s)));
    }

    std::vector<double> zeros;
    auto polish = [&](double a, double b) {
        double fa = phase.df[0](a);
        double x = 0.5 * (a + b);
        for (int it = 0; it < 100; ++it) {
            const double fx = phase.df[0](x);
            if ((fx > 0) == (fa > 0)) {
                a = x;
            } else {
                b = x;
            }
            const double dfx = phase.df[1](x);
            double xn = (dfx != 0.0) ? x - fx / dfx : 0.5 * (a + b);
            if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
            if (std::abs(xn - x) < 1e-10 * std::max(1.0, std::abs(x))) return xn;
            x = xn;
        }
        return x;
    };
    for (int i = 0; i < N; ++i) {
        if (f1[i] == 0.0) {
            zeros.push_back(s_grid[i]);
        } else if ((f1[i] > 0) != (f1[i + 1] > 0)) {
            zeros.push_back(polish(s_grid[i], s_grid[i + 1]));
        }
    }
    // endpoints with |F'| below threshold count as stationary
    const double end_thresh = 1e-9 * std::max(1.0, scale1);
    if (std::abs(f1[0]) < end_thresh) zeros.insert(zeros.begin(), lo);
    if (std::abs(f1[N]) < end_thresh) zeros.push_back(hi);

    StationaryPointSet out;
    auto classify = [&](double s) -> StationaryPoint {
        StationaryPoint p;
        p.s = s;
        const double th2 = 1e-6 * std::max(scale2, 1e-300);
        const double th3 = 1e-6 * std::max(scale3, 1e-300);
        double eps;
        if (std::abs(phase.df[1](s)) >= th2) {
            p.order = 1;
            eps = std::abs(phase.df[1](s));
        } else if (std::abs(phase.df[2](s)) >= th3) {
            p.order = 2;
            eps = std::abs(phase.df[2](s));
        } else {
            p.order = 3;
            eps = std::abs(phase.df[3](s));
            if (eps == 0.0) {
                throw std::runtime_error(
                    "find_stationary_points: derivatives 1..4 all vanish at s = " +
                    std::to_string(s));
            }
        }
        const double t_eff = std::max(t_hint, 1.0);
        p.radius = std::pow(t_eff * eps, -1.0 / (p.order + 1.0));
        p.radius = std::min(p.radius, 0.25 * L);
        return p;
    };
    for (double z : zeros) out.points.push_back(classify(z));

    // merge clusters closer than their localization radii (fold regions)
    bool merged = true;
    while (merged && out.points.size() > 1) {
        merged = false;
        for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
            const auto &a = out.points[i], &b = out.points[i + 1];
            if (b.s - a.s < 2.0 * std::max(a.radius, b.radius)) {
                StationaryPoint m = classify(0.5 * (a.s + b.s));
                m.radius = std::max({m.radius, a.radius, b.radius});
                out.points[i] = m;
                out.points.erase(out.points.begin() + static_cast<long>(i) + 1);
                merged = true;
                break;
            }
        }
    }
    return out;
}

PanelPlan build_panel_plan(const PhaseModel& phase, double t, const OscOptions& opt,
                           const StationaryPointSet& stat) {
    const double lo = phase.s_lo, hi = phase.s_hi;
    const double L = hi - lo;
    const double h_max = (opt.h_max > 0.0) ? opt.h_max : L / 16.0;
    const double h_amp = (opt.h_amp > 0.0) ? opt.h_amp : std::numeric_limits<double>::infinity();
    PanelPlan plan;
    plan.edges.push_back(lo);

    // window intervals (clipped, merged; stationary set is sorted)
    struct Window {
        double a, b, h;
    };
    std::vector<Window> windows;
    const int min_panels_per_window = (opt.min_window_nodes + 15) / 16;
    for (const auto& p : stat.points) {
        const double a = std::max(lo, p.s - p.radius);
        const double b = std::min(hi, p.s + p.radius);
        if (b <= a) continue;
        const double h = std::min({(b - a) / min_panels_per_window, h_max, h_amp});
        if (!windows.empty() && a <= windows.back().b) {
            windows.back().b = std::max(windows.back().b, b);
            windows.back().h = std::min(windows.back().h, h);
        } else {
            windows.push_back({a, b, h});
        }
    }

    auto lay_panels = [&](double a, double b, double h_cap) {
        const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / h_cap)));
        const double h = (b - a) / static_cast<double>(n);
        for (long i = 1; i <= n; ++i) plan.edges.push_back(a + h * static_cast<double>(i));
    };
    auto sweep_region = [&](double a, double b) {
        // panel width from the local oscillation scale
        double s = a;
        int guard = 0;
        while (s < b - 1e-15 * L) {
            const double f1 = std::abs(phase.df[0](s));
            double h = std::min({h_max, h_amp, opt.rad_per_panel / (1.0 + t * f1)});
            // look ahead: F' may grow across the panel
            const double f1b = std::abs(phase.df[0](std::min(b, s + h)));
            h = std::min(h, opt.rad_per_panel / (1.0 + t * std::max(f1, f1b)) * 1.5);
            h = std::min(h, b - s);
            plan.edges.push_back(s + h);
            s += h;
            if (++guard > opt.max_panels) {
                plan.over_budget = true;
                break;
            }
        }
        plan.edges.back() = b;
    };

    double cursor = lo;
    for (const auto& w : windows) {
        if (w.a > cursor) sweep_region(cursor, w.a);
        lay_panels(w.a, w.b, w.h);
        cursor = w.b;
    }
    if (cursor < hi) sweep_region(cursor, hi);
    if (plan.panels() > opt.max_panels) plan.over_budget = true;
    return plan;
}

namespace {

cplx integrate_with_plan(const PhaseModel& phase, const std::function<cplx(double)>& amplitude,
                         double t, const PanelPlan& plan, int split) {
    std::vector<cplx> panel_values;
    panel_values.reserve(static_cast<std::size_t>(plan.panels()) * split);
    for (long p = 0; p < plan.panels(); ++p) {
        const double a0 = plan.edges[p], b0 = plan.edges[p + 1];
        const double hs = (b0 - a0) / split;
        for (int q = 0; q < split; ++q) {
            const double a = a0 + q * hs, b = a + hs;
            const double c = 0.5 * (a + b), r = 0.5 * (b - a);
            cplx acc{0.0, 0.0};
            for (int i = 0; i < 16; ++i) {
                const double s = c + r * kGlNodes[i];
                const double F = phase.f(s);
                acc += kGlWeights[i] * amplitude(s) * std::exp(cplx(0.0, -t * F));
            }
            panel_values.push_back(acc * r);
        }
    }
    return pairwise_sum(panel_values);
}

}  // namespace

QuadratureResult integrate_oscillatory(const PhaseModel& phase,
                                       const std::function<cplx(double)>& amplitude, double t,
                                       const OscOptions& opt) {
    if (t < 1.0) throw std::domain_error("integrate_oscillatory: t < 1");
    const auto stat = find_stationary_points(phase, t);
    const PanelPlan plan = build_panel_plan(phase, t, opt, stat);
    QuadratureResult res;
    res.panels_used = plan.panels();
    res.accuracy_flag = plan.over_budget;
    cplx prev = integrate_with_plan(phase, amplitude, t, plan, 1);
    int split = 2;
    for (int round = 0; round < opt.max_refine; ++round) {
        const cplx next = integrate_with_plan(phase, amplitude, t, plan, split);
        res.error_estimate = std::abs(next - prev);
        res.value = next;
        res.panels_used = plan.panels() * split;
        if (res.error_estimate <= opt.rel_tol * std::abs(next) + opt.abs_tol) {
            return res;
        }
        prev = next;
        split *= 2;
        if (plan.panels() * split > 4 * opt.max_panels) break;
    }
    res.accuracy_flag = true;
    return res;
}

double van_der_corput_bound(const PhaseModel& phase, int k, double epsilon,
                            const std::function<cplx(double)>& amplitude, double t) {
    if (k < 1 || k > 4) throw std::domain_error("van_der_corput_bound: k outside 1..4");
    const double lo = phase.s_lo, hi = phase.s_hi, L = hi - lo;
    const int N = 512;
    for (int i = 0; i <= N; ++i) {
        const double s = lo + L * i / N;
        if (std::abs(phase.df[k - 1](s)) < epsilon) {
            throw std::domain_error("van_der_corput_bound: |F^(k)| < eps on the domain");
        }
    }
    // B = |phi(b)| + int |phi'| (+ int |phi| when k = 1), Simpson on 512 panels
    const double hfd = 1e-6 * L;
    auto dphi = [&](double s) {
        return std::abs(amplitude(std::min(s + hfd, hi)) - amplitude(std::max(s - hfd, lo))) /
               (std::min(s + hfd, hi) - std::max(s - hfd, lo));
    };
    double int_dphi = 0.0, int_phi = 0.0;
    for (int i = 0; i < N; ++i) {
        const double a = lo + L * i / N, b = lo + L * (i + 1) / N, m = 0.5 * (a + b);
        int_dphi += (dphi(a) + 4.0 * dphi(m) + dphi(b)) * (b - a) / 6.0;
        int_phi += (std::abs(amplitude(a)) + 4.0 * std::abs(amplitude(m)) +
                    std::abs(amplitude(b))) * (b - a) / 6.0;
    }
    double B = std::abs(amplitude(hi)) + int_dphi;
    if (k == 1) B += int_phi;
    const double c = 10.0;  // diagnostic ceiling, not a sharp constant
    return c * std::pow(epsilon, -1.0 / k) * std::pow(t, -1.0 / k) * B;
}

TailResult tail_integral(const TailInput& in, double t, double Lambda, int side) {
    if (side != 1 && side != -1) throw std::domain_error("tail_integral: side must be +-1");
    const double lb = side * Lambda;
    const double F1b = in.F1(lb);
    if (F1b == 0.0) throw std::domain_error("tail_integral: F' vanishes at the cutoff");
    const cplx it{0.0, t};
    const cplx eb = std::exp(cplx(0.0, -t * in.F(lb)));
    const double hfd = 1e-4 * (1.0 + Lambda);
    auto h_of = [&](double x) {
        const cplx gp = (in.g(x + hfd) - in.g(x - hfd)) / (2.0 * hfd);
        return (gp * in.F1(x) - in.g(x) * in.F2(x)) / (in.F1(x) * in.F1(x));
    };
    const cplx gb = in.g(lb);
    const cplx hb = h_of(lb);
    // int_{Lambda}^{inf} : T =  e^{-itF}/(it F') [g + h/(it)] at the cutoff;
    // int_{-inf}^{-Lambda}: same with the opposite overall sign
    cplx val = eb / (it * F1b) * (gb + hb / it);
    if (side == -1) val = -val;
    // remainder (1/(it)^2) int (h/F')' e^{-itF}: numeric |.| integral on a
    // log-spaced grid plus a decay-at-least-1/x^2 extrapolation
    auto hf = [&](double x) { return h_of(side * x) / in.F1(side * x); };
    auto dmod = [&](double x) {
        const double hh = 1e-3 * x;
        return std::abs(hf(x + hh) - hf(x - hh)) / (2.0 * hh);
    };
    double bound = 0.0;
    const int M = 64;
    double prev_x = Lambda, prev_v = dmod(Lambda);
    for (int i = 1; i <= M; ++i) {
        const double x = Lambda * std::pow(40.0, static_cast<double>(i) / M);
        const double v = dmod(x);
        bound += 0.5 * (prev_v + v) * (x - prev_x);
        prev_x = x;
        prev_v = v;
    }
    bound += prev_v * prev_x;
    TailResult out;
    out.value = val;
    out.remainder_bound = bound / (t * t);
    return out;
}

double phase_fd_consistency(const PhaseModel& phase) {
    const double L = phase.s_hi - phase.s_lo;
    const double h = 1e-5 * L;
    double worst = 0.0;
    const int N = 40;
    for (int i = 1; i < N; ++i) {
        const double s = phase.s_lo + L * i / N;
        if (s - 2.0 * h < phase.s_lo || s + 2.0 * h > phase.s_hi) continue;
        auto check = [&](const std::function<double(double)>& low,
                         const std::function<double(double)>& high) {
            const double cd = (low(s + h) - low(s - h)) / (2.0 * h);
            worst = std::max(worst, std::abs(cd - high(s)) / (1.0 + std::abs(high(s))));
        };
        check(phase.f, phase.df[0]);
        check(phase.df[0], phase.df[1]);
        check(phase.df[1], phase.df[2]);
        check(phase.df[2], phase.df[3]);
    }
    return worst;
}

}  // namespace lame
