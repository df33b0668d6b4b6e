#ifndef LAME_QUADRATURE_HPP
#define LAME_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "lame/elliptic.hpp"

// Oscillatory integrals int e^{-i t F(s)} phi(s) ds over real-parametrized
// arcs with real phase. Panels follow the local oscillation scale
// c/(1 + t |F'|); stationary points get fixed dense windows whose radius
// shrinks like (t eps_k)^{-1/(k+1)}.

namespace lame {

struct PhaseModel {
    double s_lo = 0.0, s_hi = 1.0;
    std::function<double(double)> f;                  // F
    std::array<std::function<double(double)>, 4> df;  // F', F'', F''', F''''
};

struct StationaryPoint {
    double s;
    int order;      // 1, 2 or 3: F', .., F^{(order)} vanish, F^{(order+1)} does not
    double radius;  // localization radius (t eps)^{-1/(order+2)}... see build
};

struct StationaryPointSet {
    std::vector<StationaryPoint> points;
};

struct OscOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double rad_per_panel = 10.0;  // phase change per 16-node panel
    double h_max = 0.0;           // 0: (s_hi - s_lo)/16
    double h_amp = 0.0;           // amplitude resolution cap; 0: no cap
    int min_window_nodes = 64;
    long max_panels = 500000;
    int max_refine = 4;
};

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    long panels_used = 0;
    bool accuracy_flag = false;  // true: target not certified within budget
};

/// Zeros of F' located by sign-change bracketing plus Newton polish;
/// endpoint stationary points included. t_hint sets localization radii.
StationaryPointSet find_stationary_points(const PhaseModel& phase, double t_hint);

/// Composite 16-node Gauss-Legendre panels, phase-adaptive layout.
struct PanelPlan {
    std::vector<double> edges;  // panel boundaries, edges.size() = panels + 1
    long panels() const { return static_cast<long>(edges.size()) - 1; }
    bool over_budget = false;
};
PanelPlan build_panel_plan(const PhaseModel& phase, double t, const OscOptions& opt,
                           const StationaryPointSet& stat);

QuadratureResult integrate_oscillatory(const PhaseModel& phase,
                                       const std::function<cplx(double)>& amplitude, double t,
                                       const OscOptions& opt = {});

/// Diagnostic ceiling c eps^{-1/k} t^{-1/k} (|phi(b)| + int |phi'|)
/// (k = 1 additionally integrates |phi|). Errors if |F^{(k)}| < eps anywhere
/// on a sample grid.
double van_der_corput_bound(const PhaseModel& phase, int k, double epsilon,
                            const std::function<cplx(double)>& amplitude, double t);

/// Tail of int e^{-itF} g beyond a cutoff, by two integrations by parts.
/// side = +1: [Lambda, +inf); side = -1: (-inf, -Lambda].
struct TailInput {
    std::function<double(double)> F, F1, F2;
    std::function<cplx(double)> g;
};
struct TailResult {
    cplx value{0.0, 0.0};
    double remainder_bound = 0.0;
};
TailResult tail_integral(const TailInput& in, double t, double Lambda, int side);

/// Finite-difference consistency of the supplied derivatives (max relative
/// mismatch over a sample grid); identity-suite helper.
double phase_fd_consistency(const PhaseModel& phase);

/// 16-node Gauss-Legendre rule on [-1, 1].
const std::array<double, 16>& gl16_nodes();
const std::array<double, 16>& gl16_weights();

/// Sum in index order with pairwise recursion (deterministic reduction).
cplx pairwise_sum(const std::vector<cplx>& terms);

}  // namespace lame

#endif
