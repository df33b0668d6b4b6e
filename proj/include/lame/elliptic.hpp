#ifndef LAME_ELLIPTIC_HPP
#define LAME_ELLIPTIC_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Weierstrass elliptic functions on a rectangular lattice with half-periods
// w1 = omega (real) and w3 = i*omega_prime. Evaluation is argument reduction
// to the fundamental cell, Laurent series with recursively generated
// coefficients, and half-argument duplication when the reduced argument is
// outside the series' comfort radius. Invariants g2, g3 come from the
// exponentially convergent Eisenstein q-series.

namespace lame {

using cplx = std::complex<double>;

/// Rectangular period lattice: periods 2*omega and 2i*omega_prime.
struct Lattice {
    double omega = 1.0;        // w1, real half-period > 0
    double omega_prime = 1.0;  // w3 = i*omega_prime, omega_prime > 0
};

class PoleProximityError : public std::runtime_error {
  public:
    explicit PoleProximityError(const std::string& what) : std::runtime_error(what) {}
};

class ToleranceError : public std::runtime_error {
  public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

class SigmaOverflowError : public std::runtime_error {
  public:
    explicit SigmaOverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// Value held as mantissa * exp(log_scale); sigma grows like exp(quadratic)
/// under quasi-periodic continuation, so plain doubles overflow quickly.
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    cplx log_scale{0.0, 0.0};

    cplx value() const;
    double log_abs() const;  // log |value|
    ScaledComplex& normalize();

    friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) {
        a.mantissa *= b.mantissa;
        a.log_scale += b.log_scale;
        return a.normalize();
    }
    friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) {
        a.mantissa /= b.mantissa;
        a.log_scale -= b.log_scale;
        return a.normalize();
    }
};

/// Argument reduction: z = z_red + 2*m*omega + 2*n*i*omega_prime with z_red
/// in the centered fundamental cell |Re| <= omega, |Im| <= omega_prime.
struct CellReduction {
    cplx z_red;
    long m = 0;
    long n = 0;
};

class EllipticContext {
  public:
    /// Joint values of the core functions at one point.
    struct CoreValues {
        cplx p;        // wp(z)
        cplx p1;       // wp'(z)
        cplx zeta;     // zeta(z)
        ScaledComplex sigma;
    };

    EllipticContext(Lattice lattice, double tol = 1e-12);

    const Lattice& lattice() const { return lat_; }
    double tol() const { return tol_; }
    double g2() const { return g2_; }
    double g3() const { return g3_; }
    double e1() const { return e1_; }
    double e2() const { return e2_; }
    double e3() const { return e3_; }
    double eta1() const { return eta1_; }
    cplx eta3() const { return eta3_; }
    double delta_pole() const { return delta_pole_; }

    cplx half_period1() const { return cplx(lat_.omega, 0.0); }
    cplx half_period2() const { return cplx(lat_.omega, lat_.omega_prime); }
    cplx half_period3() const { return cplx(0.0, lat_.omega_prime); }

    CellReduction reduce(cplx z) const;

    /// Series + duplication evaluation with no argument reduction and no
    /// quasi-periodic unfolding. Exposed so identity suites can test the
    /// quasi-periodicity relations non-circularly.
    CoreValues eval_core(cplx z) const;

    /// Reduced evaluation: argument reduction, core call, unfolding.
    CoreValues eval(cplx z) const;

    /// Distance from z to the nearest lattice point.
    double lattice_distance(cplx z) const;

  private:
    void compute_invariants();
    void compute_laurent_coefficients();
    void compute_cell_constants();
    CoreValues eval_series(cplx w) const;

    Lattice lat_;
    double tol_;
    double g2_ = 0.0, g3_ = 0.0;
    double e1_ = 0.0, e2_ = 0.0, e3_ = 0.0;
    double eta1_ = 0.0;
    cplx eta3_{0.0, 0.0};
    std::vector<double> c_;        // Laurent c_k, k >= 2; c_[k] = c_k
    std::vector<long double> cl_;  // same, long double (internal evaluation)
    double r_series_ = 0.0;        // series radius 0.45 * min(2w, 2w')
    double delta_pole_ = 0.0;
};

EllipticContext build_context(const Lattice& lattice, double tol = 1e-12);

CellReduction reduce_to_cell(const EllipticContext& ctx, cplx z);

cplx wp(const EllipticContext& ctx, cplx z);
cplx wp_prime(const EllipticContext& ctx, cplx z);
cplx wp_second(const EllipticContext& ctx, cplx z);  // 6 wp^2 - g2/2
cplx wp_third(const EllipticContext& ctx, cplx z);   // 12 wp wp'
cplx zeta(const EllipticContext& ctx, cplx z);

/// sigma as a plain complex; throws SigmaOverflowError when the value leaves
/// the double range (use sigma_scaled then).
cplx sigma(const EllipticContext& ctx, cplx z);
ScaledComplex sigma_scaled(const EllipticContext& ctx, cplx z);

/// Brute-force truncated lattice sums for g2 and g3 (|m|,|n| <= N), with the
/// integral-comparison tail estimate. Kept as the slow reference route; the
/// context itself uses the q-series.
struct LatticeSumResult {
    double g2, g3;
    double tail_bound_g2, tail_bound_g3;
};
LatticeSumResult lattice_sum_invariants(const Lattice& lattice, int N);

}  // namespace lame

#endif
