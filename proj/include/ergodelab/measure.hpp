#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergodelab/quad.hpp"

namespace ergodelab {

// Point mass on the open half line.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

// Absolutely continuous part with analytic endpoint knowledge:
//   fn ~ s^(-singularity) near 0, fn ~ s^(-decay) near infinity.
// decay may be left unset when unknown; integration against unbounded
// windows then falls back to windowed partial integrals and classification.
// support restricts fn to a window (default: the whole half line).
// registry_name/params identify densities built by make_density; only those
// round-trip through serialization.
struct Density {
    Integrand fn;
    double singularity = 0.0;
    std::optional<double> decay;
    std::optional<Interval> support;
    std::string registry_name;
    std::vector<double> registry_params;
};

// Integration kernel with the same endpoint conventions as Density.  A
// negative singularity records a zero of that order at s = 0 (the kernel
// 1 - exp(-z s) has singularity -1), which relaxes the combined hint.
struct Kernel {
    Integrand fn;
    double singularity = 0.0;
    double decay = 0.0;
};

// Stand-in decay exponent for kernels that die exponentially: faster than
// any power this library meets, and the tail fold needs only "large".
inline constexpr double exp_decay = 256.0;

// Finiteness weight a measure is checked against at construction:
//   stieltjes:  integral of 1/(1+s)   d mu
//   levy:       integral of s/(1+s)   d mu
enum class MeasureWeight { stieltjes, levy };

struct AdmissibilityReport {
    bool finite = false;
    double value = inf;
};

// Decides the weighted total mass from raw parts, before any measure object
// exists; this is the only way to look at a non-admissible candidate.  With
// endpoint hints the verdict is analytic; without a decay exponent the
// windowed partial integrals over (10^-k, 10^k) are classified instead, and
// an unclear trend throws Inconclusive.
AdmissibilityReport check_admissible(
    const std::vector<Atom>& atoms, const std::optional<Density>& density,
    MeasureWeight weight = MeasureWeight::stieltjes,
    double tol = default_tolerance);

// Positive Radon measure on (0, inf): finitely many atoms plus an optional
// density, admissible for its weight.  Construction is fail-fast: a measure
// object that exists has passed its finiteness check.
class RadonMeasure {
  public:
    RadonMeasure(std::vector<Atom> atoms, std::optional<Density> density,
                 MeasureWeight weight = MeasureWeight::stieltjes,
                 double tol = default_tolerance);

    static RadonMeasure point_mass(double location, double mass,
                                   MeasureWeight weight = MeasureWeight::stieltjes);
    static RadonMeasure from_density(Density d,
                                     MeasureWeight weight = MeasureWeight::stieltjes,
                                     double tol = default_tolerance);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<Density>& density() const { return density_; }
    MeasureWeight weight() const { return weight_; }

    // weighted total mass, cached from the construction-time check
    double admissibility_value() const { return admissibility_; }

    bool is_zero() const { return atoms_.empty() && !density_; }

  private:
    std::vector<Atom> atoms_;
    std::optional<Density> density_;
    MeasureWeight weight_ = MeasureWeight::stieltjes;
    double admissibility_ = 0.0;
};

AdmissibilityReport check_admissible(const RadonMeasure& mu,
                                     double tol = default_tolerance);

// integral of k d mu over the whole half line.  Atom contributions are summed
// in location order; the density part runs through adaptive quadrature with
// hints combined from both endpoint declarations.
QuadResult integrate_kernel(const RadonMeasure& mu, const Kernel& k,
                            double tol = default_tolerance);

// Convenience for bounded kernels against atomic or compactly supported
// measures (no decay information is attached).
QuadResult integrate_kernel(const RadonMeasure& mu, const Integrand& bounded,
                            double tol = default_tolerance);

// integral of k d mu over the window (lo, hi]: atoms strictly above lo and
// at most hi contribute; the density is clipped to the window.
QuadResult integrate_kernel_window(const RadonMeasure& mu, const Kernel& k,
                                   double lo, double hi,
                                   double tol = default_tolerance);

// Named density registry (the serializable ones):
//   "power" {e} or {e, scale}   scale * s^-e, singularity e, decay e
//   "stieltjes-log" {}          1/(1+s)
//   "lebesgue-window" {a, b}    1 on [a, b] (b may be infinite)
Density make_density(const std::string& name,
                     const std::vector<double>& params = {});

} // namespace ergodelab
