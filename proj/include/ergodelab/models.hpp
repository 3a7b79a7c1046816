#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergodelab/quad.hpp"
#include "ergodelab/stieltjes.hpp"

namespace ergodelab {

// Multiplication picture on L1(1, inf): (Au)(s) = u(s)/s, so the semigroup
// acts as T(t)u = e^{-t/s} u(s) and the time average picks up the weight
// w_t(s)/t with w_t(s) = s(1 - e^{-t/s}).  Everything the lab measures on
// this model reduces to weighted absolute integrals over s.
struct L1MultiplicationModel {};

// Asymptotic envelope of an element's absolute value:
// |u(s)| = O(s^{-power} log^{-log_power}(s) (log log s)^{-loglog_power})
// as s -> inf, or identically zero beyond a finite support_end.  The
// envelope supplies quadrature tail hints and settles membership questions
// that sit exactly on the borderline where partial-sum probes go blind.
struct TailEnvelope {
    double support_end = inf;
    double power = inf;
    double log_power = 0.0;
    double loglog_power = 0.0;
};

class L1Element {
  public:
    L1Element();  // the zero element
    L1Element(Integrand values, TailEnvelope tail, std::string registry_name = {},
              std::vector<double> registry_params = {});

    // defined for s >= 1
    double operator()(double s) const;

    const TailEnvelope& tail() const { return tail_; }
    bool is_zero() const { return zero_; }

    const std::string& registry_name() const { return registry_name_; }
    const std::vector<double>& registry_params() const { return registry_params_; }
    std::string label() const;

  private:
    Integrand values_;
    TailEnvelope tail_;
    bool zero_;
    std::string registry_name_;
    std::vector<double> registry_params_;
};

// "window" {a, b}: indicator of [a, b], 1 <= a < b; "power" {r}: s^{-r} with
// r > 1; "zero" {}.
L1Element make_element(const std::string& name, const std::vector<double>& params = {});

L1Element apply_semigroup(const L1MultiplicationModel&, const L1Element& u, double t);
L1Element cesaro_mean(const L1MultiplicationModel&, const L1Element& u, double t);
L1Element resolvent(const L1MultiplicationModel&, const L1Element& u, double lambda);

// Pointwise action of a scalar function of A; the multiplier is fn(1/s).
L1Element apply_function_spectral(const L1MultiplicationModel&, const ScalarFunction& fn,
                                  const L1Element& u);

// g(A)u through the resolvent representation: the multiplier is assembled
// from a + b s + integral of s/(1 + r s) d mu(r) at each point, not from a
// closed form, so it can be played against the spectral route.
L1Element stieltjes_resolvent_apply(const L1MultiplicationModel&, const StieltjesFunction& g,
                                    const L1Element& u, double tol = default_tolerance);

// f(A)u likewise: a + b/s + integral of 1/(1 + r s) d mu(r).
L1Element cbf_resolvent_apply(const L1MultiplicationModel&, const CompleteBernsteinFunction& f,
                              const L1Element& u, double tol = default_tolerance);

double l1_norm(const L1Element& u, double tol = default_tolerance);

// N_t(u) = (1/t) integral_1^t s|u(s)| ds + integral_t^inf |u(s)| ds, t >= 1.
// Equivalent to the time-average norm up to fixed constants.
double Nt_norm(const L1Element& u, double t, double tol = default_tolerance);

double cesaro_norm(const L1MultiplicationModel&, const L1Element& u, double t,
                   double tol = default_tolerance);

struct NormSnapshot {
    double t = 0.0;
    double cesaro_norm = 0.0;
    double nt_norm = 0.0;
};

NormSnapshot norm_snapshot(const L1MultiplicationModel&, const L1Element& u, double t,
                           double tol = default_tolerance);

enum class Membership { member, not_member, inconclusive };

const char* to_string(Membership verdict);

struct MembershipReport {
    Membership verdict = Membership::inconclusive;
    // ||u|| plus the domain integral, filled for members
    double graph_norm = 0.0;
    std::vector<double> schedule;  // truncation points probed
    std::vector<double> partials;  // integral of g(1/s)|u(s)| up to each point
    Verdict series_verdict = Verdict::inconclusive;
    // true when the tail envelope settled a borderline the series cannot see
    bool borderline_certificate = false;
};

// Decides u in dom(g(A)), i.e. finiteness of integral_1^inf g(1/s)|u(s)| ds,
// by classifying partial integrals along a doubly exponential truncation
// schedule.  Exact log-borderline tails are settled by the envelope instead;
// the report says which route produced the verdict.
MembershipReport membership_diagnostic(const L1MultiplicationModel&,
                                       const StieltjesFunction& g, const L1Element& u,
                                       double tol = default_tolerance);

// Same decision against a general decreasing weight carrying its own growth
// metadata (a composed function, for instance); the domain integrand is
// weight(1/s)|u(s)|.
MembershipReport membership_diagnostic(const L1MultiplicationModel&,
                                       const ScalarFunction& weight, const L1Element& u,
                                       double tol = default_tolerance);

// Diagonal model on a finite spectrum: every operation acts entrywise on the
// eigenvalue list.  Norms are sup norms.
class MatrixModel {
  public:
    explicit MatrixModel(std::vector<double> eigenvalues);
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    size_t dimension() const { return eigenvalues_.size(); }

  private:
    std::vector<double> eigenvalues_;
};

using Vector = std::vector<double>;

double sup_norm(const Vector& x);

Vector apply_semigroup(const MatrixModel&, const Vector& x, double t);
Vector cesaro_mean(const MatrixModel&, const Vector& x, double t);
Vector resolvent(const MatrixModel&, const Vector& x, double lambda);
Vector apply_function_spectral(const MatrixModel&, const Integrand& scalar, const Vector& x);

// f(A)x from the Lévy triple: a x + b A x + integral of (x - T(s)x) d nu(s).
Vector phillips_apply(const MatrixModel&, const LevyTriple& rep, const Vector& x,
                      double tol = default_tolerance);

// f(A)x from the Stieltjes representation of f: a x + b A x +
// integral of A (s + A)^{-1} x d mu(s).
Vector cbf_resolvent_apply(const MatrixModel&, const CompleteBernsteinFunction& f,
                           const Vector& x, double tol = default_tolerance);

// g(A)x = a x + b A^{-1} x + integral of (s + A)^{-1} x d mu(s).
Vector stieltjes_resolvent_apply(const MatrixModel&, const StieltjesFunction& g,
                                 const Vector& x, double tol = default_tolerance);

}  // namespace ergodelab
