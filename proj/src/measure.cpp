#include "ergodelab/measure.hpp"

#include <algorithm>
#include <cmath>

#include "ergodelab/errors.hpp"

namespace ergodelab {

namespace {

void validate_atoms(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.location) || a.location <= 0.0)
            throw PreconditionFailed("atom locations must be positive and finite");
        if (!std::isfinite(a.mass) || a.mass <= 0.0)
            throw PreconditionFailed("atom masses must be positive and finite");
    }
}

Kernel weight_kernel(MeasureWeight w) {
    if (w == MeasureWeight::stieltjes)
        return {[](double s) { return 1.0 / (1.0 + s); }, 0.0, 1.0};
    return {[](double s) { return s / (1.0 + s); }, -1.0, 0.0};
}

double sorted_atom_sum(std::vector<Atom> atoms, const Kernel& k) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
        return x.location < y.location ||
               (x.location == y.location && x.mass < y.mass);
    });
    double total = 0.0;
    for (const Atom& a : atoms)
        total += a.mass * k.fn(a.location);
    return total;
}

// density-against-kernel quadrature over an explicit window, hints combined
// from both endpoint declarations
QuadResult density_integral(const Density& d, const Kernel& k, double lo,
                            double hi, double tol) {
    auto f = [&d, &k](double s) { return d.fn(s) * k.fn(s); };
    EndpointHint hint = EndpointHint::none();
    const double p = d.singularity + k.singularity;
    if (lo == 0.0 && p > 0.0)
        hint.singularity = p;
    if (!std::isfinite(hi)) {
        if (!d.decay)
            throw InvalidHint(
                "density needs a decay exponent for an unbounded window");
        hint.tail = *d.decay + k.decay - 1.0;
    }
    return integrate(f, {lo, hi}, hint, tol);
}

} // namespace

AdmissibilityReport check_admissible(const std::vector<Atom>& atoms,
                                     const std::optional<Density>& density,
                                     MeasureWeight weight, double tol) {
    validate_atoms(atoms);
    const Kernel w = weight_kernel(weight);
    double total = sorted_atom_sum(atoms, w);
    if (!density)
        return {true, total};

    const Density& d = *density;
    double lo = 0.0;
    double hi = inf;
    if (d.support) {
        lo = std::max(0.0, d.support->lower);
        hi = d.support->upper;
    }
    if (!(lo < hi))
        return {true, total};

    const double p = lo == 0.0 ? d.singularity + w.singularity : 0.0;
    if (p >= 1.0)
        return {false, inf};
    if (std::isfinite(hi))
        return {true, total + density_integral(d, w, lo, hi, tol).value};
    if (d.decay) {
        if (*d.decay + w.decay - 1.0 <= 0.0)
            return {false, inf};
        return {true, total + density_integral(d, w, lo, hi, tol).value};
    }

    // No decay information: watch the partial integrals over widening
    // windows (10^-k, 10^k) and classify the trend.
    std::vector<double> partials;
    for (int k = 0; k <= 6; ++k) {
        const double cap = std::pow(10.0, k);
        const double a = std::max(lo, 1.0 / cap);
        if (!(a < cap)) {
            partials.push_back(0.0);
            continue;
        }
        auto f = [&d, &w](double s) { return d.fn(s) * w.fn(s); };
        partials.push_back(integrate(f, {a, cap}, EndpointHint::none(), tol).value);
    }
    const SequenceProbe probe = classify_values(partials);
    if (probe.verdict == Verdict::converges)
        return {true, total + *probe.limit};
    if (probe.verdict == Verdict::diverges)
        return {false, inf};
    throw Inconclusive("admissibility unresolved without a decay exponent");
}

RadonMeasure::RadonMeasure(std::vector<Atom> atoms,
                           std::optional<Density> density,
                           MeasureWeight weight, double tol)
    : atoms_(std::move(atoms)), density_(std::move(density)), weight_(weight) {
    const AdmissibilityReport rep =
        check_admissible(atoms_, density_, weight_, tol);
    if (!rep.finite)
        throw AdmissibilityViolation("measure fails its weighted finiteness check");
    admissibility_ = rep.value;
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) {
        return x.location < y.location ||
               (x.location == y.location && x.mass < y.mass);
    });
}

RadonMeasure RadonMeasure::point_mass(double location, double mass,
                                      MeasureWeight weight) {
    return RadonMeasure({{location, mass}}, std::nullopt, weight);
}

RadonMeasure RadonMeasure::from_density(Density d, MeasureWeight weight,
                                        double tol) {
    return RadonMeasure({}, std::move(d), weight, tol);
}

AdmissibilityReport check_admissible(const RadonMeasure& mu, double tol) {
    return check_admissible(mu.atoms(), mu.density(), mu.weight(), tol);
}

QuadResult integrate_kernel_window(const RadonMeasure& mu, const Kernel& k,
                                   double lo, double hi, double tol) {
    if (!(lo >= 0.0) || std::isnan(hi) || hi < lo)
        throw PreconditionFailed("window must satisfy 0 <= lo <= hi");
    QuadResult out;
    for (const Atom& a : mu.atoms())
        if (a.location > lo && a.location <= hi)
            out.value += a.mass * k.fn(a.location);
    if (!std::isfinite(out.value))
        throw PreconditionFailed("kernel must be finite at atom locations");
    if (mu.density()) {
        const Density& d = *mu.density();
        double a = lo;
        double b = hi;
        if (d.support) {
            a = std::max(a, d.support->lower);
            b = std::min(b, d.support->upper);
        }
        if (a < b) {
            const QuadResult qr = density_integral(d, k, a, b, tol);
            out.value += qr.value;
            out.abs_error += qr.abs_error;
            out.subdivisions += qr.subdivisions;
        }
    }
    return out;
}

QuadResult integrate_kernel(const RadonMeasure& mu, const Kernel& k,
                            double tol) {
    return integrate_kernel_window(mu, k, 0.0, inf, tol);
}

QuadResult integrate_kernel(const RadonMeasure& mu, const Integrand& bounded,
                            double tol) {
    return integrate_kernel(mu, Kernel{bounded, 0.0, 0.0}, tol);
}

Density make_density(const std::string& name,
                     const std::vector<double>& params) {
    if (name == "power") {
        if (params.empty() || params.size() > 2)
            throw PreconditionFailed("power density takes {exponent} or {exponent, scale}");
        const double e = params[0];
        const double scale = params.size() == 2 ? params[1] : 1.0;
        if (!std::isfinite(e) || !(scale > 0.0) || !std::isfinite(scale))
            throw PreconditionFailed("power density parameters out of range");
        Density d;
        d.fn = [e, scale](double s) { return scale * std::pow(s, -e); };
        d.singularity = e;
        d.decay = e;
        d.registry_name = "power";
        d.registry_params = {e, scale};
        return d;
    }
    if (name == "stieltjes-log") {
        if (!params.empty())
            throw PreconditionFailed("stieltjes-log density takes no parameters");
        Density d;
        d.fn = [](double s) { return 1.0 / (1.0 + s); };
        d.singularity = 0.0;
        d.decay = 1.0;
        d.registry_name = "stieltjes-log";
        return d;
    }
    if (name == "lebesgue-window") {
        if (params.size() != 2)
            throw PreconditionFailed("lebesgue-window density takes {lower, upper}");
        const double a = params[0];
        const double b = params[1];
        if (!(a >= 0.0) || !(b > a))
            throw PreconditionFailed("lebesgue-window needs 0 <= lower < upper");
        Density d;
        d.fn = [](double) { return 1.0; };
        d.singularity = 0.0;
        d.decay = 0.0;
        d.support = Interval{a, b};
        d.registry_name = "lebesgue-window";
        d.registry_params = {a, b};
        return d;
    }
    throw PreconditionFailed("unknown density family: " + name);
}

} // namespace ergodelab
