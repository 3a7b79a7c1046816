#include "ergodelab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ergodelab/errors.hpp"

namespace ergodelab {

namespace {

// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
// Nodes are symmetric; the table stores the positive half, centre last.
constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEval {
    double value = 0.0;
    double err = 0.0;
};

// One Kronrod panel.  A nonfinite sample poisons the panel with an infinite
// error estimate so the refinement loop is forced to shrink it.
PanelEval gk15(const Integrand& f, double x0, double x1) {
    const double centre = 0.5 * (x0 + x1);
    const double half = 0.5 * (x1 - x0);

    double fv1[7];
    double fv2[7];
    const double fc = f(centre);
    bool finite = std::isfinite(fc);

    double resg = gauss_weights[3] * fc;
    double resk = kronrod_weights[7] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double absc = half * kronrod_nodes[j];
        fv1[j] = f(centre - absc);
        fv2[j] = f(centre + absc);
        finite = finite && std::isfinite(fv1[j]) && std::isfinite(fv2[j]);
        const double fsum = fv1[j] + fv2[j];
        resk += kronrod_weights[j] * fsum;
        resabs += kronrod_weights[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1)
            resg += gauss_weights[j / 2] * fsum;
    }

    const double reskh = 0.5 * resk;
    double resasc = kronrod_weights[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kronrod_weights[j] *
                  (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    PanelEval out;
    out.value = resk * half;
    resabs *= half;
    resasc *= half;
    double abserr = std::abs((resk - resg) * half);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        abserr = std::max(eps50 * resabs, abserr);
    out.err = abserr;
    // a nonfinite sample, or an overflow in the weighted sums, poisons the
    // panel: zero value, infinite error, so refinement must shrink it
    if (!finite || !std::isfinite(out.value) || !std::isfinite(out.err)) {
        out.value = 0.0;
        out.err = inf;
    }
    return out;
}

struct Piece {
    Integrand g;
    double lo = 0.0;
    double hi = 0.0;
};

// Interior breakpoints seeding a wide piece with dyadic panels from the left
// edge, so mass concentrated near the lower end cannot hide inside one huge
// panel whose samples all miss it.  Pieces no wider than max(1, |lo|) stay
// a single panel.
std::vector<double> seed_breaks(double lo, double hi) {
    std::vector<double> cuts;
    const double w = hi - lo;
    const double scale = std::max(1.0, std::abs(lo));
    int depth = 0;
    double piece = w;
    while (piece > scale && depth < 48) {
        piece *= 0.5;
        ++depth;
    }
    for (int j = depth; j >= 1; --j)
        cuts.push_back(lo + w * std::ldexp(1.0, -j));
    return cuts;
}

// Removes an integrable power blow-up (s - a)^{-p} at the lower endpoint by
// s = a + tau^(1/(1-p)); the transformed integrand is bounded near tau = 0.
Piece desingularized(Integrand f, double a, double b, double p) {
    if (p >= 1.0)
        throw InvalidHint("endpoint exponent must be < 1");
    if (p <= 0.0)
        return Piece{std::move(f), a, b};
    const double expo = 1.0 / (1.0 - p);
    const double hi = std::pow(b - a, 1.0 - p);
    auto g = [f = std::move(f), a, p, expo](double tau) {
        const double s = a + std::pow(tau, expo);
        return f(s) * expo * std::pow(tau, p * expo);
    };
    return Piece{std::move(g), 0.0, hi};
}

// Folds [c, inf) onto (0, 1/c] by s = 1/w; decay s^{-1-q} becomes a lower
// endpoint exponent 1-q, removed by the same substitution when q < 1.
Piece tail_piece(const Integrand& f, double c, double q) {
    if (q <= 0.0)
        throw InvalidHint("tail decay must be > 0");
    auto g = [f](double w) {
        const double s = 1.0 / w;
        return f(s) * s * s;
    };
    return desingularized(std::move(g), 0.0, 1.0 / c, std::max(1.0 - q, 0.0));
}

} // namespace

QuadResult integrate(const Integrand& f, Interval iv, EndpointHint hint,
                     double tol) {
    if (!(tol > 0.0))
        throw PreconditionFailed("tolerance must be positive");
    if (!std::isfinite(iv.lower))
        throw PreconditionFailed("lower limit must be finite");
    if (std::isnan(iv.upper) || iv.upper < iv.lower)
        throw PreconditionFailed("upper limit must be >= lower limit");
    if (iv.upper == iv.lower)
        return {};

    const double p = hint.singularity.value_or(0.0);
    if (p >= 1.0)
        throw InvalidHint("endpoint exponent must be < 1");

    std::vector<Piece> pieces;
    if (std::isfinite(iv.upper)) {
        pieces.push_back(desingularized(f, iv.lower, iv.upper, p));
    } else {
        if (!hint.tail)
            throw InvalidHint("infinite upper limit needs a tail hint");
        const double q = *hint.tail;
        if (q <= 0.0)
            throw InvalidHint("tail decay must be > 0");
        const double c = std::max(1.0, 2.0 * iv.lower);
        pieces.push_back(desingularized(f, iv.lower, c, p));
        pieces.push_back(tail_piece(f, c, q));
    }

    struct Panel {
        int piece;
        double x0, x1;
        double value, err;
    };
    std::vector<Panel> panels;
    int evals = 0;
    auto eval_panel = [&](int pc, double x0, double x1) {
        const PanelEval e = gk15(pieces[static_cast<size_t>(pc)].g, x0, x1);
        ++evals;
        return Panel{pc, x0, x1, e.value, e.err};
    };
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        const Piece& pc = pieces[static_cast<size_t>(i)];
        double left = pc.lo;
        for (double cut : seed_breaks(pc.lo, pc.hi)) {
            panels.push_back(eval_panel(i, left, cut));
            left = cut;
        }
        panels.push_back(eval_panel(i, left, pc.hi));
    }

    int subdivisions = 0;
    for (;;) {
        double total = 0.0;
        double err = 0.0;
        for (const Panel& pn : panels) {
            total += pn.value;
            err += pn.err;
        }
        if (std::isfinite(total) && err <= std::max(tol * std::abs(total), tol))
            return {total, err, subdivisions};

        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i) {
            const Panel& a = panels[i];
            const Panel& b = panels[worst];
            const bool tie = a.err == b.err &&
                             (a.piece < b.piece ||
                              (a.piece == b.piece && a.x0 < b.x0));
            if (a.err > b.err || tie)
                worst = i;
        }
        const Panel w = panels[worst];
        const double mid = 0.5 * (w.x0 + w.x1);
        if (!(mid > w.x0 && mid < w.x1))
            throw NonConvergent("panel too narrow to split further");
        if (evals + 2 > panel_budget)
            throw NonConvergent("panel budget exhausted");
        panels[worst] = eval_panel(w.piece, w.x0, mid);
        panels.push_back(eval_panel(w.piece, mid, w.x1));
        ++subdivisions;
    }
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::converges:
        return "Converges";
    case Verdict::diverges:
        return "Diverges";
    default:
        return "Inconclusive";
    }
}

SequenceProbe classify_values(std::span<const double> values,
                              ClassifyOptions opt) {
    SequenceProbe out;
    out.values.assign(values.begin(), values.end());
    const int n = static_cast<int>(values.size());
    for (int i = 0; i + 1 < n; ++i)
        out.increments.push_back(values[static_cast<size_t>(i + 1)] -
                                 values[static_cast<size_t>(i)]);
    const int m = static_cast<int>(out.increments.size());
    if (m < opt.confirmations)
        return out;

    // The noise floor is local to each step: evaluation error scales with
    // the values around the step, not with the largest value in a sequence
    // that may span many orders of magnitude.
    auto step_floor = [&](int k) {
        const double a = std::abs(values[static_cast<size_t>(k)]);
        const double b = std::abs(values[static_cast<size_t>(k + 1)]);
        return opt.floor_scale * std::max({1.0, a, b});
    };

    bool settled = true;
    for (int k = m - opt.confirmations; k < m; ++k)
        settled = settled &&
                  std::abs(out.increments[static_cast<size_t>(k)]) <= step_floor(k);
    if (settled) {
        out.verdict = Verdict::converges;
        out.limit = values.back();
        return out;
    }

    if (m < opt.confirmations + 1)
        return out;
    bool geometric = true;
    bool heavy = true;
    for (int k = m - opt.confirmations; k < m; ++k) {
        const double prev = std::abs(out.increments[static_cast<size_t>(k - 1)]);
        const double cur = std::abs(out.increments[static_cast<size_t>(k)]);
        const double rho = prev <= step_floor(k - 1)
                               ? (cur <= step_floor(k) ? 0.0 : inf)
                               : cur / prev;
        geometric = geometric && rho <= opt.converge_ratio;
        heavy = heavy && rho >= opt.diverge_ratio;
    }
    if (geometric) {
        out.verdict = Verdict::converges;
        const double dprev = out.increments[static_cast<size_t>(m - 2)];
        const double dlast = out.increments[static_cast<size_t>(m - 1)];
        double lim = values.back();
        if (std::abs(dprev) > step_floor(m - 2)) {
            const double rho = dlast / dprev;
            if (std::abs(rho) < 1.0)
                lim += dlast * rho / (1.0 - rho);
        }
        out.limit = lim;
        return out;
    }
    if (heavy &&
        std::abs(out.increments[static_cast<size_t>(m - 1)]) > step_floor(m - 1))
        out.verdict = Verdict::diverges;
    return out;
}

SequenceProbe classify_increments(std::span<const double> increments,
                                  ClassifyOptions opt) {
    std::vector<double> partials;
    partials.reserve(increments.size() + 1);
    partials.push_back(0.0);
    double s = 0.0;
    for (double d : increments) {
        s += d;
        partials.push_back(s);
    }
    return classify_values(partials, opt);
}

SequenceProbe probe_limit(const std::function<double(double)>& fn,
                          std::span<const double> schedule,
                          ClassifyOptions opt) {
    if (schedule.size() < 6)
        throw PreconditionFailed("limit probe needs at least 6 schedule points");
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0))
            throw PreconditionFailed("schedule points must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw PreconditionFailed("schedule must decrease strictly");
    }
    std::vector<double> vals;
    vals.reserve(schedule.size());
    for (double d : schedule)
        vals.push_back(fn(d));
    return classify_values(vals, opt);
}

std::vector<double> geometric_schedule(double first, double ratio, int count) {
    if (!(first > 0.0) || !(ratio > 0.0) || count < 1)
        throw PreconditionFailed("geometric schedule needs positive seed, ratio, count");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    double v = first;
    for (int i = 0; i < count; ++i) {
        out.push_back(v);
        v *= ratio;
    }
    return out;
}

SequenceProbe classify_slow_tail(const Integrand& log_integrand,
                                 double log_start, int blocks, double tol) {
    if (blocks < 8)
        throw PreconditionFailed("slow-tail certificate needs at least 8 blocks");
    if (!(tol > 0.0))
        throw PreconditionFailed("tolerance must be positive");
    std::vector<double> partials;
    partials.reserve(static_cast<size_t>(blocks));
    double sum = 0.0;
    double lo = std::max(log_start, 1.0);
    for (int j = 0; j < blocks; ++j) {
        const double hi = 2.0 * lo;
        sum += integrate(log_integrand, {lo, hi}, {}, tol).value;
        partials.push_back(sum);
        lo = hi;
    }
    ClassifyOptions opt;
    // Block quadratures carry absolute error up to tol each; the summed noise
    // must stay under the settle floor or a converged tail reads as jitter.
    opt.floor_scale = std::max(opt.floor_scale, 100.0 * tol);
    return classify_values(partials, opt);
}

} // namespace ergodelab
