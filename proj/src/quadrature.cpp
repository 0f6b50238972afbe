#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "errors.hpp"

namespace stcl::quadrature {

namespace {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK dqk15).
constexpr double XGK[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
constexpr double WGK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Interval {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<cplx(double)>& f, double a, double b, Stats* stats) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx resg = WG[3] * fc;
    cplx resk = WGK[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double absc = half * XGK[j];
        const cplx f1 = f(center - absc);
        const cplx f2 = f(center + absc);
        resk += WGK[j] * (f1 + f2);
        if (j % 2 == 1) resg += WG[j / 2] * (f1 + f2);
    }
    if (stats) stats->evaluations += 15;
    Interval r;
    r.a = a;
    r.b = b;
    r.value = resk * half;
    r.error = std::abs(resk - resg) * half;
    // QUADPACK-style sharpening of the raw |K - G| estimate.
    r.error = std::pow(200.0 * r.error, 1.5) < r.error ? std::pow(200.0 * r.error, 1.5)
                                                       : r.error;
    return r;
}

} // namespace

cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const std::vector<double>& breakpoints, const Options& opts,
               Stats* stats) {
    if (!(b > a)) throw ValidationError("integrate: need b > a");

    std::vector<double> pts;
    pts.push_back(a);
    pts.push_back(b);
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<Interval> queue;
    cplx total = 0.0;
    double err = 0.0;
    double mass = 0.0;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        Interval iv = gk15(f, pts[k], pts[k + 1], stats);
        total += iv.value;
        err += iv.error;
        mass += std::abs(iv.value);
        queue.push(iv);
    }

    auto target = [&]() {
        return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), opts.mass_rel * mass});
    };

    int n = static_cast<int>(queue.size());
    while (err > target()) {
        if (queue.empty()) break;
        if (n >= opts.max_intervals) {
            Interval worst = queue.top();
            std::ostringstream msg;
            msg << "quadrature did not converge: error " << err << " > target "
                << target() << " after " << n << " intervals; worst interval ["
                << worst.a << ", " << worst.b << "] err " << worst.error;
            throw NumericError(msg.str());
        }
        Interval worst = queue.top();
        queue.pop();
        total -= worst.value;
        err -= worst.error;
        mass -= std::abs(worst.value);
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at rounding resolution; accept its estimate.
            total += worst.value;
            mass += std::abs(worst.value);
            continue;
        }
        Interval left = gk15(f, worst.a, mid, stats);
        Interval right = gk15(f, mid, worst.b, stats);
        total += left.value + right.value;
        err += left.error + right.error;
        mass += std::abs(left.value) + std::abs(right.value);
        queue.push(left);
        queue.push(right);
        ++n;
    }
    if (stats) {
        stats->intervals = n;
        stats->error_estimate = err;
    }
    return total;
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const Options& opts, Stats* stats) {
    return integrate(f, a, b, {}, opts, stats);
}

void seed_feature(std::vector<double>& out, double center, double width) {
    static constexpr double SCALES[] = {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 8192.0};
    out.push_back(center);
    for (double s : SCALES) {
        out.push_back(center - s * width);
        out.push_back(center + s * width);
    }
}

} // namespace stcl::quadrature
