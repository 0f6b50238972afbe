#include "steady.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace stcl::steady {

namespace {

// Dense LU with partial pivoting; returns false on a vanishing pivot.
bool lu_solve(std::vector<double> A, std::vector<double>& x, int n) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double scale = 0.0;
    for (double v : A) scale = std::max(scale, std::abs(v));
    const double tiny = scale * 1e-14 * n;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(A[static_cast<size_t>(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(A[static_cast<size_t>(r) * n + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= tiny) return false;
        if (piv != k) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<size_t>(k) * n + c], A[static_cast<size_t>(piv) * n + c]);
            std::swap(x[static_cast<size_t>(k)], x[static_cast<size_t>(piv)]);
        }
        for (int r = k + 1; r < n; ++r) {
            const double fac = A[static_cast<size_t>(r) * n + k] / A[static_cast<size_t>(k) * n + k];
            A[static_cast<size_t>(r) * n + k] = 0.0;
            for (int c = k + 1; c < n; ++c)
                A[static_cast<size_t>(r) * n + c] -= fac * A[static_cast<size_t>(k) * n + c];
            x[static_cast<size_t>(r)] -= fac * x[static_cast<size_t>(k)];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = x[static_cast<size_t>(k)];
        for (int c = k + 1; c < n; ++c) s -= A[static_cast<size_t>(k) * n + c] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(k)] = s / A[static_cast<size_t>(k) * n + k];
    }
    return true;
}

// Bordered matrix [[s2^T, 1], [1^T, 0]].
std::vector<double> bordered(const rates2::RateMatrix& s2) {
    const int n = s2.n;
    const int nb = n + 1;
    std::vector<double> A(static_cast<size_t>(nb) * nb, 0.0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) A[static_cast<size_t>(r) * nb + c] = s2.at(c, r);
        A[static_cast<size_t>(r) * nb + n] = 1.0;
        A[static_cast<size_t>(n) * nb + r] = 1.0;
    }
    return A;
}

// Connected components over nonzero off-diagonal rates, for the
// ergodicity diagnostic.
std::string component_report(const rates2::RateMatrix& s2) {
    const int n = s2.n;
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
        return a;
    };
    const double floor = s2.max_abs() * 1e-15;
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < n; ++f)
            if (i != f && std::abs(s2.at(i, f)) > floor) parent[static_cast<size_t>(find(i))] = find(f);
    std::vector<std::vector<int>> comps(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) comps[static_cast<size_t>(find(i))].push_back(i);
    std::ostringstream os;
    bool first = true;
    for (const auto& c : comps) {
        if (c.empty()) continue;
        os << (first ? "{" : ", {");
        first = false;
        for (size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
        os << "}";
    }
    return os.str();
}

} // namespace

std::vector<double> solve_order0(const rates2::RateMatrix& s2) {
    const int n = s2.n;
    const int nb = n + 1;
    std::vector<double> rhs(static_cast<size_t>(nb), 0.0);
    rhs[static_cast<size_t>(n)] = 1.0;
    if (!lu_solve(bordered(s2), rhs, nb))
        throw NumericError("steady state not unique (zero eigenvalue of s2^T is degenerate); "
                           "disconnected blocks: " + component_report(s2));
    std::vector<double> p(rhs.begin(), rhs.begin() + n);
    double sum = 0.0;
    for (double& v : p) {
        if (v < 0.0) {
            if (v < -1e-14) {
                std::ostringstream msg;
                msg << "steady-state probability " << v << " below clamp threshold";
                throw NumericError(msg.str());
            }
            v = 0.0;
        }
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> solve_order2(const rates2::RateMatrix& s2,
                                 const rates2::RateMatrix& s4,
                                 const std::vector<double>& p0) {
    const int n = s2.n;
    if (s4.n != n || static_cast<int>(p0.size()) != n)
        throw ValidationError("solve_order2: dimension mismatch");
    const int nb = n + 1;
    std::vector<double> rhs(static_cast<size_t>(nb), 0.0);
    double rhs_scale = 0.0;
    for (int m = 0; m < n; ++m) {
        double v = 0.0;
        for (int k = 0; k < n; ++k) v += s4.at(k, m) * p0[static_cast<size_t>(k)];
        rhs[static_cast<size_t>(m)] = -v;
        rhs_scale = std::max(rhs_scale, std::abs(v));
    }
    std::vector<double> x = rhs;
    if (!lu_solve(bordered(s2), x, nb))
        throw NumericError("order-2 correction not solvable; disconnected blocks: " +
                           component_report(s2));
    std::vector<double> p2(x.begin(), x.begin() + n);

    // The rhs provably lies in the range of s2^T; a residual here means a
    // rate-matrix bug upstream.
    double resid = 0.0;
    for (int m = 0; m < n; ++m) {
        double v = -rhs[static_cast<size_t>(m)];
        for (int k = 0; k < n; ++k) v += s2.at(k, m) * p2[static_cast<size_t>(k)];
        resid = std::max(resid, std::abs(v));
    }
    if (rhs_scale > 0.0 && resid > 1e-12 * rhs_scale) {
        std::ostringstream msg;
        msg << "order-2 steady-state residual " << resid << " exceeds 1e-12 * " << rhs_scale;
        throw NumericError(msg.str());
    }
    return p2;
}

} // namespace stcl::steady
