// root_finding.hpp: bracketed bisection and the F_n critical couplings

#pragma once

#include "jcthermo/negativity.hpp"

#include <cmath>
#include <stdexcept>

namespace jcthermo {

// Root of f on [lo, hi] given a sign change, to |hi - lo| <= tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
    if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("bisect: tol must be > 0");
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw std::invalid_argument("bisect: no sign change on the bracket");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// g_rc^n: the coupling where F_n changes sign. F_n is decreasing in g_r,
// positive at 0 and negative for large g_r.
inline double critical_coupling(long long n, double tol = 1e-12) {
    if (n < 0) throw std::invalid_argument("critical_coupling: n must be >= 0");
    double hi = 1.0;
    while (f_condition(n, hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("critical_coupling: no sign change found");
    }
    double lo = hi / 2.0;
    while (lo > 1e-300 && f_condition(n, lo) < 0.0) lo /= 2.0;
    return bisect([n](double g) { return f_condition(n, g); }, lo, hi, tol);
}

}  // namespace jcthermo
