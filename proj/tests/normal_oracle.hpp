#pragma once

// Test-only oracle: Phi(x) by composite 20-point Gauss-Legendre quadrature of
// the standard normal density in long double. Independent of the library's
// erfc-based implementation; absolute error far below 1e-15 on [-8, 8].

#include <cmath>
#include <cstdlib>

namespace oracle {

inline long double normal_pdf_l(long double x) {
    const long double inv_sqrt_2pi = 0.3989422804014326779399460599343818685L;
    return inv_sqrt_2pi * std::exp(-0.5L * x * x);
}

// 20-point Gauss-Legendre nodes (positive half) and weights on [-1, 1]
inline constexpr long double kGlNode[10] = {
    0.0765265211334973337546404L, 0.2277858511416450780804962L,
    0.3737060887154195606725482L, 0.5108670019508270980043641L,
    0.6360536807265150254528367L, 0.7463319064601507926143051L,
    0.8391169718222188233945291L, 0.9122344282513259058677524L,
    0.9639719272779137912676661L, 0.9931285991850949247861224L};
inline constexpr long double kGlWeight[10] = {
    0.1527533871307258506980843L, 0.1491729864726037467878287L,
    0.1420961093183820513292983L, 0.1316886384491766268984945L,
    0.1181945319615184173123774L, 0.1019301198172404350367501L,
    0.0832767415767047487247581L, 0.0626720483341090635695065L,
    0.0406014298003869413310400L, 0.0176140071391521183118620L};

inline long double integrate_pdf(long double lo, long double hi) {
    long double half = 0.5L * (hi - lo);
    long double mid = 0.5L * (hi + lo);
    long double sum = 0.0L;
    for (int i = 0; i < 10; ++i) {
        sum += kGlWeight[i] *
               (normal_pdf_l(mid - half * kGlNode[i]) + normal_pdf_l(mid + half * kGlNode[i]));
    }
    return sum * half;
}

// Phi(x) = 1/2 +- integral of the (symmetric) density over [0, |x|],
// in panels of width <= 1/4
inline double normal_cdf_oracle(double x) {
    long double len = std::abs((long double)x);
    int panels = int(len * 4) + 1;
    long double step = len / panels;
    long double integral = 0.0L;
    for (int i = 0; i < panels; ++i)
        integral += integrate_pdf(step * i, step * (i + 1));
    return double(x >= 0 ? 0.5L + integral : 0.5L - integral);
}

} // namespace oracle
