#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace rispart::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  // sum of |K15 - G7| over the final intervals
    std::size_t intervals = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// weights of the embedded 7-point Gauss rule at kNodes[1], [3], [5], [7]
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

template <class F>
Interval gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int k = 0; k < 7; ++k) {
        const double dx = h * kNodes[static_cast<std::size_t>(k)];
        const double sum = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[static_cast<std::size_t>(k)] * sum;
        if (k % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(k / 2)] * sum;
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the panels
/// defined by consecutive `breakpoints`. The interval with the largest error
/// estimate is bisected until the summed estimate drops below `abs_tol` or
/// `max_intervals` is reached.
template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, double abs_tol,
                 std::size_t max_intervals = 200000) {
    Result r;
    if (breakpoints.size() < 2) {
        r.converged = true;
        return r;
    }
    std::priority_queue<detail::Interval> heap;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto iv = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
        total += iv.value;
        error += iv.error;
        heap.push(iv);
    }
    r.evaluations = 15 * heap.size();
    while (error > abs_tol && heap.size() < max_intervals) {
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
        heap.pop();
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        r.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated cancellation from the running updates
    total = 0.0;
    error = 0.0;
    r.intervals = heap.size();
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    r.value = total;
    r.error = error;
    r.converged = error <= abs_tol;
    return r;
}

}  // namespace rispart::quad
