#include "rheston/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rheston {

namespace {

Quadrature compute(std::size_t n) {
    if (n < 1) throw std::invalid_argument("quadrature: order must be >= 1");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) /
                                  double(k);
                p0 = p1;
                p1 = p2;
            }
            pp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

}  // namespace

const Quadrature& gauss_legendre(std::size_t n) {
    static std::map<std::size_t, Quadrature> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
    return it->second;
}

Quadrature gauss_legendre(std::size_t n, double a, double b) {
    const Quadrature& base = gauss_legendre(n);
    Quadrature q = base;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        q.nodes[i] = mid + half * base.nodes[i];
        q.weights[i] = half * base.weights[i];
    }
    return q;
}

}  // namespace rheston
