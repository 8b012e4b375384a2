// quadrature.cpp — adaptive Gauss–Kronrod driver
#include "qbo/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace qbo::quad {

const KronrodRule& kronrod15() {
    static const KronrodRule rule = [] {
        KronrodRule r;
        const auto& xa = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
        const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
        const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
        // boost stores the nonnegative half; even indices are the Gauss nodes
        r.nodes[7] = 0.0;
        r.kronrod[7] = wk[0];
        r.gauss[7] = wg[0];
        for (std::size_t i = 1; i < xa.size(); ++i) {
            r.nodes[7 - i] = -xa[i];
            r.nodes[7 + i] = xa[i];
            r.kronrod[7 - i] = r.kronrod[7 + i] = wk[i];
            const double g = (i % 2 == 0) ? wg[i / 2] : 0.0;
            r.gauss[7 - i] = r.gauss[7 + i] = g;
        }
        return r;
    }();
    return rule;
}

namespace {

struct Piece {
    double a, b, value, error, l1;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece apply_rule(const std::function<double(double)>& f, double a, double b) {
    const auto& r = kronrod15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, 15> fv{};
    double k = 0.0, g = 0.0, kabs = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
        fv[i] = f(c + h * r.nodes[i]);
        k += r.kronrod[i] * fv[i];
        g += r.gauss[i] * fv[i];
        kabs += r.kronrod[i] * std::abs(fv[i]);
    }
    const double mean = 0.5 * k;
    double asc = 0.0;
    for (std::size_t i = 0; i < 15; ++i) asc += r.kronrod[i] * std::abs(fv[i] - mean);
    k *= h; g *= h; kabs *= std::abs(h); asc *= std::abs(h);

    // QUADPACK error heuristic
    double err = std::abs(k - g);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (kabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * kabs, err);
    return {a, b, k, err, kabs};
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol, std::size_t initial_panels) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("integrate: infinite bounds");
    Result res;
    if (a == b) return res;
    initial_panels = std::max<std::size_t>(1, initial_panels);

    std::priority_queue<Piece> heap;
    double total = 0.0, total_err = 0.0, total_l1 = 0.0;
    const double w = (b - a) / static_cast<double>(initial_panels);
    for (std::size_t i = 0; i < initial_panels; ++i) {
        const double lo = a + w * static_cast<double>(i);
        const double hi = (i + 1 == initial_panels) ? b : lo + w;
        Piece p = apply_rule(f, lo, hi);
        total += p.value;
        total_err += p.error;
        total_l1 += p.l1;
        heap.push(p);
    }
    res.evaluations = 15 * initial_panels;

    // the roundoff floor matters for strongly cancelling oscillatory integrands
    constexpr double floor_factor = 50.0 * std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({tol.abs, tol.rel * std::abs(total), floor_factor * total_l1});
    };
    while (total_err > target()) {
        if (heap.size() >= tol.max_intervals) {
            std::ostringstream os;
            os << "quadrature did not converge: estimate " << total << " +/- " << total_err;
            throw QuadratureError(os.str(), total, total_err);
        }
        Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval cannot be split further; accept what we have
            heap.push(worst);
            break;
        }
        Piece l = apply_rule(f, worst.a, mid);
        Piece r = apply_rule(f, mid, worst.b);
        res.evaluations += 30;
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        total_l1 += l.l1 + r.l1 - worst.l1;
        heap.push(l);
        heap.push(r);
    }
    if (total_err > target()) {
        std::ostringstream os;
        os << "quadrature stalled: estimate " << total << " +/- " << total_err;
        throw QuadratureError(os.str(), total, total_err);
    }
    // resum to shed accumulated drift from incremental updates
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = sum;
    res.error = err;
    return res;
}

} // namespace qbo::quad
