// poly2.cpp — bivariate complex polynomial arithmetic
#include "qbo/poly2.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbo::state {

Poly2 Poly2::linear(cplx alpha, cplx beta) {
    Poly2 p;
    p.add(1, 0, alpha);
    p.add(0, 1, beta);
    return p;
}

void Poly2::grow(int degree) {
    const int old = static_cast<int>(c_.size());
    if (degree + 1 <= old) return;
    c_.resize(degree + 1);
    for (int a = 0; a <= degree; ++a) c_[a].resize(degree + 1 - a, cplx{});
}

cplx Poly2::coeff(int a, int b) const {
    if (a < 0 || b < 0 || a + b > degree()) return {};
    return c_[a][b];
}

void Poly2::add(int a, int b, cplx v) {
    if (a < 0 || b < 0) throw std::invalid_argument("Poly2: negative power");
    grow(a + b);
    c_[a][b] += v;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (int a = 0; a <= o.degree(); ++a)
        for (int b = 0; a + b <= o.degree(); ++b)
            if (o.c_[a][b] != cplx{}) r.add(a, b, o.c_[a][b]);
    return r;
}

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r;
    if (degree() < 0 || o.degree() < 0) return r;
    r.add(degree() + o.degree(), 0, cplx{});
    for (int a = 0; a <= degree(); ++a)
        for (int b = 0; a + b <= degree(); ++b) {
            const cplx x = c_[a][b];
            if (x == cplx{}) continue;
            for (int c = 0; c <= o.degree(); ++c)
                for (int d = 0; c + d <= o.degree(); ++d) r.c_[a + c][b + d] += x * o.c_[c][d];
        }
    return r;
}

Poly2 Poly2::operator*(cplx s) const {
    Poly2 r = *this;
    for (auto& row : r.c_)
        for (auto& v : row) v *= s;
    return r;
}

Poly2 Poly2::pow(int n) const {
    Poly2 r(cplx{1.0, 0.0});
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
}

Poly2 Poly2::substitute(cplx l00, cplx l01, cplx l10, cplx l11) const {
    const Poly2 kr = linear(l00, l01), kp = linear(l10, l11);
    Poly2 r;
    std::vector<Poly2> pr{Poly2(cplx{1.0, 0.0})}, pp{Poly2(cplx{1.0, 0.0})};
    for (int i = 1; i <= std::max(degree(), 0); ++i) {
        pr.push_back(pr.back() * kr);
        pp.push_back(pp.back() * kp);
    }
    for (int a = 0; a <= degree(); ++a)
        for (int b = 0; a + b <= degree(); ++b)
            if (c_[a][b] != cplx{}) r = r + pr[a] * pp[b] * c_[a][b];
    return r;
}

cplx Poly2::eval(double kr, double kp) const {
    cplx s{};
    for (int a = 0; a <= degree(); ++a) {
        cplx row{};
        for (int b = degree() - a; b >= 0; --b) row = row * kp + c_[a][b];
        s += row * std::pow(kr, a);
    }
    return s;
}

} // namespace qbo::state
