// poly2.hpp — dense complex polynomials in the two phase-space variables (k_R, k_P)
#pragma once

#include <complex>
#include <vector>

namespace qbo::state {

using cplx = std::complex<double>;

class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(cplx constant) : c_(1, std::vector<cplx>(1, constant)) {}
    // α·k_R + β·k_P
    static Poly2 linear(cplx alpha, cplx beta);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    cplx coeff(int a, int b) const;   // coefficient of k_R^a k_P^b
    void add(int a, int b, cplx v);

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(cplx s) const;
    Poly2 pow(int n) const;

    // p(k) → p(L k) with k_R → L00 k_R + L01 k_P, k_P → L10 k_R + L11 k_P
    Poly2 substitute(cplx l00, cplx l01, cplx l10, cplx l11) const;
    cplx eval(double kr, double kp) const;

private:
    void grow(int degree);
    std::vector<std::vector<cplx>> c_;  // c_[a][b], a + b ≤ degree
};

} // namespace qbo::state
