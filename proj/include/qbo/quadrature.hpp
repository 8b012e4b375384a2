// quadrature.hpp — global adaptive Gauss–Kronrod (G7/K15) on finite intervals
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace qbo::quad {

struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-8;
    std::size_t max_intervals = 50000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double value, double error)
        : std::runtime_error(what), value_(value), error_(error) {}
    double value() const noexcept { return value_; }
    double error() const noexcept { return error_; }
private:
    double value_;
    double error_;
};

// 15-point Kronrod rule on [-1,1]; gauss[i] is nonzero only on the embedded G7 nodes.
struct KronrodRule {
    std::array<double, 15> nodes{};
    std::array<double, 15> kronrod{};
    std::array<double, 15> gauss{};
};
const KronrodRule& kronrod15();

// Integrates f over [a,b]; the range is first split into `initial_panels`
// equal pieces, then the worst piece is bisected until the summed error
// estimate meets the tolerance. Throws QuadratureError with the achieved
// estimate when max_intervals is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {}, std::size_t initial_panels = 1);

} // namespace qbo::quad
