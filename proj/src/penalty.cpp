#include "rankscreen/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace rankscreen {

double penalty_value(const PenaltySpec& pen, double t) {
    pen.validate();
    if (t < 0.0) throw std::invalid_argument("penalty_value: t must be >= 0");
    const double lambda = pen.lambda;
    switch (pen.family) {
        case PenaltyFamily::l1:
            return lambda * t;
        case PenaltyFamily::scad: {
            const double a = pen.a;
            if (t <= lambda) return lambda * t;
            if (t <= a * lambda)
                return -(t * t - 2.0 * a * lambda * t + lambda * lambda) / (2.0 * (a - 1.0));
            return (a + 1.0) * lambda * lambda / 2.0;
        }
        case PenaltyFamily::mcp: {
            const double g = pen.gamma_mcp;
            if (t <= g * lambda) return lambda * t - t * t / (2.0 * g);
            return g * lambda * lambda / 2.0;
        }
    }
    return 0.0;
}

double penalty_derivative(const PenaltySpec& pen, double t) {
    pen.validate();
    if (t < 0.0) throw std::invalid_argument("penalty_derivative: t must be >= 0");
    const double lambda = pen.lambda;
    switch (pen.family) {
        case PenaltyFamily::l1:
            return lambda;
        case PenaltyFamily::scad: {
            const double a = pen.a;
            if (t <= lambda) return lambda;
            return std::max(0.0, (a * lambda - t)) / (a - 1.0);
        }
        case PenaltyFamily::mcp:
            return std::max(0.0, lambda - t / pen.gamma_mcp);
    }
    return 0.0;
}

}  // namespace rankscreen
