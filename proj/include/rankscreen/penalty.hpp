#pragma once

#include <stdexcept>

namespace rankscreen {

enum class PenaltyFamily { l1, scad, mcp };

struct PenaltySpec {
    PenaltyFamily family = PenaltyFamily::scad;
    double lambda = 0.0;
    double a = 3.7;          // SCAD shape, must be > 2
    double gamma_mcp = 3.0;  // MCP shape, must be > 1

    void validate() const {
        if (lambda < 0.0) throw std::invalid_argument("PenaltySpec: lambda must be >= 0");
        if (family == PenaltyFamily::scad && !(a > 2.0))
            throw std::invalid_argument("PenaltySpec: SCAD shape a must be > 2");
        if (family == PenaltyFamily::mcp && !(gamma_mcp > 1.0))
            throw std::invalid_argument("PenaltySpec: MCP shape gamma must be > 1");
    }
};

// p_lambda(t) for t >= 0. L1: lambda*t. SCAD: the standard three-piece form
// with knots lambda and a*lambda. MCP: the standard two-piece form with
// knot gamma*lambda.
double penalty_value(const PenaltySpec& pen, double t);

// d/dt p_lambda(t) for t >= 0 (right derivative at 0). Non-increasing in t
// for all three families.
double penalty_derivative(const PenaltySpec& pen, double t);

}  // namespace rankscreen
