#pragma once

// Numerical toolkit for two-weight integral Hardy inequalities on radial
// measure spaces: exponent bookkeeping, weight and space models, log-space
// adaptive quadrature with finiteness classification, cumulative weight
// grids, the characterizing functionals with their two-sided constant
// bracket, power-scale admissibility tests, and a config-driven harness.

#include "hardy/errors.hpp"
#include "hardy/math.hpp"
#include "hardy/exponents.hpp"
#include "hardy/interpolation.hpp"
#include "hardy/weights.hpp"
#include "hardy/spaces.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/cumulative.hpp"
#include "hardy/functionals.hpp"
#include "hardy/admissibility.hpp"
#include "hardy/harness.hpp"
