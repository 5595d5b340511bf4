#pragma once

#include "depthkit/analytic/bessel.hpp"
#include "depthkit/analytic/dfi.hpp"
#include "depthkit/analytic/gamma.hpp"
#include "depthkit/analytic/jet.hpp"
#include "depthkit/analytic/quadrature.hpp"
#include "depthkit/analytic/stationary_phase.hpp"
#include "depthkit/analytic/test_function.hpp"
