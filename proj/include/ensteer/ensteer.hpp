#pragma once

// Umbrella header: parameter-independent open-loop inputs that steer a whole
// parameter-indexed family of linear systems uniformly close to a target
// family, plus the constructive complex-approximation machinery behind them.

#include "ensteer/bernstein.hpp"
#include "ensteer/complex_poly.hpp"
#include "ensteer/conditions.hpp"
#include "ensteer/eigen_decomposition.hpp"
#include "ensteer/errors.hpp"
#include "ensteer/fejer.hpp"
#include "ensteer/hermite.hpp"
#include "ensteer/io.hpp"
#include "ensteer/method_s1.hpp"
#include "ensteer/method_s2.hpp"
#include "ensteer/method_s2_continuous.hpp"
#include "ensteer/report.hpp"
#include "ensteer/runge.hpp"
#include "ensteer/scalar_approx.hpp"
#include "ensteer/simulate.hpp"
#include "ensteer/synthesis_common.hpp"
#include "ensteer/types.hpp"
