#pragma once

// Umbrella header for the library (the CLI layer lives in molrbf/cli.hpp).

#include "molrbf/analysis.hpp"
#include "molrbf/discretization.hpp"
#include "molrbf/errors.hpp"
#include "molrbf/finite_difference.hpp"
#include "molrbf/format.hpp"
#include "molrbf/gfkdv.hpp"
#include "molrbf/integrator.hpp"
#include "molrbf/kernels.hpp"
#include "molrbf/solutions.hpp"
