#pragma once

#include "fokas_heat/config.hpp"
#include "fokas_heat/contours.hpp"
#include "fokas_heat/core.hpp"
#include "fokas_heat/error.hpp"
#include "fokas_heat/kernel_terms.hpp"
#include "fokas_heat/oracles.hpp"
#include "fokas_heat/solution.hpp"
#include "fokas_heat/solve.hpp"
#include "fokas_heat/solver_finite.hpp"
#include "fokas_heat/solver_semi_infinite.hpp"
#include "fokas_heat/transforms.hpp"
