#pragma once

// Umbrella header for the whole library.

#include "vkci/calculus.hpp"
#include "vkci/corrugation.hpp"
#include "vkci/decompose.hpp"
#include "vkci/errors.hpp"
#include "vkci/field_io.hpp"
#include "vkci/grid.hpp"
#include "vkci/mat2.hpp"
#include "vkci/mollify.hpp"
#include "vkci/norms.hpp"
#include "vkci/reduction.hpp"
#include "vkci/report.hpp"
#include "vkci/schedule.hpp"
#include "vkci/solver.hpp"
#include "vkci/synth.hpp"
#include "vkci/version.hpp"
