#pragma once

#include "ewm/absorber.hpp"
#include "ewm/analysis.hpp"
#include "ewm/errors.hpp"
#include "ewm/joint_state.hpp"
#include "ewm/optics.hpp"
#include "ewm/pointer_grid.hpp"
#include "ewm/report_io.hpp"
#include "ewm/scenarios.hpp"
