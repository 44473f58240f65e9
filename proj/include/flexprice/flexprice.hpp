#pragma once

#include "flexprice/adaptive_price.hpp"
#include "flexprice/flex_function.hpp"
#include "flexprice/integrate.hpp"
#include "flexprice/ispline.hpp"
#include "flexprice/linear_flex.hpp"
#include "flexprice/optimal_price.hpp"
#include "flexprice/rng.hpp"
#include "flexprice/scenario.hpp"
#include "flexprice/signals.hpp"
#include "flexprice/simulate.hpp"
#include "flexprice/trajectory.hpp"
