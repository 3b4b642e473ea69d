#pragma once

// Umbrella header for the full anchor-selection toolkit.

#include "juno/action_space.hpp"
#include "juno/agent.hpp"
#include "juno/common.hpp"
#include "juno/config.hpp"
#include "juno/grid.hpp"
#include "juno/io.hpp"
#include "juno/measurement.hpp"
#include "juno/metrics.hpp"
#include "juno/qtable.hpp"
#include "juno/rng.hpp"
#include "juno/rollout.hpp"
#include "juno/selectors.hpp"
#include "juno/solver.hpp"
