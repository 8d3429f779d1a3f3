#pragma once

#include "varbvp/action.hpp"
#include "varbvp/builtins.hpp"
#include "varbvp/errors.hpp"
#include "varbvp/flow.hpp"
#include "varbvp/grid.hpp"
#include "varbvp/lagrangian.hpp"
#include "varbvp/shooting.hpp"
#include "varbvp/solver.hpp"
#include "varbvp/trajectory.hpp"
