#pragma once

// Umbrella header: the whole library in dependency order.

#include "wproc/types.hpp"
#include "wproc/errors.hpp"
#include "wproc/core.hpp"
#include "wproc/subspace.hpp"
#include "wproc/projection.hpp"
#include "wproc/shorted.hpp"
#include "wproc/schatten.hpp"
#include "wproc/solver.hpp"
#include "wproc/oracle.hpp"
#include "wproc/io.hpp"
#include "wproc/verify.hpp"
