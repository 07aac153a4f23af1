#pragma once

#include "hcd/baselines.hpp"
#include "hcd/datagen.hpp"
#include "hcd/error.hpp"
#include "hcd/linalg.hpp"
#include "hcd/metrics.hpp"
#include "hcd/problem.hpp"
#include "hcd/serialize.hpp"
#include "hcd/solver.hpp"
#include "hcd/trace.hpp"
