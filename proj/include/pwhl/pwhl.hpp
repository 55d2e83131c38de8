#pragma once

#include "pwhl/core.hpp"
#include "pwhl/diagnostics.hpp"
#include "pwhl/init.hpp"
#include "pwhl/io.hpp"
#include "pwhl/metrics.hpp"
#include "pwhl/pipeline.hpp"
#include "pwhl/screening.hpp"
#include "pwhl/simgen.hpp"
#include "pwhl/solver.hpp"
#include "pwhl/tuning.hpp"
