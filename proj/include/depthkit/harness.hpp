#pragma once

#include "depthkit/harness/bench.hpp"
#include "depthkit/harness/config.hpp"
#include "depthkit/harness/grid.hpp"
#include "depthkit/harness/report.hpp"
#include "depthkit/harness/runner.hpp"
#include "depthkit/harness/summary.hpp"
#include "depthkit/harness/verifiers.hpp"
