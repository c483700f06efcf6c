#pragma once

#include "mdrpp/bench.hpp"
#include "mdrpp/carp.hpp"
#include "mdrpp/depot_routes.hpp"
#include "mdrpp/error.hpp"
#include "mdrpp/exact.hpp"
#include "mdrpp/failures.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/metrics.hpp"
#include "mdrpp/planner.hpp"
#include "mdrpp/rescheduler.hpp"
#include "mdrpp/routing.hpp"
#include "mdrpp/simulator.hpp"
#include "mdrpp/time.hpp"
