#pragma once
#include "types.hpp"
#include "graph.hpp"
#include "generators.hpp"
#include "metrics.hpp"
#include "leiden/config.hpp"
#include "leiden/phases.hpp"
#include "leiden/leiden.hpp"
#include "tracking.hpp"
#include "dynamic.hpp"
#include "io.hpp"
#include "harness.hpp"
