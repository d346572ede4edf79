#pragma once

// Umbrella header for the core library (no HTTP or PNG dependencies).

#include "mondrian/assignment.hpp"
#include "mondrian/cluster.hpp"
#include "mondrian/config.hpp"
#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"
#include "mondrian/json_io.hpp"
#include "mondrian/layout.hpp"
#include "mondrian/metrics.hpp"
#include "mondrian/segment.hpp"
#include "mondrian/split.hpp"
#include "mondrian/templates.hpp"
