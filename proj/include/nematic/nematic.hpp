#pragma once

#include "nematic/closure.hpp"
#include "nematic/compare.hpp"
#include "nematic/config.hpp"
#include "nematic/energy.hpp"
#include "nematic/errors.hpp"
#include "nematic/grid.hpp"
#include "nematic/kinetic.hpp"
#include "nematic/maxslope.hpp"
#include "nematic/mobility.hpp"
#include "nematic/phase.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/specfun.hpp"
#include "nematic/trajectory.hpp"
#include "nematic/vortex.hpp"
#include "nematic/vortex_config.hpp"
#include "nematic/vortex_field.hpp"
