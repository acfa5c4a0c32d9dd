#pragma once

#include "soilmor/error.hpp"
#include "soilmor/types.hpp"

#include "soilmor/hydrology/forcing.hpp"
#include "soilmor/hydrology/grid.hpp"
#include "soilmor/hydrology/richards.hpp"
#include "soilmor/hydrology/sensors.hpp"
#include "soilmor/hydrology/van_genuchten.hpp"

#include "soilmor/reduction/clustering.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/reduction/reduced_model.hpp"
#include "soilmor/reduction/snapshots.hpp"

#include "soilmor/estimation/adaptive.hpp"
#include "soilmor/estimation/covariance.hpp"
#include "soilmor/estimation/ekf.hpp"
#include "soilmor/estimation/error_metric.hpp"
#include "soilmor/estimation/trigger.hpp"

#include "soilmor/scenario/config.hpp"
#include "soilmor/scenario/export.hpp"
#include "soilmor/scenario/runner.hpp"
