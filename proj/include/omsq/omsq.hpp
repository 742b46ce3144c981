#pragma once

#include "omsq/config.hpp"
#include "omsq/covariance.hpp"
#include "omsq/dynamics.hpp"
#include "omsq/emit.hpp"
#include "omsq/errors.hpp"
#include "omsq/model.hpp"
#include "omsq/report.hpp"
#include "omsq/spectrum.hpp"
#include "omsq/steady_state.hpp"
#include "omsq/sweep.hpp"
#include "omsq/units.hpp"
#include "omsq/validation.hpp"
