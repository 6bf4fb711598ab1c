#pragma once

#include "error.hpp"
#include "units.hpp"
#include "medium.hpp"
#include "bloch.hpp"
#include "dispersion.hpp"
#include "phasematch.hpp"
#include "propagation.hpp"
#include "config.hpp"
#include "scenario.hpp"
#include "sweep.hpp"
#include "io.hpp"
