#pragma once

#include "topdc/constants.hpp"
#include "topdc/errors.hpp"
#include "topdc/grid.hpp"
#include "topdc/jsa.hpp"
#include "topdc/parallel.hpp"
#include "topdc/process.hpp"
#include "topdc/pump.hpp"
#include "topdc/rates.hpp"
#include "topdc/resonator.hpp"
#include "topdc/scenario.hpp"
#include "topdc/sweep.hpp"
#include "topdc/wavefunction.hpp"
