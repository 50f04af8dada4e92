#pragma once

// Umbrella header: time-domain geometric-algebra power analysis.

#include "gapower/cli.hpp"
#include "gapower/decomp.hpp"
#include "gapower/errors.hpp"
#include "gapower/geompower.hpp"
#include "gapower/impedance.hpp"
#include "gapower/io.hpp"
#include "gapower/multivector.hpp"
#include "gapower/scenarios.hpp"
#include "gapower/waveform.hpp"
