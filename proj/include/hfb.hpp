#pragma once

// Umbrella header for the HFB simulator library.

#include "hfb/types.hpp"
#include "hfb/grid.hpp"
#include "hfb/field.hpp"
#include "hfb/state.hpp"
#include "hfb/snapshot.hpp"
#include "hfb/meanfield.hpp"
#include "hfb/dynamics.hpp"
#include "hfb/observables.hpp"
#include "hfb/mild.hpp"
#include "hfb/bogoliubov.hpp"
#include "hfb/oracle.hpp"
#include "hfb/two_mode_reference.hpp"
#include "hfb/config.hpp"
#include "hfb/run.hpp"
#include "hfb/verify.hpp"
