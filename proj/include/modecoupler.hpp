// modecoupler.hpp: umbrella header

#pragma once

#include "modecoupler/errors.hpp"
#include "modecoupler/format.hpp"
#include "modecoupler/version.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"
#include "modecoupler/liouvillian.hpp"
#include "modecoupler/steadystate.hpp"
#include "modecoupler/dynamics.hpp"
#include "modecoupler/observables.hpp"
#include "modecoupler/sweep.hpp"
#include "modecoupler/validation.hpp"
