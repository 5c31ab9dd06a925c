#pragma once

#include "keen/construct.hpp"
#include "keen/equilibria.hpp"
#include "keen/errors.hpp"
#include "keen/linalg.hpp"
#include "keen/model.hpp"
#include "keen/ode.hpp"
#include "keen/sim.hpp"
#include "keen/stability.hpp"
