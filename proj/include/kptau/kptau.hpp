#pragma once

#include "kptau/algebra_checks.hpp"
#include "kptau/correlators.hpp"
#include "kptau/linear_solve.hpp"
#include "kptau/mode_algebra.hpp"
#include "kptau/operators.hpp"
#include "kptau/serialize.hpp"
#include "kptau/tau_engine.hpp"
