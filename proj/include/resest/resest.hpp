#pragma once

#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/rng.hpp"
#include "resest/nonlinearity.hpp"
#include "resest/model.hpp"
#include "resest/plants.hpp"
#include "resest/combinatorics.hpp"
#include "resest/observers.hpp"
#include "resest/estimator.hpp"
#include "resest/isolation.hpp"
#include "resest/calibration.hpp"
#include "resest/config.hpp"
#include "resest/csv.hpp"
#include "resest/runner.hpp"
#include "resest/plots.hpp"
