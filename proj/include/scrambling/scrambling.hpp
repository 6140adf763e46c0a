// scrambling.hpp - umbrella header.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/rng.hpp"
#include "scrambling/ensembles.hpp"
#include "scrambling/states.hpp"
#include "scrambling/spectral.hpp"
#include "scrambling/krylov.hpp"
#include "scrambling/observables.hpp"
#include "scrambling/stats.hpp"
#include "scrambling/config.hpp"
#include "scrambling/runner.hpp"
