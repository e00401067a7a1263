#pragma once

#include "growthfit/cli.hpp"
#include "growthfit/diagnostics.hpp"
#include "growthfit/distributions.hpp"
#include "growthfit/errors.hpp"
#include "growthfit/estimation.hpp"
#include "growthfit/nelder_mead.hpp"
#include "growthfit/quadrature.hpp"
#include "growthfit/records.hpp"
#include "growthfit/rng.hpp"
#include "growthfit/samples.hpp"
#include "growthfit/selection.hpp"
#include "growthfit/specfun.hpp"
