// nvpol.hpp - umbrella header for the whole library.
#pragma once

#include "nvpol/config.hpp"
#include "nvpol/constants.hpp"
#include "nvpol/core_model.hpp"
#include "nvpol/dynamics.hpp"
#include "nvpol/errors.hpp"
#include "nvpol/inference.hpp"
#include "nvpol/io.hpp"
#include "nvpol/montecarlo.hpp"
#include "nvpol/optics.hpp"
#include "nvpol/random.hpp"
#include "nvpol/spectra.hpp"
