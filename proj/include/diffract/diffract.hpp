#pragma once

// Umbrella header: pull in the whole library.

#include "diffract/autocorr.hpp"
#include "diffract/core.hpp"
#include "diffract/io.hpp"
#include "diffract/pointsets.hpp"
#include "diffract/primes.hpp"
#include "diffract/spectrum.hpp"
#include "diffract/windows.hpp"
