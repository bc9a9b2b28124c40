#pragma once

#include "crossing/core.hpp"
#include "crossing/fft.hpp"
#include "crossing/quantum_propagation.hpp"
#include "crossing/decoherence.hpp"
#include "crossing/quadrature.hpp"
#include "crossing/fokker_planck.hpp"
#include "crossing/wigner.hpp"
#include "crossing/detector.hpp"
#include "crossing/timeless.hpp"
