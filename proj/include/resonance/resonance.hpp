#pragma once

#include "resonance/bundled.hpp"
#include "resonance/conditions.hpp"
#include "resonance/config.hpp"
#include "resonance/conley.hpp"
#include "resonance/errors.hpp"
#include "resonance/experiment.hpp"
#include "resonance/homotopy.hpp"
#include "resonance/nonlinearity.hpp"
#include "resonance/orbit.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/report.hpp"
#include "resonance/sampling.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"
