#pragma once

#include "constants.hpp"
#include "core.hpp"
#include "curve.hpp"
#include "io.hpp"
#include "isometry.hpp"
#include "mapzoo.hpp"
#include "qhyperbolic.hpp"
#include "region.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "shapes.hpp"
#include "svg.hpp"
#include "verifier.hpp"
