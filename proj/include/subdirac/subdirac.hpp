#pragma once

// Umbrella header.

#include "clifford.hpp"
#include "chart.hpp"
#include "dirac.hpp"
#include "fit.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "report.hpp"
#include "suites.hpp"
#include "weierstrass.hpp"
