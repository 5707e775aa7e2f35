#pragma once

// Everything at once.

#include "lfunc/analytic.hpp"
#include "lfunc/bsd.hpp"
#include "lfunc/curve.hpp"
#include "lfunc/linalg.hpp"
#include "lfunc/local.hpp"
#include "lfunc/numeric.hpp"
#include "lfunc/realizations.hpp"
#include "lfunc/series.hpp"
#include "lfunc/smith.hpp"
