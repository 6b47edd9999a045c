#pragma once

// Umbrella header: the whole library.

#include "linecell/assoc_single.hpp"
#include "linecell/assoc_two_freq.hpp"
#include "linecell/errors.hpp"
#include "linecell/fluid.hpp"
#include "linecell/geometry2d.hpp"
#include "linecell/hierarchical.hpp"
#include "linecell/intervals.hpp"
#include "linecell/modes.hpp"
#include "linecell/pathloss.hpp"
#include "linecell/quadrature.hpp"
#include "linecell/scenario.hpp"
#include "linecell/search.hpp"
#include "linecell/sic.hpp"
