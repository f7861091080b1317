#pragma once

// Umbrella header for the library (the CLI lives in disclab/cli.hpp).

#include "disclab/bounds.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/envelope.hpp"
#include "disclab/error.hpp"
#include "disclab/format.hpp"
#include "disclab/optimize.hpp"
#include "disclab/parallel.hpp"
#include "disclab/piecewise_linear.hpp"
#include "disclab/points.hpp"
#include "disclab/variational.hpp"
