#ifndef SLICEFL_SLICEFL_HPP
#define SLICEFL_SLICEFL_HPP

#include "statement.hpp"
#include "spectra.hpp"
#include "formulas.hpp"
#include "ranking.hpp"
#include "slicing.hpp"
#include "hybrid.hpp"
#include "metrics.hpp"
#include "evaluation.hpp"

#endif // SLICEFL_SLICEFL_HPP
