#pragma once

#include "hweyl/errors.hpp"
#include "hweyl/expansion.hpp"
#include "hweyl/moments.hpp"
#include "hweyl/rational.hpp"
#include "hweyl/sampling.hpp"
#include "hweyl/spectrum.hpp"
#include "hweyl/surd_series.hpp"
#include "hweyl/tau.hpp"
