#pragma once

#include "exrmt/arithmetic.hpp"
#include "exrmt/config.hpp"
#include "exrmt/eigensolver.hpp"
#include "exrmt/ensemble.hpp"
#include "exrmt/euler.hpp"
#include "exrmt/haar.hpp"
#include "exrmt/parallel.hpp"
#include "exrmt/random.hpp"
#include "exrmt/report.hpp"
#include "exrmt/sieve.hpp"
#include "exrmt/special.hpp"
#include "exrmt/spectral.hpp"
#include "exrmt/stats.hpp"
#include "exrmt/theory.hpp"
#include "exrmt/zeros.hpp"
