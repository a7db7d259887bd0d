#pragma once

#include "gsi/sampling/cholesky.hpp"
#include "gsi/sampling/generate.hpp"
#include "gsi/sampling/normal.hpp"
#include "gsi/sampling/point_set.hpp"
#include "gsi/sampling/random.hpp"
#include "gsi/sampling/sobol_sequence.hpp"
#include "gsi/sampling/transform.hpp"
