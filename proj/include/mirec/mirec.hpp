#pragma once

#include "mirec/baselines.hpp"
#include "mirec/config.hpp"
#include "mirec/domain.hpp"
#include "mirec/dual.hpp"
#include "mirec/harness.hpp"
#include "mirec/oracle.hpp"
#include "mirec/primal.hpp"
#include "mirec/rng.hpp"
#include "mirec/scorer.hpp"
