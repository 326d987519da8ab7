#pragma once

#include "hk/format.hpp"
#include "hk/graph.hpp"
#include "hk/matching.hpp"
#include "hk/model.hpp"
#include "hk/montecarlo.hpp"
#include "hk/parallel.hpp"
#include "hk/profile.hpp"
#include "hk/rng.hpp"
#include "hk/scalar.hpp"
#include "hk/verify.hpp"
#include "hk/version.hpp"
