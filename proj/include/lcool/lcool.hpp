#pragma once

#include "lcool/adam.hpp"
#include "lcool/bench.hpp"
#include "lcool/checkpoint.hpp"
#include "lcool/error.hpp"
#include "lcool/langevin.hpp"
#include "lcool/mlp.hpp"
#include "lcool/rng.hpp"
#include "lcool/score.hpp"
#include "lcool/toy_data.hpp"
#include "lcool/translate.hpp"
