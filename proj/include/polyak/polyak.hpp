#pragma once

#include "polyak/bounds.hpp"
#include "polyak/config.hpp"
#include "polyak/error.hpp"
#include "polyak/experiment.hpp"
#include "polyak/objectives.hpp"
#include "polyak/optimizer.hpp"
#include "polyak/report.hpp"
#include "polyak/rng.hpp"
#include "polyak/schedules.hpp"
#include "polyak/vector_ops.hpp"
#include "polyak/verify.hpp"
