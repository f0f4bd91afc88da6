#pragma once

// Umbrella header.

#include "capsig/benchmark.hpp"
#include "capsig/errors.hpp"
#include "capsig/market.hpp"
#include "capsig/mechanism.hpp"
#include "capsig/merton.hpp"
#include "capsig/normal.hpp"
#include "capsig/paths.hpp"
#include "capsig/pipeline.hpp"
#include "capsig/reep.hpp"
#include "capsig/report.hpp"
#include "capsig/risk.hpp"
#include "capsig/rng.hpp"
#include "capsig/scenario.hpp"
#include "capsig/version.hpp"
