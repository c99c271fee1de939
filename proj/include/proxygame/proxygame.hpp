#pragma once

#include "proxygame/core/config.hpp"
#include "proxygame/core/geometry.hpp"
#include "proxygame/core/random.hpp"
#include "proxygame/core/types.hpp"
#include "proxygame/core/world.hpp"
#include "proxygame/matching/deferred_acceptance.hpp"
#include "proxygame/matching/hopcroft_karp.hpp"
#include "proxygame/matching/preference_table.hpp"
#include "proxygame/utility.hpp"
#include "proxygame/clients.hpp"
#include "proxygame/distributor.hpp"
#include "proxygame/censor.hpp"
#include "proxygame/metrics.hpp"
#include "proxygame/simulation.hpp"
#include "proxygame/experiments.hpp"
