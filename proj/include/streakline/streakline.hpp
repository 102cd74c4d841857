#pragma once

#include "streakline/core.hpp"
#include "streakline/ingest.hpp"
#include "streakline/models.hpp"
#include "streakline/nelder_mead.hpp"
#include "streakline/random.hpp"
#include "streakline/schedule.hpp"
#include "streakline/serialize.hpp"
#include "streakline/sim.hpp"
#include "streakline/streaks.hpp"
#include "streakline/weibull.hpp"
