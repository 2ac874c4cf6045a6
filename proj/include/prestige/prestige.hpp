#pragma once

#include "prestige/analyze.hpp"
#include "prestige/baselines.hpp"
#include "prestige/cocite.hpp"
#include "prestige/format.hpp"
#include "prestige/ingest.hpp"
#include "prestige/model.hpp"
#include "prestige/parallel.hpp"
#include "prestige/rank.hpp"
#include "prestige/report.hpp"
#include "prestige/sparse.hpp"
#include "prestige/synth.hpp"

namespace prestige {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prestige
