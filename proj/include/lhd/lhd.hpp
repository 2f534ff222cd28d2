#pragma once

#include "lhd/bench.hpp"
#include "lhd/criteria.hpp"
#include "lhd/design.hpp"
#include "lhd/error.hpp"
#include "lhd/improve.hpp"
#include "lhd/io.hpp"
#include "lhd/report.hpp"
#include "lhd/montecarlo.hpp"
#include "lhd/rng.hpp"
#include "lhd/slhd.hpp"
#include "lhd/svg.hpp"

namespace lhd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lhd
