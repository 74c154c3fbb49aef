#pragma once

#include "sgmh/admission.hpp"
#include "sgmh/buffering.hpp"
#include "sgmh/engine.hpp"
#include "sgmh/framing.hpp"
#include "sgmh/generator.hpp"
#include "sgmh/metrics.hpp"
#include "sgmh/scenario.hpp"
#include "sgmh/scheduling.hpp"
#include "sgmh/types.hpp"
