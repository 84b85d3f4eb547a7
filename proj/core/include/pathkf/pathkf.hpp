#pragma once

#include "pathkf/baselines.hpp"
#include "pathkf/bench.hpp"
#include "pathkf/core.hpp"
#include "pathkf/error.hpp"
#include "pathkf/models.hpp"
#include "pathkf/parallel.hpp"
#include "pathkf/pkf.hpp"
#include "pathkf/synth.hpp"
