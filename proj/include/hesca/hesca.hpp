#pragma once

#include "hesca/dataset.hpp"
#include "hesca/ensemble.hpp"
#include "hesca/experiment.hpp"
#include "hesca/learners.hpp"
#include "hesca/metrics.hpp"
#include "hesca/report.hpp"
#include "hesca/resample.hpp"
#include "hesca/results_io.hpp"
#include "hesca/stats.hpp"
#include "hesca/synth.hpp"
#include "hesca/tuning.hpp"
