#pragma once

// Umbrella header: utility ranking, learned risk prediction, derivative-free
// optimizers, dyadic conflict data handling, and the risk-control loop.

#include "ratchoice/alternatives.hpp"
#include "ratchoice/conflict_data.hpp"
#include "ratchoice/control_loop.hpp"
#include "ratchoice/csv.hpp"
#include "ratchoice/expectations.hpp"
#include "ratchoice/optimizers.hpp"
#include "ratchoice/rng.hpp"
