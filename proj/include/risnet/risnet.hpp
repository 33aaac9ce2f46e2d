#pragma once

#include "risnet/beamforming.hpp"
#include "risnet/experiments.hpp"
#include "risnet/graph.hpp"
#include "risnet/io.hpp"
#include "risnet/link_selection.hpp"
#include "risnet/placement.hpp"
#include "risnet/radio.hpp"
#include "risnet/solver.hpp"
