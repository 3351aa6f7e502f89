#pragma once

#include "plr/disorder.hpp"
#include "plr/ensemble.hpp"
#include "plr/experiment.hpp"
#include "plr/oracle.hpp"
#include "plr/oracle_suite.hpp"
#include "plr/quasifree.hpp"
#include "plr/runner.hpp"
#include "plr/spectral.hpp"
#include "plr/spectral_io.hpp"
#include "plr/version.hpp"
