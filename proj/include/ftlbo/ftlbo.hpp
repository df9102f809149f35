#pragma once

// Umbrella header.

#include "ftlbo/baselines.hpp"
#include "ftlbo/config.hpp"
#include "ftlbo/fitness.hpp"
#include "ftlbo/formation.hpp"
#include "ftlbo/geometry.hpp"
#include "ftlbo/harness.hpp"
#include "ftlbo/optimizer.hpp"
#include "ftlbo/population.hpp"
#include "ftlbo/random.hpp"
#include "ftlbo/scenario.hpp"
