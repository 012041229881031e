#pragma once

#include "amh/anisotropy.hpp"
#include "amh/approx.hpp"
#include "amh/atoms.hpp"
#include "amh/campanato.hpp"
#include "amh/duality.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/mixed_norm.hpp"
#include "amh/polynomial.hpp"
#include "amh/polyproj.hpp"
#include "amh/config.hpp"
#include "amh/oracles.hpp"
#include "amh/harness.hpp"
#include "amh/rng.hpp"
