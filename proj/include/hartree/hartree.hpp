#pragma once

// Umbrella header for the hartree library.

#include "hartree/bounds.hpp"
#include "hartree/builtin_states.hpp"
#include "hartree/eigensolver.hpp"
#include "hartree/io.hpp"
#include "hartree/sigma_search.hpp"
#include "hartree/state.hpp"
