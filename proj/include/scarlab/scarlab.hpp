#pragma once
// Umbrella header for the whole library.

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/dynamics.hpp"
#include "scarlab/exactkernel.hpp"
#include "scarlab/fibonacci.hpp"
#include "scarlab/fsa.hpp"
#include "scarlab/hamiltonian.hpp"
#include "scarlab/io.hpp"
#include "scarlab/linalg.hpp"
#include "scarlab/scars.hpp"
#include "scarlab/spectral.hpp"
#include "scarlab/symmetry.hpp"
