#pragma once

// Umbrella header: spectral degeneracy structure of two-mode quadratic
// Langevin generators -- classification, eigenstructure, parameter-space
// maps, and eigenvalue braiding around closed parameter loops.

#include "swt/braid.hpp"
#include "swt/catastrophe.hpp"
#include "swt/eig4.hpp"
#include "swt/errors.hpp"
#include "swt/io.hpp"
#include "swt/mat4.hpp"
#include "swt/model.hpp"
#include "swt/parallel.hpp"
#include "swt/parammap.hpp"
#include "swt/quartic.hpp"
#include "swt/spectrum.hpp"
