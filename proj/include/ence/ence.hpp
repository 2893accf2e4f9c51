// SPDX-License-Identifier: MIT
#pragma once

// Umbrella header: detection and quantification of nonclassical correlation
// in finite-dimensional quantum states via eigenvalue-preserving-but-not-
// completely-eigenvalue-preserving maps.

#include "ence/errors.hpp"
#include "ence/tolerances.hpp"
#include "ence/linalg.hpp"
#include "ence/states.hpp"
#include "ence/io.hpp"
#include "ence/maps.hpp"
#include "ence/measures.hpp"
#include "ence/multipartite.hpp"
