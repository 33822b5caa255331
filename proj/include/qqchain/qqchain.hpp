#pragma once

// Umbrella header for the qutrit-qubit chain engine.

#include "qqchain/eigensolver.hpp"
#include "qqchain/errors.hpp"
#include "qqchain/matrix.hpp"
#include "qqchain/measures.hpp"
#include "qqchain/model.hpp"
#include "qqchain/quantum.hpp"
#include "qqchain/sweep.hpp"
#include "qqchain/tolerances.hpp"
#include "qqchain/version.hpp"
