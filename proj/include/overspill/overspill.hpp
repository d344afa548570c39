//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/overspill.hpp
//---------------------------------------------------------------------------//
#pragma once

#include "debtor_set.hpp"
#include "estimate.hpp"
#include "integrator.hpp"
#include "ladder.hpp"
#include "ladder_solver.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "path.hpp"
#include "piecewise.hpp"
#include "rng.hpp"
#include "simulate.hpp"
#include "stats.hpp"
#include "weights.hpp"
