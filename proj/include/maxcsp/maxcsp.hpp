#pragma once

// Umbrella header: the whole library in one include.

#include <maxcsp/errors.hpp>
#include <maxcsp/fraction.hpp>
#include <maxcsp/relation.hpp>
#include <maxcsp/instance.hpp>
#include <maxcsp/operation.hpp>
#include <maxcsp/polymorphism.hpp>
#include <maxcsp/structure.hpp>
#include <maxcsp/ppformula.hpp>
#include <maxcsp/strict.hpp>
#include <maxcsp/gadgets.hpp>
#include <maxcsp/expander.hpp>
#include <maxcsp/reductions.hpp>
#include <maxcsp/lattice.hpp>
#include <maxcsp/supermod.hpp>
#include <maxcsp/solver.hpp>
#include <maxcsp/classify.hpp>
#include <maxcsp/io.hpp>
