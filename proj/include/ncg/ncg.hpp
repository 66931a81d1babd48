#pragma once

// Everything, for tools and tests that want the whole library.

#include "ncg/operator_core.hpp"
#include "ncg/algebra.hpp"
#include "ncg/triple.hpp"
#include "ncg/finite_examples.hpp"
#include "ncg/states.hpp"
#include "ncg/simplex.hpp"
#include "ncg/distance.hpp"
#include "ncg/homomorphism.hpp"
#include "ncg/derivations.hpp"
#include "ncg/morphisms.hpp"
#include "ncg/hodge.hpp"
#include "ncg/io.hpp"
#include "ncg/suites.hpp"
