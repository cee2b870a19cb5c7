#pragma once

#include "bench.hpp"
#include "formula.hpp"
#include "kleene.hpp"
#include "logic.hpp"
#include "normalize.hpp"
#include "objects.hpp"
#include "prover.hpp"
#include "relmodel.hpp"
#include "rng.hpp"
#include "syntax.hpp"
#include "terms.hpp"
#include "typecheck.hpp"
