#pragma once

// convenience include of the whole library

#include "mdl/arith.hpp"
#include "mdl/bitstring.hpp"
#include "mdl/codes.hpp"
#include "mdl/complexity.hpp"
#include "mdl/models.hpp"
#include "mdl/polynomial.hpp"
#include "mdl/prediction.hpp"
#include "mdl/randomness.hpp"
#include "mdl/registry.hpp"
#include "mdl/selection.hpp"
#include "mdl/set_family.hpp"
#include "mdl/structure.hpp"
