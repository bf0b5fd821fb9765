#pragma once

// Umbrella header: exact-rational toolkit for coalition-ballot voting rules on
// structured preference domains.

#include "ballotcraft/rational.hpp"
#include "ballotcraft/prefcore.hpp"
#include "ballotcraft/domains.hpp"
#include "ballotcraft/structure.hpp"
#include "ballotcraft/rules.hpp"
#include "ballotcraft/audit.hpp"
#include "ballotcraft/decompose.hpp"
