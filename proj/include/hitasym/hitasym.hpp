#pragma once

#include "hitasym/rational.hpp"
#include "hitasym/distribution.hpp"
#include "hitasym/distance.hpp"
#include "hitasym/builtin.hpp"
#include "hitasym/cyclic_system.hpp"
#include "hitasym/conditions.hpp"
#include "hitasym/stamp_machine.hpp"
#include "hitasym/rationalize.hpp"
#include "hitasym/odometer.hpp"
#include "hitasym/montecarlo.hpp"
#include "hitasym/serialize.hpp"
