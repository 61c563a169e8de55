#pragma once

#include "wigner/error.hpp"
#include "wigner/numeric.hpp"
#include "wigner/projection.hpp"
#include "wigner/symmetry_map.hpp"
#include "wigner/report.hpp"
#include "wigner/verifiers.hpp"
#include "wigner/reduction.hpp"
#include "wigner/superoperator.hpp"
#include "wigner/jordan.hpp"
#include "wigner/pipeline.hpp"
#include "wigner/serialization.hpp"
#include "wigner/suite.hpp"
