#pragma once

#include "cylink/algebra/io.hpp"
#include "cylink/groebner/io.hpp"
#include "cylink/groebner/standard_monomials.hpp"
#include "cylink/invariants/equivalence.hpp"
#include "cylink/invariants/invariants.hpp"
#include "cylink/learn/train.hpp"
#include "cylink/links/screening.hpp"
#include "cylink/pipeline/analysis.hpp"
#include "cylink/pipeline/batch.hpp"
#include "cylink/symreg/gp.hpp"
