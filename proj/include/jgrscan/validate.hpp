// include/jgrscan/validate.hpp
#pragma once

#include "jgrscan/diagnostic.hpp"
#include "jgrscan/ir.hpp"

namespace jgrscan {

/// Checks the ProgramDb invariants that parsing does not enforce. The result
/// is empty iff the db is valid; diagnostics are ordered by unit and line.
Diagnostics validate(const ProgramDb& db);

}  // namespace jgrscan
