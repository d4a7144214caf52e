// include/jgrscan/hierarchy.hpp
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "jgrscan/ir.hpp"

namespace jgrscan {

/// Class hierarchy tables used for CHA dispatch.
///
/// Every managed class and every `extern` type has an entry. Extern types are
/// opaque leaves: they have no supertypes besides themselves and are never
/// concrete.
struct ClassHierarchy {
  /// Concrete (non-interface, declared) subtypes, reflexive for classes.
  std::map<std::string, std::set<std::string>> subtypes;
  /// Reflexive transitive supertypes.
  std::map<std::string, std::set<std::string>> supertypes;
  /// (concrete class, method name) -> class holding the implementation.
  std::map<std::pair<std::string, std::string>, std::string> overrides;

  friend bool operator==(const ClassHierarchy&, const ClassHierarchy&) = default;

  const std::set<std::string>& concrete_subtypes(const std::string& type) const;
  const std::set<std::string>& all_supertypes(const std::string& type) const;
  bool is_subtype(const std::string& sub, const std::string& super) const;
  std::optional<MethodRef> implementation(const std::string& concrete_class,
                                          const std::string& method) const;
};

/// Throws CycleError with the offending path (first repeated name at both
/// ends) when the parent relation is cyclic.
ClassHierarchy build_hierarchy(const ProgramDb& db);

/// Nearest declaring class of `method` along the superclass chain starting at
/// `cls` (inclusive). Only body-bearing (class) declarations count.
std::optional<std::string> find_implementing_class(const ProgramDb& db, const std::string& cls,
                                                   const std::string& method);

}  // namespace jgrscan
