// include/jgrscan/native_analysis.hpp
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jgrscan/diagnostic.hpp"
#include "jgrscan/ir.hpp"

namespace jgrscan {

/// (managed class, managed method) -> native function, from a registration table.
struct JniBinding {
  std::string managed_class;
  std::string managed_method;
  std::string native_fn;

  friend auto operator<=>(const JniBinding&, const JniBinding&) = default;
  friend bool operator==(const JniBinding&, const JniBinding&) = default;

  MethodRef managed() const { return {managed_class, managed_method}; }
};

/// Native call chain from a JNI entry function to the global-ref sink. The
/// last frame is always `env.NewGlobalRef`; no function repeats.
struct NativePath {
  std::vector<std::string> frames;

  friend bool operator==(const NativePath&, const NativePath&) = default;
};

/// One binding per registration entry, in registration order. Entries whose
/// managed method is missing or not `native` are still returned; they are
/// reported through `diagnostics` when given.
std::vector<JniBinding> extract_jni_bindings(const ProgramDb& db,
                                             Diagnostics* diagnostics = nullptr);

/// Breadth-first search from `entry` towards the sink.
///
/// A function's call list is only consulted once the function is dequeued,
/// and callees are expanded in lexicographic order, so the result is the
/// lexicographically-first shortest witness. Extern callees are opaque.
/// Throws UnknownFunction when `entry` is not a db function.
std::optional<NativePath> reaches_globalref(const ProgramDb& db, const std::string& entry);

struct JgrBinding {
  JniBinding binding;
  NativePath path;

  friend bool operator==(const JgrBinding&, const JgrBinding&) = default;
};

/// Bindings whose native function reaches the sink, ordered by managed
/// `class.method`.
std::vector<JgrBinding> jgr_creating_bindings(const ProgramDb& db);

/// True when `path` is a valid witness against `db` alone: it starts at a db
/// function, ends at the sink, follows declared call edges and never repeats.
bool is_valid_native_path(const ProgramDb& db, const NativePath& path);

}  // namespace jgrscan
