#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annodb/value.hpp"

namespace annodb {

using ProcedureFn = std::function<Value(const std::vector<Value>&)>;

struct ProcedureDef {
  std::string name;
  std::string builtin;
  std::size_t arity = 1;  // 0 accepts any number of arguments
  bool operator==(const ProcedureDef&) const = default;
};

// Names of the built-in functions a procedure can be bound to.
std::vector<std::string> builtin_names();

// Procedures the database can execute, each bound to a deterministic built-in.
class ProcedureRegistry {
 public:
  // Registers or rebinds `def.name`. Raises kUnknownProcedure for an unknown
  // built-in, kArityMismatch when the built-in has a fixed, different arity.
  void define(ProcedureDef def);

  bool contains(const std::string& name) const { return defs_.count(name) != 0; }
  const ProcedureDef* find(const std::string& name) const;
  const std::map<std::string, ProcedureDef>& definitions() const { return defs_; }

  // Runs a procedure. Any failure surfaces as kProcedureFailure.
  Value call(const std::string& name, const std::vector<Value>& args) const;

 private:
  std::map<std::string, ProcedureDef> defs_;
};

// Standard genetic-code translation of a DNA sequence; stops at the first
// stop codon and ignores a trailing partial codon.
std::string translate_dna(const std::string& dna);

}  // namespace annodb
