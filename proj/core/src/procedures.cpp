#include "annodb/procedures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "annodb/error.hpp"

namespace annodb {

namespace {

struct Builtin {
  std::size_t arity;  // 0 = variadic
  ProcedureFn fn;
};

const std::string& text_arg(const std::vector<Value>& args, std::size_t i) {
  if (!args.at(i).is_text()) raise(ErrorCode::kTypeMismatch, "expected a text argument");
  return args[i].as_text();
}

bool any_null(const std::vector<Value>& args) {
  return std::any_of(args.begin(), args.end(), [](const Value& v) { return v.is_null(); });
}

const std::map<std::string, Builtin>& builtins() {
  static const std::map<std::string, Builtin> table = {
      {"identity", {1, [](const std::vector<Value>& a) { return a.at(0); }}},
      {"translate",
       {1,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          return Value(translate_dna(text_arg(a, 0)));
        }}},
      {"upper",
       {1,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          std::string s = text_arg(a, 0);
          for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          return Value(std::move(s));
        }}},
      {"reverse",
       {1,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          std::string s = text_arg(a, 0);
          std::reverse(s.begin(), s.end());
          return Value(std::move(s));
        }}},
      {"length",
       {1,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          return Value(static_cast<std::int64_t>(text_arg(a, 0).size()));
        }}},
      {"concat",
       {0,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          std::string s;
          for (const Value& v : a) s += v.to_string();
          return Value(std::move(s));
        }}},
      // Alignment score stand-in: 10^-(matching positions), scaled by the
      // length difference.
      {"evalue",
       {2,
        [](const std::vector<Value>& a) {
          if (any_null(a)) return Value();
          const std::string& x = text_arg(a, 0);
          const std::string& y = text_arg(a, 1);
          std::size_t n = std::min(x.size(), y.size());
          int matches = 0;
          for (std::size_t i = 0; i < n; ++i) matches += x[i] == y[i] ? 1 : 0;
          double gap = static_cast<double>(std::max(x.size(), y.size()) - n);
          return Value((1.0 + gap) * std::pow(10.0, -matches));
        }}},
      {"fail",
       {0,
        [](const std::vector<Value>&) -> Value {
          raise(ErrorCode::kProcedureFailure, "procedure always fails");
        }}},
  };
  return table;
}

char codon_to_amino(const std::string& codon) {
  // Index: T=0, C=1, A=2, G=3; order TTT, TTC, TTA, TTG, TCT, ...
  static const char* kTable = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";
  auto idx = [](char c) -> int {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'T':
      case 'U': return 0;
      case 'C': return 1;
      case 'A': return 2;
      case 'G': return 3;
      default: return -1;
    }
  };
  int a = idx(codon[0]), b = idx(codon[1]), c = idx(codon[2]);
  if (a < 0 || b < 0 || c < 0) raise(ErrorCode::kProcedureFailure, "invalid codon '" + codon + "'");
  return kTable[a * 16 + b * 4 + c];
}

}  // namespace

std::string translate_dna(const std::string& dna) {
  std::string protein;
  for (std::size_t i = 0; i + 3 <= dna.size(); i += 3) {
    char amino = codon_to_amino(dna.substr(i, 3));
    if (amino == '*') break;
    protein.push_back(amino);
  }
  return protein;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, b] : builtins()) out.push_back(name);
  return out;
}

void ProcedureRegistry::define(ProcedureDef def) {
  auto it = builtins().find(def.builtin);
  if (it == builtins().end()) raise(ErrorCode::kUnknownProcedure, "no built-in named '" + def.builtin + "'");
  if (it->second.arity != 0 && it->second.arity != def.arity) {
    raise(ErrorCode::kArityMismatch, "built-in '" + def.builtin + "' takes " + std::to_string(it->second.arity) +
                                         " arguments, not " + std::to_string(def.arity));
  }
  std::string name = def.name;
  defs_[name] = std::move(def);
}

const ProcedureDef* ProcedureRegistry::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

Value ProcedureRegistry::call(const std::string& name, const std::vector<Value>& args) const {
  const ProcedureDef* def = find(name);
  if (!def) raise(ErrorCode::kUnknownProcedure, name);
  if (def->arity != 0 && def->arity != args.size()) {
    raise(ErrorCode::kArityMismatch, name + " expects " + std::to_string(def->arity) + " arguments");
  }
  try {
    return builtins().at(def->builtin).fn(args);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kProcedureFailure) throw;
    raise(ErrorCode::kProcedureFailure, name + ": " + e.what());
  }
}

}  // namespace annodb
