#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "annodb/annotation_store.hpp"
#include "annodb/approval.hpp"
#include "annodb/catalog.hpp"
#include "annodb/dependency.hpp"
#include "annodb/procedures.hpp"

namespace annodb {

inline constexpr int kFormatVersion = 1;

// Everything a database directory holds.
struct Database {
  Catalog catalog;
  AnnotationStore annotations;
  ProcedureRegistry procedures;
  DependencyEngine dependencies;
  ApprovalLog approvals;
  // Delete log: rows removed by DELETE, per table, with their annotations.
  std::map<std::string, std::vector<CapturedRow>> deleted;
};

// Loads a database directory; a missing or empty directory yields an empty
// database. Raises kCorruptFormat or kVersionMismatch.
Database open_or_create(const std::filesystem::path& dir);

// Rewrites the whole directory. Each file is written to a temporary name and
// renamed into place; files of dropped objects are removed.
void save(const Database& db, const std::filesystem::path& dir);

// File-name-safe form of an identifier ('%XX' escapes).
std::string encode_file_name(const std::string& name);

// Bitmap file text: "RLEBM v1" then one "col=<name>;first=..;runs=.." line per column.
std::string write_bitmap_text(const std::map<std::string, std::vector<bool>>& columns);
std::map<std::string, std::vector<bool>> read_bitmap_text(const std::string& text);

}  // namespace annodb
