#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annodb/annotation_store.hpp"
#include "annodb/catalog.hpp"

namespace annodb {

struct ApprovalScope {
  std::string table;
  std::vector<std::string> columns;  // empty = every column
  std::vector<std::string> approvers;

  bool covers(const std::string& column) const;
  bool is_approver(const std::string& user) const;
  bool operator==(const ApprovalScope&) const = default;
};

enum class ApprovalStatus { kPending, kApproved, kDisapproved };
std::string_view status_name(ApprovalStatus status);
std::optional<ApprovalStatus> parse_status(std::string_view name);

enum class DmlKind { kInsert, kUpdate, kDelete };
std::string_view dml_kind_name(DmlKind kind);
std::optional<DmlKind> parse_dml_kind(std::string_view name);

// A row image with the annotations attached to it at capture time.
struct CapturedRow {
  Rid rid = 0;
  std::vector<Value> values;
  std::vector<Aid> annotations;
  bool operator==(const CapturedRow&) const = default;
};

struct UpdateLogEntry {
  std::int64_t op_id = 0;
  std::string user;
  std::string ts;
  std::string table;
  DmlKind kind = DmlKind::kInsert;
  std::string statement;
  std::string inverse;
  std::vector<CapturedRow> before;  // DELETE: removed rows; UPDATE: changed rows before
  std::vector<CapturedRow> after;   // INSERT: new rows; UPDATE: changed rows after
  std::int64_t ann_seq_mark = 0;    // first annotation timestamp issued after the statement began
  std::vector<Aid> attached;        // annotations added together with the statement
  std::vector<std::string> approvers;
  ApprovalStatus status = ApprovalStatus::kPending;
  std::string decided_by;
  std::string decided_ts;
  bool operator==(const UpdateLogEntry&) const = default;
};

// Monitoring scopes and the append-only update log.
class ApprovalLog {
 public:
  // Raises kAlreadyMonitored, kUnknownTable, kUnknownColumn, kInvalidQuery (no approvers).
  void start(const Catalog& catalog, ApprovalScope scope);
  // Raises kNotMonitored.
  void end(const std::string& table);
  const ApprovalScope* scope(const std::string& table) const;
  const std::map<std::string, ApprovalScope>& scopes() const { return scopes_; }

  // The scope a statement over `columns` of `table` falls under, if any.
  const ApprovalScope* monitoring(const std::string& table, const std::vector<std::string>& columns) const;

  std::int64_t append(UpdateLogEntry entry);
  const std::vector<UpdateLogEntry>& entries() const { return entries_; }
  // Raises kUnknownOp.
  const UpdateLogEntry& entry(std::int64_t op_id) const;
  UpdateLogEntry& mutable_entry(std::int64_t op_id);

  // Raises kUnknownOp, kNotPending, kNotApprover.
  UpdateLogEntry& check_decision(std::int64_t op_id, const std::string& user);

  std::vector<const UpdateLogEntry*> pending(const std::string& approver = {}) const;

  std::int64_t next_op_id() const { return next_op_id_; }
  void load_scope(ApprovalScope scope);
  void load_entry(UpdateLogEntry entry);
  void set_next_op_id(std::int64_t id) { next_op_id_ = id; }

 private:
  std::map<std::string, ApprovalScope> scopes_;
  std::vector<UpdateLogEntry> entries_;
  std::int64_t next_op_id_ = 1;
};

// Canonical A-SQL that undoes a statement, built from captured images. Rows
// are addressed through the `_rid` pseudo-column.
std::string inverse_of_insert(const TableDef& def, const std::vector<CapturedRow>& inserted);
std::string inverse_of_update(const TableDef& def, const std::vector<CapturedRow>& before,
                              const std::vector<CapturedRow>& after);
std::string inverse_of_delete(const TableDef& def, const std::vector<CapturedRow>& deleted);

// Human-readable reasons the inverse of `entry` would clobber later changes;
// empty when the current table still matches the statement's post-image.
std::vector<std::string> inverse_conflicts(const UpdateLogEntry& entry, const Table& table);

}  // namespace annodb
