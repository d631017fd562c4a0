#include "annodb/approval.hpp"

#include <algorithm>

#include "annodb/error.hpp"
#include "annodb/render.hpp"

namespace annodb {

bool ApprovalScope::covers(const std::string& column) const {
  return columns.empty() || std::find(columns.begin(), columns.end(), column) != columns.end();
}

bool ApprovalScope::is_approver(const std::string& user) const {
  return std::find(approvers.begin(), approvers.end(), user) != approvers.end();
}

std::string_view status_name(ApprovalStatus status) {
  switch (status) {
    case ApprovalStatus::kPending: return "PENDING";
    case ApprovalStatus::kApproved: return "APPROVED";
    case ApprovalStatus::kDisapproved: return "DISAPPROVED";
  }
  return "?";
}

std::optional<ApprovalStatus> parse_status(std::string_view name) {
  for (ApprovalStatus s : {ApprovalStatus::kPending, ApprovalStatus::kApproved, ApprovalStatus::kDisapproved}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view dml_kind_name(DmlKind kind) {
  switch (kind) {
    case DmlKind::kInsert: return "INSERT";
    case DmlKind::kUpdate: return "UPDATE";
    case DmlKind::kDelete: return "DELETE";
  }
  return "?";
}

std::optional<DmlKind> parse_dml_kind(std::string_view name) {
  for (DmlKind k : {DmlKind::kInsert, DmlKind::kUpdate, DmlKind::kDelete}) {
    if (dml_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

void ApprovalLog::start(const Catalog& catalog, ApprovalScope scope) {
  const Table& t = catalog.table(scope.table);
  if (scopes_.count(scope.table)) raise(ErrorCode::kAlreadyMonitored, scope.table);
  for (const std::string& c : scope.columns) {
    if (!t.def().column_index(c)) raise(ErrorCode::kUnknownColumn, scope.table + "." + c);
  }
  if (scope.approvers.empty()) raise(ErrorCode::kInvalidQuery, "approval needs at least one approver");
  std::string name = scope.table;
  scopes_.emplace(std::move(name), std::move(scope));
}

void ApprovalLog::end(const std::string& table) {
  if (!scopes_.erase(table)) raise(ErrorCode::kNotMonitored, table);
}

const ApprovalScope* ApprovalLog::scope(const std::string& table) const {
  auto it = scopes_.find(table);
  return it == scopes_.end() ? nullptr : &it->second;
}

const ApprovalScope* ApprovalLog::monitoring(const std::string& table, const std::vector<std::string>& columns) const {
  const ApprovalScope* s = scope(table);
  if (!s) return nullptr;
  for (const std::string& c : columns) {
    if (s->covers(c)) return s;
  }
  return nullptr;
}

std::int64_t ApprovalLog::append(UpdateLogEntry entry) {
  entry.op_id = next_op_id_++;
  entries_.push_back(std::move(entry));
  return entries_.back().op_id;
}

const UpdateLogEntry& ApprovalLog::entry(std::int64_t op_id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const UpdateLogEntry& e) { return e.op_id == op_id; });
  if (it == entries_.end()) raise(ErrorCode::kUnknownOp, std::to_string(op_id));
  return *it;
}

UpdateLogEntry& ApprovalLog::mutable_entry(std::int64_t op_id) {
  return const_cast<UpdateLogEntry&>(std::as_const(*this).entry(op_id));
}

UpdateLogEntry& ApprovalLog::check_decision(std::int64_t op_id, const std::string& user) {
  UpdateLogEntry& e = mutable_entry(op_id);
  if (e.status != ApprovalStatus::kPending) {
    raise(ErrorCode::kNotPending, "operation " + std::to_string(op_id) + " is " + std::string(status_name(e.status)));
  }
  if (std::find(e.approvers.begin(), e.approvers.end(), user) == e.approvers.end()) {
    raise(ErrorCode::kNotApprover, user + " may not decide operation " + std::to_string(op_id));
  }
  return e;
}

std::vector<const UpdateLogEntry*> ApprovalLog::pending(const std::string& approver) const {
  std::vector<const UpdateLogEntry*> out;
  for (const UpdateLogEntry& e : entries_) {
    if (e.status != ApprovalStatus::kPending) continue;
    if (!approver.empty() && std::find(e.approvers.begin(), e.approvers.end(), approver) == e.approvers.end()) continue;
    out.push_back(&e);
  }
  return out;
}

void ApprovalLog::load_scope(ApprovalScope scope) {
  std::string name = scope.table;
  if (!scopes_.emplace(std::move(name), std::move(scope)).second) {
    raise(ErrorCode::kCorruptFormat, "duplicate approval scope");
  }
}

void ApprovalLog::load_entry(UpdateLogEntry entry) {
  if (!entries_.empty() && entry.op_id <= entries_.back().op_id) {
    raise(ErrorCode::kCorruptFormat, "approval log op ids must increase");
  }
  entries_.push_back(std::move(entry));
}

namespace {

ast::Expr rid_equals(Rid rid) {
  return ast::compare(ast::CompareOp::kEq, ast::column("_rid"), ast::literal(Value(static_cast<std::int64_t>(rid))));
}

}  // namespace

std::string inverse_of_insert(const TableDef& def, const std::vector<CapturedRow>& inserted) {
  std::string out;
  for (const CapturedRow& r : inserted) {
    if (!out.empty()) out += "\n";
    out += render_statement(ast::Statement{ast::Delete{def.name, rid_equals(r.rid)}});
  }
  return out;
}

std::string inverse_of_update(const TableDef& def, const std::vector<CapturedRow>& before,
                              const std::vector<CapturedRow>& after) {
  std::string out;
  for (std::size_t i = 0; i < before.size(); ++i) {
    ast::Update u{def.name, {}, rid_equals(before[i].rid)};
    for (std::size_t c = 0; c < def.columns.size(); ++c) {
      if (i < after.size() && before[i].values[c] == after[i].values[c]) continue;
      u.assignments.push_back({def.columns[c].name, before[i].values[c]});
    }
    if (u.assignments.empty()) continue;
    if (!out.empty()) out += "\n";
    out += render_statement(ast::Statement{std::move(u)});
  }
  return out;
}

std::string inverse_of_delete(const TableDef& def, const std::vector<CapturedRow>& deleted) {
  if (deleted.empty()) return {};
  ast::Insert ins{def.name, {"_rid"}, {}};
  for (const ColumnSpec& c : def.columns) ins.columns.push_back(c.name);
  for (const CapturedRow& r : deleted) {
    std::vector<Value> row{Value(static_cast<std::int64_t>(r.rid))};
    row.insert(row.end(), r.values.begin(), r.values.end());
    ins.rows.push_back(std::move(row));
  }
  return render_statement(ast::Statement{std::move(ins)});
}

std::vector<std::string> inverse_conflicts(const UpdateLogEntry& entry, const Table& table) {
  std::vector<std::string> out;
  auto rid_text = [](Rid rid) { return "row " + std::to_string(rid); };
  switch (entry.kind) {
    case DmlKind::kInsert:
    case DmlKind::kUpdate:
      for (const CapturedRow& r : entry.after) {
        const Row* row = table.find(r.rid);
        if (!row) {
          out.push_back(rid_text(r.rid) + " was deleted since");
        } else if (row->values != r.values) {
          out.push_back(rid_text(r.rid) + " was modified since");
        }
      }
      break;
    case DmlKind::kDelete:
      for (const CapturedRow& r : entry.before) {
        if (table.contains(r.rid)) out.push_back(rid_text(r.rid) + " is live again");
      }
      break;
  }
  return out;
}

}  // namespace annodb
