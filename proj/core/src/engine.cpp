#include "annodb/engine.hpp"

#include <algorithm>

#include "annodb/error.hpp"
#include "annodb/expression.hpp"
#include "annodb/parser.hpp"
#include "annodb/render.hpp"

namespace annodb {

namespace {

constexpr std::string_view kRid = "_rid";
constexpr const char* kOutdatedBody = "<Outdated>derived from a changed value; needs validation</Outdated>";

std::string plural(std::size_t n, const std::string& word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

EvalScope table_row_scope(const Table& t, const Row& row) {
  return EvalScope{[&t, &row](const ast::ColumnRef& ref) -> Value {
                     if (!ref.qualifier.empty() && ref.qualifier != t.name()) {
                       raise(ErrorCode::kUnknownColumn, ref.qualifier + "." + ref.name);
                     }
                     if (ref.name == kRid) return Value(static_cast<std::int64_t>(row.rid));
                     std::optional<std::size_t> i = t.def().column_index(ref.name);
                     if (!i) raise(ErrorCode::kUnknownColumn, t.name() + "." + ref.name);
                     return row.values[*i];
                   },
                   {}};
}

std::size_t column_ordinal(const Table& t, const std::string& column) {
  if (column == kRid) raise(ErrorCode::kBadColumn, "_rid cannot be assigned");
  std::optional<std::size_t> i = t.def().column_index(column);
  if (!i) raise(ErrorCode::kUnknownColumn, t.name() + "." + column);
  return *i;
}

std::vector<std::string> column_names(const TableDef& def) {
  std::vector<std::string> out;
  for (const ColumnSpec& c : def.columns) out.push_back(c.name);
  return out;
}

AnnotationCategory category_of(ast::AnnCategory c) {
  switch (c) {
    case ast::AnnCategory::kComment: return AnnotationCategory::kComment;
    case ast::AnnCategory::kProvenance: return AnnotationCategory::kProvenance;
    case ast::AnnCategory::kSystem: return AnnotationCategory::kSystem;
  }
  return AnnotationCategory::kComment;
}

CellSet row_cells(const std::vector<Rid>& rids, std::size_t width) {
  CellSet out;
  for (Rid r : rids) {
    for (std::size_t c = 0; c < width; ++c) out.insert({r, c});
  }
  return out;
}

// Groups annotation table names by owner. Bare names resolve to the single
// candidate owner that defines them.
std::map<std::string, std::vector<std::string>> group_by_owner(const AnnotationStore& store,
                                                               const std::vector<ast::AnnTableName>& names,
                                                               const std::set<std::string>& candidates) {
  std::map<std::string, std::vector<std::string>> out;
  for (const ast::AnnTableName& n : names) {
    std::string owner = n.owner;
    if (owner.empty()) {
      std::vector<std::string> hits;
      for (const std::string& c : candidates) {
        if (store.has_table(c, n.name)) hits.push_back(c);
      }
      if (hits.empty()) raise(ErrorCode::kUnknownAnnotationTable, n.name);
      if (hits.size() > 1) raise(ErrorCode::kInvalidQuery, "annotation table " + n.name + " is ambiguous; qualify it");
      owner = hits.front();
    }
    if (!store.has_table(owner, n.name)) raise(ErrorCode::kUnknownAnnotationTable, owner + "." + n.name);
    std::vector<std::string>& list = out[owner];
    if (std::find(list.begin(), list.end(), n.name) == list.end()) list.push_back(n.name);
  }
  return out;
}

std::set<std::string> lineage_tables(const AnnotatedRelation& rel) {
  std::set<std::string> out;
  for (const AnnotatedTuple& t : rel.tuples) {
    for (const auto& cells : t.lineage) {
      for (const SourceCell& s : cells) out.insert(s.table);
    }
  }
  return out;
}

std::set<std::string> from_tables(const ast::AnnSelect& s) {
  std::set<std::string> out;
  for (const ast::FromItem& f : s.head.from) out.insert(f.table.name);
  for (const ast::SetOperand& o : s.tail) {
    for (const ast::FromItem& f : o.core.from) out.insert(f.table.name);
  }
  return out;
}

}  // namespace

Engine::Engine(Database db, Clock clock) : db_(std::move(db)), clock_(std::move(clock)) {
  db_.catalog.set_change_hook(
      [this](const std::string& table, std::span<const CellChange> changes) { on_change(table, changes); });
}

QueryContext Engine::query_context() const {
  return QueryContext{db_.catalog, db_.annotations, [this](const std::string& table, const Cell& cell) {
                        const Table& t = db_.catalog.table(table);
                        if (cell.column >= t.def().columns.size()) return false;
                        return db_.dependencies.is_outdated(table, t.def().columns[cell.column].name, cell.rid);
                      }};
}

ExecResult Engine::execute(const ast::Statement& stmt) {
  propagation_ = {};
  current_text_ = render_statement(stmt);
  return std::visit([this](const auto& node) { return exec(node); }, stmt.node);
}

std::vector<ExecResult> Engine::execute_script(std::string_view script) {
  std::vector<ExecResult> out;
  for (const ast::Statement& s : parse_script(script)) out.push_back(execute(s));
  return out;
}

AnnotatedRelation Engine::query(std::string_view select) {
  ast::Statement s = parse_statement(select);
  const auto* q = std::get_if<ast::AnnSelect>(&s.node);
  if (!q) raise(ErrorCode::kInvalidQuery, "expected a SELECT statement");
  return execute_select(query_context(), *q);
}

void Engine::absorb(const PropagationResult& r) {
  propagation_.recomputed.insert(propagation_.recomputed.end(), r.recomputed.begin(), r.recomputed.end());
  propagation_.outdated.insert(propagation_.outdated.end(), r.outdated.begin(), r.outdated.end());
  propagation_.failures.insert(propagation_.failures.end(), r.failures.begin(), r.failures.end());
  ensure_outdated_records();
}

void Engine::on_change(const std::string& table, std::span<const CellChange> changes) {
  absorb(db_.dependencies.on_data_change(db_.catalog, db_.procedures, table, changes));
}

// Outdated cells surface through one SYSTEM record per table; queries attach
// its aid to every cell whose bit is set.
void Engine::ensure_outdated_records() {
  std::set<std::string> tables;
  for (const SourceCell& s : propagation_.outdated) tables.insert(s.table);
  const std::string name(kOutdatedTable);
  for (const std::string& t : tables) {
    if (!db_.annotations.has_table(t, name)) {
      db_.annotations.create_table({t, name, AnnotationCategory::kSystem, {}, {}}, db_.catalog, true);
    }
    if (db_.annotations.table(t, name).records.empty()) db_.annotations.add_system(t, name, kOutdatedBody, {}, clock_.now());
  }
}

std::vector<Rid> Engine::matching_rows(const std::string& table, const std::optional<ast::Expr>& where) const {
  const Table& t = db_.catalog.table(table);
  std::vector<Rid> out;
  for (const auto& [rid, row] : t.rows()) {
    if (!where || eval_condition(*where, table_row_scope(t, row)) == true) out.push_back(rid);
  }
  return out;
}

Engine::DmlOutcome Engine::run_insert(const ast::Insert& ins, const std::string& logged_text, bool unlogged,
                                      bool force) {
  const Table& t = db_.catalog.table(ins.table);
  const TableDef def = t.def();
  std::vector<std::optional<std::size_t>> slots;  // nullopt marks the _rid column
  if (ins.columns.empty()) {
    for (std::size_t i = 0; i < def.columns.size(); ++i) slots.push_back(i);
  } else {
    std::set<std::string> seen;
    for (const std::string& c : ins.columns) {
      if (!seen.insert(c).second) raise(ErrorCode::kInvalidQuery, "column " + c + " listed twice");
      if (c == kRid) {
        slots.push_back(std::nullopt);
      } else {
        std::optional<std::size_t> i = def.column_index(c);
        if (!i) raise(ErrorCode::kUnknownColumn, def.name + "." + c);
        slots.push_back(*i);
      }
    }
  }
  std::vector<std::vector<Value>> fresh;
  std::vector<std::pair<Rid, std::vector<Value>>> restored;
  for (const auto& row : ins.rows) {
    if (row.size() != slots.size()) {
      raise(ErrorCode::kTypeMismatch, "INSERT row has " + std::to_string(row.size()) + " values for " +
                                          std::to_string(slots.size()) + " columns");
    }
    std::vector<Value> values(def.columns.size());
    std::optional<Rid> rid;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i]) {
        values[*slots[i]] = row[i];
      } else {
        if (!row[i].is_int()) raise(ErrorCode::kTypeMismatch, "_rid must be an integer");
        rid = row[i].as_int();
      }
    }
    if (rid) {
      restored.emplace_back(*rid, std::move(values));
    } else {
      fresh.push_back(std::move(values));
    }
  }

  std::int64_t mark = db_.annotations.next_ts_seq();
  DmlOutcome out;
  out.rids = db_.catalog.insert_rows(def.name, fresh);
  for (auto& [rid, values] : restored) {
    if (force && t.contains(rid)) continue;
    db_.catalog.restore_row(def.name, rid, values);
    out.rids.push_back(rid);
    auto it = db_.deleted.find(def.name);
    if (it != db_.deleted.end()) std::erase_if(it->second, [rid = rid](const CapturedRow& r) { return r.rid == rid; });
  }
  for (Rid rid : out.rids) out.captured.push_back({rid, t.find(rid)->values, {}});
  if (unlogged || out.rids.empty()) return out;

  if (const ApprovalScope* scope = db_.approvals.monitoring(def.name, column_names(def))) {
    UpdateLogEntry e;
    e.user = user_;
    e.ts = clock_.now();
    e.table = def.name;
    e.kind = DmlKind::kInsert;
    e.statement = logged_text;
    e.after = out.captured;
    e.inverse = inverse_of_insert(def, e.after);
    e.ann_seq_mark = mark;
    e.approvers = scope->approvers;
    if (scope->is_approver(user_)) {
      e.status = ApprovalStatus::kApproved;
      e.decided_by = user_;
      e.decided_ts = e.ts;
    }
    out.op = db_.approvals.append(std::move(e));
  }
  return out;
}

Engine::DmlOutcome Engine::run_update(const ast::Update& upd, const std::string& logged_text, bool unlogged) {
  const Table& t = db_.catalog.table(upd.table);
  const TableDef def = t.def();
  std::vector<Catalog::ColumnAssignment> assignments;
  std::vector<std::string> assigned;
  for (const ast::Assignment& a : upd.assignments) {
    assignments.push_back({column_ordinal(t, a.column), a.value});
    assigned.push_back(a.column);
  }
  DmlOutcome out;
  out.rids = matching_rows(def.name, upd.where);
  std::set<Rid> matched(out.rids.begin(), out.rids.end());
  std::vector<CellChange> changes =
      db_.catalog.update_cells(def.name, [&](const Row& r) { return matched.count(r.rid) != 0; }, assignments);
  out.changed_cells = changes.size();
  if (unlogged || changes.empty()) return out;

  if (const ApprovalScope* scope = db_.approvals.monitoring(def.name, assigned)) {
    std::map<Rid, std::vector<const CellChange*>> by_row;
    for (const CellChange& c : changes) by_row[c.rid].push_back(&c);
    UpdateLogEntry e;
    for (const auto& [rid, cells] : by_row) {
      CapturedRow after{rid, t.find(rid)->values, {}};
      CapturedRow before = after;
      for (const CellChange* c : cells) before.values[c->column] = c->before;
      e.before.push_back(std::move(before));
      e.after.push_back(std::move(after));
    }
    e.user = user_;
    e.ts = clock_.now();
    e.table = def.name;
    e.kind = DmlKind::kUpdate;
    e.statement = logged_text;
    e.inverse = inverse_of_update(def, e.before, e.after);
    e.ann_seq_mark = db_.annotations.next_ts_seq();
    e.approvers = scope->approvers;
    if (scope->is_approver(user_)) {
      e.status = ApprovalStatus::kApproved;
      e.decided_by = user_;
      e.decided_ts = e.ts;
    }
    out.op = db_.approvals.append(std::move(e));
  }
  return out;
}

Engine::DmlOutcome Engine::run_delete(const ast::Delete& del, const std::string& logged_text, bool unlogged) {
  const Table& t = db_.catalog.table(del.table);
  const TableDef def = t.def();
  DmlOutcome out;
  out.rids = matching_rows(def.name, del.where);
  std::set<Rid> matched(out.rids.begin(), out.rids.end());
  for (Rid rid : out.rids) {
    CapturedRow row{rid, t.find(rid)->values, {}};
    for (const AnnotationTable* at : db_.annotations.tables_of(def.name)) {
      if (at->def.category == AnnotationCategory::kSystem) continue;
      for (const AnnotationRecord& r : at->records) {
        for (std::size_t c = 0; c < def.columns.size(); ++c) {
          if (any_contains(r.rects, Cell{rid, c})) {
            row.annotations.push_back(r.aid);
            break;
          }
        }
      }
    }
    std::sort(row.annotations.begin(), row.annotations.end());
    out.captured.push_back(std::move(row));
  }
  db_.catalog.delete_rows(def.name, [&](const Row& r) { return matched.count(r.rid) != 0; });
  if (unlogged || out.rids.empty()) return out;

  std::vector<CapturedRow>& log = db_.deleted[def.name];
  log.insert(log.end(), out.captured.begin(), out.captured.end());
  if (const ApprovalScope* scope = db_.approvals.monitoring(def.name, column_names(def))) {
    UpdateLogEntry e;
    e.user = user_;
    e.ts = clock_.now();
    e.table = def.name;
    e.kind = DmlKind::kDelete;
    e.statement = logged_text;
    e.before = out.captured;
    e.inverse = inverse_of_delete(def, e.before);
    e.ann_seq_mark = db_.annotations.next_ts_seq();
    e.approvers = scope->approvers;
    if (scope->is_approver(user_)) {
      e.status = ApprovalStatus::kApproved;
      e.decided_by = user_;
      e.decided_ts = e.ts;
    }
    out.op = db_.approvals.append(std::move(e));
  }
  return out;
}

namespace {

std::string logged_suffix(const std::optional<std::int64_t>& op, const ApprovalLog& log) {
  if (!op) return {};
  return "; logged as operation " + std::to_string(*op) + " (" + std::string(status_name(log.entry(*op).status)) + ")";
}

}  // namespace

ExecResult Engine::exec(const ast::CreateTable& s) {
  TableDef def{s.name, {}};
  for (const ast::ColumnDef& c : s.columns) def.columns.push_back({c.name, c.type});
  db_.catalog.create_table(std::move(def));
  return {"table " + s.name + " created", std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::Insert& s) {
  DmlOutcome o = run_insert(s, current_text_, false, false);
  return {plural(o.rids.size(), "row") + " inserted" + logged_suffix(o.op, db_.approvals), std::nullopt, {}, true, o.op};
}

ExecResult Engine::exec(const ast::Update& s) {
  DmlOutcome o = run_update(s, current_text_, false);
  ExecResult r{plural(o.rids.size(), "row") + " updated (" + plural(o.changed_cells, "cell") + " changed)" +
                   logged_suffix(o.op, db_.approvals),
               std::nullopt, {}, true, o.op};
  if (!propagation_.recomputed.empty() || !propagation_.outdated.empty()) {
    r.message += "; " + plural(propagation_.recomputed.size(), "dependent cell") + " recomputed, " +
                 std::to_string(propagation_.outdated.size()) + " marked outdated";
  }
  r.warnings = propagation_.failures;
  return r;
}

ExecResult Engine::exec(const ast::Delete& s) {
  DmlOutcome o = run_delete(s, current_text_, false);
  return {plural(o.rids.size(), "row") + " deleted" + logged_suffix(o.op, db_.approvals), std::nullopt, {}, true, o.op};
}

ExecResult Engine::exec(const ast::AnnSelect& s) {
  ExecResult r;
  r.relation = execute_select(query_context(), s);
  return r;
}

ExecResult Engine::exec(const ast::CreateAnnotationTable& s) {
  db_.annotations.create_table({s.owner, s.name, category_of(s.category), s.required_tags, s.writers}, db_.catalog);
  return {"annotation table " + s.owner + "." + s.name + " created", std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::DropAnnotationTable& s) {
  std::size_t n = db_.annotations.drop_table(s.owner, s.name);
  return {"annotation table " + s.owner + "." + s.name + " dropped (" + plural(n, "annotation") + " removed)",
          std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::AddAnnotation& s) {
  std::map<std::string, CellSet> targets;
  std::map<std::string, std::vector<std::string>> names;
  std::optional<std::int64_t> op;
  auto check_all = [&]() {
    for (const auto& [owner, list] : names) {
      for (const std::string& n : list) check_annotation_allowed(db_.annotations.table(owner, n).def, s.body, user_);
    }
  };
  auto dml_names = [&](const std::string& table) {
    for (const ast::AnnTableName& n : s.tables) {
      if (!n.owner.empty() && n.owner != table) {
        raise(ErrorCode::kInvalidQuery, "annotation table " + n.owner + "." + n.name + " is not on " + table);
      }
    }
    names = group_by_owner(db_.annotations, s.tables, {table});
    check_all();
  };

  if (const auto* q = std::get_if<ast::AnnSelect>(&s.target)) {
    AnnotatedRelation rel = execute_select(query_context(), *q);
    std::set<std::string> candidates = from_tables(*q);
    std::set<std::string> lineage = lineage_tables(rel);
    candidates.insert(lineage.begin(), lineage.end());
    names = group_by_owner(db_.annotations, s.tables, candidates);
    check_all();
    for (const auto& [owner, list] : names) {
      targets[owner] = target_cells(rel, owner);
      if (targets[owner].empty()) raise(ErrorCode::kEmptyTarget, "the query selects no cells of " + owner);
    }
  } else if (const auto* ins = std::get_if<ast::Insert>(&s.target)) {
    dml_names(ins->table);
    DmlOutcome o = run_insert(*ins, current_text_, false, false);
    op = o.op;
    targets[ins->table] = row_cells(o.rids, db_.catalog.table(ins->table).def().columns.size());
  } else if (const auto* upd = std::get_if<ast::Update>(&s.target)) {
    dml_names(upd->table);
    const Table& t = db_.catalog.table(upd->table);
    std::vector<Rid> rows = matching_rows(upd->table, upd->where);
    if (rows.empty()) raise(ErrorCode::kEmptyTarget, "the UPDATE matches no rows");
    std::vector<std::size_t> cols;
    for (const ast::Assignment& a : upd->assignments) cols.push_back(column_ordinal(t, a.column));
    DmlOutcome o = run_update(*upd, current_text_, false);
    op = o.op;
    CellSet& cells = targets[upd->table];
    for (Rid r : rows) {
      for (std::size_t c : cols) cells.insert({r, c});
    }
  } else {
    const auto& del = std::get<ast::Delete>(s.target);
    dml_names(del.table);
    if (matching_rows(del.table, del.where).empty()) raise(ErrorCode::kEmptyTarget, "the DELETE matches no rows");
    DmlOutcome o = run_delete(del, current_text_, false);
    op = o.op;
    targets[del.table] = row_cells(o.rids, db_.catalog.table(del.table).def().columns.size());
  }

  std::size_t records = 0, regions = 0, cells = 0;
  std::vector<Aid> added;
  std::string ts = clock_.now();
  for (const auto& [owner, list] : names) {
    std::vector<Aid> aids = db_.annotations.add(owner, list, s.body, targets[owner], user_, ts);
    records += aids.size();
    regions += db_.annotations.record(aids.front())->rects.size();
    cells += targets[owner].size();
    added.insert(added.end(), aids.begin(), aids.end());
  }
  if (const auto* del = std::get_if<ast::Delete>(&s.target)) {
    // The annotation describes the deletion, so it travels with the delete log.
    for (CapturedRow& r : db_.deleted[del->table]) {
      if (targets[del->table].count(Cell{r.rid, 0})) r.annotations.insert(r.annotations.end(), added.begin(), added.end());
    }
  }
  if (op) {
    UpdateLogEntry& e = db_.approvals.mutable_entry(*op);
    e.attached.insert(e.attached.end(), added.begin(), added.end());
  }
  std::string msg = plural(records, "annotation") + " added (" + plural(regions, "region") + ", " +
                    plural(cells, "cell") + ")" + logged_suffix(op, db_.approvals);
  return {msg, std::nullopt, {}, true, op};
}

ExecResult Engine::archive_or_restore(const std::vector<ast::AnnTableName>& tables,
                                      const std::optional<ast::TimeRange>& range, const ast::AnnSelect& target,
                                      bool archive) {
  std::optional<TimeWindow> window;
  if (range) {
    window = TimeWindow{range->lo, range->hi};
    window->validate();
  }
  AnnotatedRelation rel = execute_select(query_context(), target);
  std::map<std::string, std::vector<std::string>> names = group_by_owner(db_.annotations, tables, from_tables(target));
  std::size_t n = 0;
  for (const auto& [owner, list] : names) {
    const Table& t = db_.catalog.table(owner);
    CellSet cells = target_cells(rel, owner);
    n += archive ? db_.annotations.archive(t, list, cells, window) : db_.annotations.restore(t, list, cells, window);
  }
  return {plural(n, "annotation") + (archive ? " archived" : " restored"), std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::ArchiveAnnotation& s) { return archive_or_restore(s.tables, s.range, s.target, true); }

ExecResult Engine::exec(const ast::RestoreAnnotation& s) { return archive_or_restore(s.tables, s.range, s.target, false); }

ExecResult Engine::exec(const ast::VacuumAnnotations&) {
  AnnotatedRelation rel;
  rel.columns = {{"aid", {}, {}}, {"owner", {}, {}}, {"annotation_table", {}, {}}};
  std::vector<const AnnotationRecord*> orphans = db_.annotations.orphaned(db_.catalog);
  for (const AnnotationRecord* r : orphans) {
    rel.tuples.push_back({{Value(static_cast<std::int64_t>(r->aid)), Value(r->owner), Value(r->table)},
                          std::vector<std::set<Aid>>(3),
                          std::vector<std::set<SourceCell>>(3),
                          {}});
  }
  return {plural(orphans.size(), "orphaned annotation") + " found", std::move(rel), {}, false, std::nullopt};
}

ExecResult Engine::exec(const ast::CreateDependencyRule& s) {
  DependencyRule rule{s.id,   s.source_table, s.source_columns, s.target_table, s.target_columns,
                      s.link, s.procedure,    s.executable,     s.invertible,   {}};
  std::vector<std::string> warnings = db_.dependencies.add_rule(db_.catalog, db_.procedures, std::move(rule));
  return {"rule " + s.id + " created", std::nullopt, std::move(warnings), true, std::nullopt};
}

ExecResult Engine::exec(const ast::DropDependencyRule& s) {
  db_.dependencies.drop_rule(s.id);
  return {"rule " + s.id + " dropped", std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::AddDependencyEdge& s) {
  const Table& st = db_.catalog.table(s.source_table);
  const Table& tt = db_.catalog.table(s.target_table);
  std::size_t sc = column_ordinal(st, s.source_column);
  std::size_t tc = column_ordinal(tt, s.target_column);
  if (s.executable && !db_.procedures.contains(s.procedure)) raise(ErrorCode::kUnknownProcedure, s.procedure);
  std::vector<Rid> sources = matching_rows(s.source_table, s.source_where);
  std::vector<Rid> targets = matching_rows(s.target_table, s.target_where);
  if (sources.empty() || targets.empty()) raise(ErrorCode::kEmptyTarget, "the edge matches no source or no target row");
  for (Rid a : sources) {
    for (Rid b : targets) {
      if (s.source_table == s.target_table && a == b && sc == tc) raise(ErrorCode::kCycleDetected, "edge onto itself");
      db_.dependencies.add_edge({{s.source_table, {a, sc}}, {s.target_table, {b, tc}}, s.procedure, s.executable});
    }
  }
  return {plural(sources.size() * targets.size(), "dependency edge") + " added", std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::Validate& s) {
  const Table& t = db_.catalog.table(s.table);
  for (const std::string& c : s.columns) column_ordinal(t, c);
  std::vector<Rid> rows = matching_rows(s.table, s.where);
  if (!s.assignments.empty()) {
    std::vector<Catalog::ColumnAssignment> assignments;
    for (const ast::Assignment& a : s.assignments) assignments.push_back({column_ordinal(t, a.column), a.value});
    std::set<Rid> matched(rows.begin(), rows.end());
    db_.catalog.update_cells(s.table, [&](const Row& r) { return matched.count(r.rid) != 0; }, assignments);
  }
  std::size_t cleared = 0;
  for (const std::string& c : s.columns) cleared += db_.dependencies.validate_cells(s.table, c, rows);
  return {plural(cleared, "cell") + " validated", std::nullopt, propagation_.failures, true, std::nullopt};
}

ExecResult Engine::exec(const ast::RegisterProcedure& s) {
  bool existed = db_.procedures.contains(s.name);
  db_.procedures.define({s.name, s.builtin, s.arity});
  ExecResult r{"procedure " + s.name + " registered", std::nullopt, {}, true, std::nullopt};
  if (existed) {
    absorb(db_.dependencies.on_procedure_change(db_.catalog, db_.procedures, s.name));
    r.message += " (" + plural(propagation_.recomputed.size(), "cell") + " recomputed, " +
                 std::to_string(propagation_.outdated.size()) + " marked outdated)";
    r.warnings = propagation_.failures;
  }
  return r;
}

ExecResult Engine::exec(const ast::StartContentApproval& s) {
  db_.approvals.start(db_.catalog, {s.table, s.columns, s.approvers});
  return {"content approval started on " + s.table, std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::EndContentApproval& s) {
  db_.approvals.end(s.table);
  return {"content approval ended on " + s.table, std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::Approve& s) {
  UpdateLogEntry& e = db_.approvals.check_decision(s.op_id, user_);
  e.status = ApprovalStatus::kApproved;
  e.decided_by = user_;
  e.decided_ts = clock_.now();
  return {"operation " + std::to_string(s.op_id) + " approved", std::nullopt, {}, true, std::nullopt};
}

ExecResult Engine::exec(const ast::Disapprove& s) {
  UpdateLogEntry entry = db_.approvals.check_decision(s.op_id, user_);
  const Table& t = db_.catalog.table(entry.table);
  std::vector<std::string> conflicts = inverse_conflicts(entry, t);
  if (!conflicts.empty() && !s.force) {
    std::string reasons;
    for (const std::string& c : conflicts) reasons += (reasons.empty() ? "" : "; ") + c;
    raise(ErrorCode::kInverseConflict, "operation " + std::to_string(s.op_id) + ": " + reasons +
                                           " (use DISAPPROVE " + std::to_string(s.op_id) + " FORCE)");
  }
  for (const ast::Statement& inv : parse_script(entry.inverse)) {
    if (const auto* ins = std::get_if<ast::Insert>(&inv.node)) {
      run_insert(*ins, {}, true, s.force);
    } else if (const auto* upd = std::get_if<ast::Update>(&inv.node)) {
      run_update(*upd, {}, true);
    } else if (const auto* del = std::get_if<ast::Delete>(&inv.node)) {
      run_delete(*del, {}, true);
    } else {
      raise(ErrorCode::kCorruptFormat, "inverse of operation " + std::to_string(s.op_id) + " is not DML");
    }
  }
  std::size_t archived = 0;
  if (entry.kind == DmlKind::kInsert) {
    // Annotations made on the rejected rows after the insert go with them.
    std::set<Rid> rows;
    for (const CapturedRow& r : entry.after) rows.insert(r.rid);
    std::vector<Aid> doomed;
    for (const AnnotationTable* at : db_.annotations.tables_of(entry.table)) {
      if (at->def.category == AnnotationCategory::kSystem) continue;
      for (const AnnotationRecord& r : at->records) {
        if (r.archived || r.ts_seq < entry.ann_seq_mark) continue;
        bool hit = std::any_of(r.rects.begin(), r.rects.end(), [&](const Rect& x) {
          auto it = rows.lower_bound(x.rid_lo);
          return it != rows.end() && *it <= x.rid_hi;
        });
        if (hit) doomed.push_back(r.aid);
      }
    }
    for (Aid a : doomed) archived += db_.annotations.set_archived(a, true) ? 1 : 0;
  } else if (entry.kind == DmlKind::kUpdate) {
    for (Aid a : entry.attached) archived += db_.annotations.set_archived(a, true) ? 1 : 0;
  }
  UpdateLogEntry& e = db_.approvals.mutable_entry(s.op_id);
  e.status = ApprovalStatus::kDisapproved;
  e.decided_by = user_;
  e.decided_ts = clock_.now();
  std::string msg = "operation " + std::to_string(s.op_id) + " disapproved";
  if (archived) msg += " (" + plural(archived, "annotation") + " archived)";
  ExecResult r{msg, std::nullopt, propagation_.failures, true, std::nullopt};
  if (!conflicts.empty()) r.warnings.insert(r.warnings.begin(), conflicts.begin(), conflicts.end());
  return r;
}

ExecResult Engine::exec(const ast::ListPending& s) {
  AnnotatedRelation rel;
  for (const char* c : {"op_id", "user", "ts", "table", "kind", "statement", "inverse"}) rel.columns.push_back({c, {}, {}});
  std::vector<const UpdateLogEntry*> pending = db_.approvals.pending(s.approver);
  for (const UpdateLogEntry* e : pending) {
    AnnotatedTuple t;
    t.values = {Value(static_cast<std::int64_t>(e->op_id)), Value(e->user), Value(e->ts), Value(e->table),
                Value(std::string(dml_kind_name(e->kind))), Value(e->statement), Value(e->inverse)};
    t.anns.resize(t.values.size());
    t.lineage.resize(t.values.size());
    rel.tuples.push_back(std::move(t));
  }
  return {plural(pending.size(), "pending operation"), std::move(rel), {}, false, std::nullopt};
}

ExecResult Engine::exec(const ast::SetUser& s) {
  user_ = s.name;
  return {"user set to " + s.name, std::nullopt, {}, false, std::nullopt};
}

}  // namespace annodb
