#include "annodb/query.hpp"

#include <algorithm>
#include <map>

#include "annodb/error.hpp"
#include "annodb/expression.hpp"
#include "annodb/render.hpp"

namespace annodb {

namespace {

constexpr std::string_view kRid = "_rid";

struct ValuesLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      int c = compare_total(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

std::string describe(const ast::ColumnRef& ref) {
  return ref.qualifier.empty() ? ref.name : ref.qualifier + "." + ref.name;
}

Value column_value(const AnnotatedRelation& rel, const AnnotatedTuple& t, const ast::ColumnRef& ref) {
  if (ref.name == kRid) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < rel.bindings.size(); ++i) {
      if (!ref.qualifier.empty() && rel.bindings[i] != ref.qualifier) continue;
      if (found) raise(ErrorCode::kInvalidQuery, "ambiguous column " + describe(ref));
      found = i;
    }
    if (!found || *found >= t.row_ids.size()) raise(ErrorCode::kUnknownColumn, describe(ref));
    return Value(static_cast<std::int64_t>(t.row_ids[*found]));
  }
  return t.values[rel.resolve(ref)];
}

EvalScope row_scope(const AnnotatedRelation& rel, const AnnotatedTuple& t) {
  return EvalScope{[&rel, &t](const ast::ColumnRef& ref) { return column_value(rel, t, ref); }, {}};
}

const AnnotationRecord& record_of(const QueryContext& ctx, Aid aid) {
  const AnnotationRecord* r = ctx.annotations.record(aid);
  if (!r) raise(ErrorCode::kInvalidQuery, "dangling annotation a" + std::to_string(aid));
  return *r;
}

bool exists_match(const QueryContext& ctx, const std::set<Aid>& aids, const ast::AnnExpr& cond) {
  return eval_ann_condition(cond, [&](const ast::AnnAtom& atom) {
    return std::any_of(aids.begin(), aids.end(),
                       [&](Aid aid) { return ann_atom_matches(atom, record_of(ctx, aid)); });
  });
}

std::set<Aid> all_anns(const AnnotatedTuple& t) {
  std::set<Aid> out;
  for (const auto& s : t.anns) out.insert(s.begin(), s.end());
  return out;
}

// Which annotations each FROM item loads.
struct AnnScope {
  std::set<std::string> tables;
  bool outdated = false;
};

std::vector<AnnScope> resolve_annotation_clause(const QueryContext& ctx, const std::vector<ast::FromItem>& from,
                                                const std::optional<ast::AnnotationClause>& clause, bool lenient) {
  std::vector<AnnScope> scopes(from.size());
  if (!clause) return scopes;
  const std::string outdated_name(kOutdatedTable);
  if (clause->all) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      for (const AnnotationTable* t : ctx.annotations.tables_of(from[i].table.name)) {
        scopes[i].tables.insert(t->def.name);
      }
      scopes[i].outdated = true;
    }
    return scopes;
  }
  for (const ast::AnnTableName& n : clause->tables) {
    bool matched = false;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const ast::TableRef& ref = from[i].table;
      if (!n.owner.empty() && n.owner != ref.binding() && n.owner != ref.name) continue;
      if (n.name == outdated_name) {
        scopes[i].outdated = true;
        matched = true;
      } else if (ctx.annotations.has_table(ref.name, n.name)) {
        scopes[i].tables.insert(n.name);
        matched = true;
      }
    }
    if (!matched && !lenient && n.name != outdated_name) {
      raise(ErrorCode::kUnknownAnnotationTable, n.owner.empty() ? n.name : n.owner + "." + n.name);
    }
  }
  return scopes;
}

AnnotatedRelation scan_table(const QueryContext& ctx, const ast::TableRef& ref, const AnnScope& scope) {
  const Table& table = ctx.catalog.table(ref.name);
  AnnotatedRelation rel;
  for (const ColumnSpec& c : table.def().columns) rel.columns.push_back({c.name, ref.binding(), table.name()});
  rel.bindings.push_back(ref.binding());

  std::map<Cell, std::set<Aid>> cell_anns;
  for (const std::string& name : scope.tables) {
    for (const AnnotationRecord& r : ctx.annotations.table(table.name(), name).records) {
      if (r.archived) continue;
      for (const Cell& c : expand_live(r.rects, table)) cell_anns[c].insert(r.aid);
    }
  }
  std::size_t width = table.def().columns.size();
  for (const auto& [rid, row] : table.rows()) {
    AnnotatedTuple t;
    t.values = row.values;
    t.anns.resize(width);
    t.lineage.resize(width);
    t.row_ids.push_back(rid);
    for (std::size_t c = 0; c < width; ++c) {
      auto it = cell_anns.find(Cell{rid, c});
      if (it != cell_anns.end()) t.anns[c] = it->second;
      t.lineage[c].insert(SourceCell{table.name(), Cell{rid, c}});
    }
    rel.tuples.push_back(std::move(t));
  }
  if (scope.outdated) rel = outdated_overlay(ctx, std::move(rel), std::set<std::string>{table.name()});
  return rel;
}

AnnotatedRelation cross(const AnnotatedRelation& a, const AnnotatedRelation& b) {
  AnnotatedRelation out;
  out.columns = a.columns;
  out.columns.insert(out.columns.end(), b.columns.begin(), b.columns.end());
  out.bindings = a.bindings;
  out.bindings.insert(out.bindings.end(), b.bindings.begin(), b.bindings.end());
  for (const AnnotatedTuple& x : a.tuples) {
    for (const AnnotatedTuple& y : b.tuples) {
      AnnotatedTuple t = x;
      t.values.insert(t.values.end(), y.values.begin(), y.values.end());
      t.anns.insert(t.anns.end(), y.anns.begin(), y.anns.end());
      t.lineage.insert(t.lineage.end(), y.lineage.begin(), y.lineage.end());
      t.row_ids.insert(t.row_ids.end(), y.row_ids.begin(), y.row_ids.end());
      out.tuples.push_back(std::move(t));
    }
  }
  return out;
}

AnnotatedRelation scan(const QueryContext& ctx, const std::vector<ast::FromItem>& from,
                       const std::vector<AnnScope>& scopes) {
  if (from.empty()) {
    AnnotatedRelation unit;
    unit.tuples.push_back({});
    return unit;
  }
  std::set<std::string> seen;
  for (const ast::FromItem& f : from) {
    if (!seen.insert(f.table.binding()).second) {
      raise(ErrorCode::kInvalidQuery, "duplicate table binding " + f.table.binding());
    }
  }
  AnnotatedRelation rel = scan_table(ctx, from[0].table, scopes[0]);
  for (std::size_t i = 1; i < from.size(); ++i) {
    rel = cross(rel, scan_table(ctx, from[i].table, scopes[i]));
    if (from[i].join_on) rel = select_where(rel, *from[i].join_on);
  }
  return rel;
}

// Columns an expression reads; `all` is set for COUNT(*).
void referenced_columns(const AnnotatedRelation& rel, const ast::Expr& e, std::set<std::size_t>& out, bool& all) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ast::ColumnRef>) {
          if (node.name != kRid) out.insert(rel.resolve(node));
        } else if constexpr (std::is_same_v<T, ast::Aggregate>) {
          if (!node.argument) {
            all = true;
          } else if (node.argument->name != kRid) {
            out.insert(rel.resolve(*node.argument));
          }
        } else if constexpr (std::is_same_v<T, ast::Comparison> || std::is_same_v<T, ast::Logical>) {
          referenced_columns(rel, *node.lhs, out, all);
          referenced_columns(rel, *node.rhs, out, all);
        } else if constexpr (std::is_same_v<T, ast::Not> || std::is_same_v<T, ast::IsNull>) {
          referenced_columns(rel, *node.operand, out, all);
        }
      },
      e.node);
}

// One output column of a projection.
struct ProjectedItem {
  OutputColumn column;
  ast::Expr expr;
};

std::vector<ProjectedItem> expand_items(const AnnotatedRelation& rel, const std::vector<ast::SelectItem>& items) {
  std::vector<ProjectedItem> out;
  for (const ast::SelectItem& item : items) {
    if (const auto* star = std::get_if<ast::Star>(&item.item)) {
      bool any = false;
      for (const OutputColumn& c : rel.columns) {
        if (!star->qualifier.empty() && c.qualifier != star->qualifier && c.table != star->qualifier) continue;
        out.push_back({c, ast::column(c.qualifier, c.name)});
        any = true;
      }
      if (!any && !star->qualifier.empty()) raise(ErrorCode::kUnknownTable, star->qualifier);
      continue;
    }
    const ast::Expr& e = std::get<ast::Expr>(item.item);
    ProjectedItem p{{}, e};
    if (const auto* ref = std::get_if<ast::ColumnRef>(&e.node)) {
      if (ref->name == kRid) {
        p.column.name = ref->name;
      } else {
        p.column = rel.columns[rel.resolve(*ref)];
      }
    } else {
      p.column.name = render_expr(e);
    }
    if (!item.alias.empty()) p.column.name = item.alias;
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t promote_target(const std::vector<ProjectedItem>& items, const ast::ColumnRef& target) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const OutputColumn& c = items[i].column;
    if (c.name != target.name) continue;
    if (!target.qualifier.empty() && c.qualifier != target.qualifier && c.table != target.qualifier) continue;
    if (found) raise(ErrorCode::kInvalidQuery, "ambiguous PROMOTE target " + describe(target));
    found = i;
  }
  if (!found) raise(ErrorCode::kUnknownColumn, "PROMOTE target " + describe(target) + " is not projected");
  return *found;
}

// Projects each group of input tuples (a single tuple when ungrouped) to one
// output tuple. `key_columns` restricts bare column references to grouping
// keys when set.
AnnotatedRelation project_groups(const AnnotatedRelation& rel, const std::vector<std::vector<std::size_t>>& groups,
                                 const std::vector<ProjectedItem>& items, const std::vector<ast::Promote>& promotes,
                                 const std::optional<std::set<std::size_t>>& key_columns) {
  AnnotatedRelation out;
  for (const ProjectedItem& p : items) out.columns.push_back(p.column);

  std::vector<std::set<std::size_t>> item_sources(items.size());
  std::vector<bool> item_all(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool all = false;
    referenced_columns(rel, items[i].expr, item_sources[i], all);
    item_all[i] = all;
  }
  std::vector<std::pair<std::size_t, std::set<std::size_t>>> promote_plan;
  for (const ast::Promote& pr : promotes) {
    std::set<std::size_t> sources;
    for (const ast::ColumnRef& s : pr.sources) sources.insert(rel.resolve(s));
    promote_plan.emplace_back(promote_target(items, pr.target), std::move(sources));
  }

  for (const std::vector<std::size_t>& members : groups) {
    const AnnotatedTuple* first = members.empty() ? nullptr : &rel.tuples[members.front()];
    EvalScope scope;
    scope.column = [&](const ast::ColumnRef& ref) -> Value {
      if (key_columns) {
        if (ref.name == kRid || !key_columns->count(rel.resolve(ref))) {
          raise(ErrorCode::kInvalidQuery, "column " + describe(ref) + " must appear in GROUP BY");
        }
      }
      if (!first) raise(ErrorCode::kInvalidQuery, "column " + describe(ref) + " read from an empty group");
      return column_value(rel, *first, ref);
    };
    if (key_columns) {
      scope.aggregate = [&](const ast::Aggregate& a) -> Value {
        std::vector<Value> inputs;
        for (std::size_t m : members) {
          inputs.push_back(a.argument ? column_value(rel, rel.tuples[m], *a.argument) : Value());
        }
        return compute_aggregate(a.func, inputs, !a.argument);
      };
    }
    AnnotatedTuple t;
    for (std::size_t i = 0; i < items.size(); ++i) {
      t.values.push_back(eval_value(items[i].expr, scope));
      std::set<Aid> anns;
      std::set<SourceCell> lineage;
      for (std::size_t m : members) {
        const AnnotatedTuple& src = rel.tuples[m];
        for (std::size_t c = 0; c < src.values.size(); ++c) {
          if (!item_all[i] && !item_sources[i].count(c)) continue;
          anns.insert(src.anns[c].begin(), src.anns[c].end());
          lineage.insert(src.lineage[c].begin(), src.lineage[c].end());
        }
      }
      t.anns.push_back(std::move(anns));
      t.lineage.push_back(std::move(lineage));
    }
    for (const auto& [target, sources] : promote_plan) {
      for (std::size_t m : members) {
        for (std::size_t s : sources) t.anns[target].insert(rel.tuples[m].anns[s].begin(), rel.tuples[m].anns[s].end());
      }
    }
    out.tuples.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<std::size_t>> singleton_groups(const AnnotatedRelation& rel) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rel.tuples.size(); ++i) groups.push_back({i});
  return groups;
}

AnnotatedRelation run_grouped(const QueryContext& ctx, const AnnotatedRelation& rel, const ast::SelectCore& core) {
  std::vector<std::size_t> keys;
  for (const ast::ColumnRef& ref : core.group_by) keys.push_back(rel.resolve(ref));
  std::map<std::vector<Value>, std::size_t, ValuesLess> index;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rel.tuples.size(); ++i) {
    std::vector<Value> key;
    for (std::size_t k : keys) key.push_back(rel.tuples[i].values[k]);
    auto [it, inserted] = index.emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  if (groups.empty() && keys.empty()) groups.emplace_back();

  std::set<std::size_t> key_set(keys.begin(), keys.end());
  std::vector<std::vector<std::size_t>> kept;
  for (const auto& members : groups) {
    if (core.having) {
      // Evaluate HAVING through a one-item projection of the condition.
      std::vector<ProjectedItem> probe{{OutputColumn{"having", {}, {}}, *core.having}};
      AnnotatedRelation r = project_groups(rel, {members}, probe, {}, key_set);
      const Value& v = r.tuples.front().values.front();
      if (!(v.is_int() && v.as_int() != 0)) continue;
    }
    if (core.ahaving) {
      std::set<Aid> group_anns;
      for (std::size_t m : members) {
        std::set<Aid> a = all_anns(rel.tuples[m]);
        group_anns.insert(a.begin(), a.end());
      }
      if (!exists_match(ctx, group_anns, *core.ahaving)) continue;
    }
    kept.push_back(members);
  }
  return project_groups(rel, kept, expand_items(rel, core.items), core.promotes, key_set);
}

// Merges tuples with equal data values, keeping first-occurrence order.
AnnotatedRelation merge_duplicates(const AnnotatedRelation& rel) {
  std::map<std::vector<Value>, std::size_t, ValuesLess> index;
  std::vector<std::vector<AnnotatedTuple>> buckets;
  for (const AnnotatedTuple& t : rel.tuples) {
    auto [it, inserted] = index.emplace(t.values, buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(t);
  }
  AnnotatedRelation out;
  out.columns = rel.columns;
  for (const auto& b : buckets) out.tuples.push_back(combine_group(b));
  return out;
}

bool is_grouped(const ast::SelectCore& core) {
  if (!core.group_by.empty() || core.having || core.ahaving) return true;
  for (const ast::SelectItem& item : core.items) {
    if (const auto* e = std::get_if<ast::Expr>(&item.item); e && contains_aggregate(*e)) return true;
  }
  return false;
}

AnnotatedRelation run_core(const QueryContext& ctx, const ast::SelectCore& core,
                           const std::optional<ast::AnnotationClause>& annotation, const std::optional<ast::AnnExpr>& filter,
                           bool lenient) {
  std::vector<AnnScope> scopes = resolve_annotation_clause(ctx, core.from, annotation, lenient);
  AnnotatedRelation rel = scan(ctx, core.from, scopes);
  if (core.where) rel = select_where(rel, *core.where);
  if (core.awhere) rel = apply_awhere(ctx, rel, *core.awhere);
  if (is_grouped(core)) {
    rel = run_grouped(ctx, rel, core);
  } else {
    rel = project_groups(rel, singleton_groups(rel), expand_items(rel, core.items), core.promotes, std::nullopt);
  }
  if (filter) rel = apply_filter(ctx, rel, *filter);
  if (core.distinct) rel = merge_duplicates(rel);
  return rel;
}

}  // namespace

std::set<Aid> AnnotatedRelation::aids() const {
  std::set<Aid> out;
  for (const AnnotatedTuple& t : tuples) {
    for (const auto& s : t.anns) out.insert(s.begin(), s.end());
  }
  return out;
}

std::size_t AnnotatedRelation::resolve(const ast::ColumnRef& ref) const {
  auto find = [&](bool by_table) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const OutputColumn& c = columns[i];
      if (c.name != ref.name) continue;
      if (!ref.qualifier.empty() && (by_table ? c.table : c.qualifier) != ref.qualifier) continue;
      hits.push_back(i);
    }
    return hits;
  };
  std::vector<std::size_t> hits = find(false);
  if (hits.empty() && !ref.qualifier.empty()) hits = find(true);
  if (hits.empty()) raise(ErrorCode::kUnknownColumn, describe(ref));
  if (hits.size() > 1) raise(ErrorCode::kInvalidQuery, "ambiguous column " + describe(ref));
  return hits.front();
}

std::set<Aid> annotation_union(const std::set<Aid>& a, const std::set<Aid>& b) {
  std::set<Aid> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

AnnotatedRelation select_where(const AnnotatedRelation& rel, const ast::Expr& cond) {
  AnnotatedRelation out;
  out.columns = rel.columns;
  out.bindings = rel.bindings;
  for (const AnnotatedTuple& t : rel.tuples) {
    if (eval_condition(cond, row_scope(rel, t)) == true) out.tuples.push_back(t);
  }
  return out;
}

AnnotatedRelation apply_awhere(const QueryContext& ctx, const AnnotatedRelation& rel, const ast::AnnExpr& cond) {
  AnnotatedRelation out;
  out.columns = rel.columns;
  out.bindings = rel.bindings;
  for (const AnnotatedTuple& t : rel.tuples) {
    if (exists_match(ctx, all_anns(t), cond)) out.tuples.push_back(t);
  }
  return out;
}

AnnotatedRelation apply_filter(const QueryContext& ctx, const AnnotatedRelation& rel, const ast::AnnExpr& cond) {
  AnnotatedRelation out = rel;
  std::map<Aid, bool> verdict;
  for (AnnotatedTuple& t : out.tuples) {
    for (std::set<Aid>& s : t.anns) {
      for (auto it = s.begin(); it != s.end();) {
        auto v = verdict.find(*it);
        if (v == verdict.end()) v = verdict.emplace(*it, ann_record_matches(cond, record_of(ctx, *it))).first;
        it = v->second ? std::next(it) : s.erase(it);
      }
    }
  }
  return out;
}

AnnotatedRelation project(const AnnotatedRelation& rel, const std::vector<ast::ColumnRef>& columns,
                          const std::vector<ast::Promote>& promotes) {
  std::vector<ast::SelectItem> items;
  for (const ast::ColumnRef& c : columns) items.push_back({ast::Expr{c}, {}});
  return project_groups(rel, singleton_groups(rel), expand_items(rel, items), promotes, std::nullopt);
}

AnnotatedTuple combine_group(const std::vector<AnnotatedTuple>& members) {
  if (members.empty()) return {};
  AnnotatedTuple out = members.front();
  out.row_ids.clear();
  for (std::size_t m = 1; m < members.size(); ++m) {
    for (std::size_t c = 0; c < out.anns.size(); ++c) {
      out.anns[c].insert(members[m].anns[c].begin(), members[m].anns[c].end());
      out.lineage[c].insert(members[m].lineage[c].begin(), members[m].lineage[c].end());
    }
  }
  return out;
}

std::optional<Aid> outdated_aid(const AnnotationStore& store, const std::string& table) {
  const std::string name(kOutdatedTable);
  if (!store.has_table(table, name)) return std::nullopt;
  const AnnotationTable& t = store.table(table, name);
  if (t.records.empty()) return std::nullopt;
  return t.records.front().aid;
}

AnnotatedRelation outdated_overlay(const QueryContext& ctx, AnnotatedRelation rel,
                                   const std::optional<std::set<std::string>>& tables) {
  if (!ctx.outdated) return rel;
  std::map<std::string, std::optional<Aid>> aids;
  for (AnnotatedTuple& t : rel.tuples) {
    for (std::size_t c = 0; c < t.lineage.size(); ++c) {
      for (const SourceCell& s : t.lineage[c]) {
        if (tables && !tables->count(s.table)) continue;
        if (!ctx.outdated(s.table, s.cell)) continue;
        auto it = aids.find(s.table);
        if (it == aids.end()) it = aids.emplace(s.table, outdated_aid(ctx.annotations, s.table)).first;
        if (it->second) t.anns[c].insert(*it->second);
      }
    }
  }
  return rel;
}

CellSet target_cells(const AnnotatedRelation& rel, const std::string& table) {
  CellSet out;
  for (const AnnotatedTuple& t : rel.tuples) {
    for (const auto& cells : t.lineage) {
      for (const SourceCell& s : cells) {
        if (s.table == table) out.insert(s.cell);
      }
    }
  }
  return out;
}

AnnotatedRelation execute_select(const QueryContext& ctx, const ast::AnnSelect& query) {
  // Operands without their own ANNOTATION or FILTER clause take the last
  // operand's, so a trailing clause covers the whole compound select.
  const ast::SelectCore& last = query.tail.empty() ? query.head : query.tail.back().core;
  auto run = [&](const ast::SelectCore& core) {
    bool inherit_ann = !core.annotation && last.annotation;
    const auto& annotation = core.annotation ? core.annotation : last.annotation;
    const auto& filter = core.filter ? core.filter : last.filter;
    return run_core(ctx, core, annotation, filter, inherit_ann);
  };
  AnnotatedRelation rel = run(query.head);
  for (const ast::SetOperand& operand : query.tail) {
    AnnotatedRelation rhs = run(operand.core);
    if (rhs.columns.size() != rel.columns.size()) {
      raise(ErrorCode::kInvalidQuery, "set operation operands have " + std::to_string(rel.columns.size()) +
                                          " and " + std::to_string(rhs.columns.size()) + " columns");
    }
    AnnotatedRelation left = merge_duplicates(rel);
    AnnotatedRelation right = merge_duplicates(rhs);
    std::map<std::vector<Value>, std::size_t, ValuesLess> right_index;
    for (std::size_t i = 0; i < right.tuples.size(); ++i) right_index.emplace(right.tuples[i].values, i);
    AnnotatedRelation out;
    out.columns = rel.columns;
    switch (operand.op) {
      case ast::SetOp::kUnion: {
        left.tuples.insert(left.tuples.end(), right.tuples.begin(), right.tuples.end());
        out = merge_duplicates(left);
        break;
      }
      case ast::SetOp::kIntersect:
        for (const AnnotatedTuple& t : left.tuples) {
          auto it = right_index.find(t.values);
          if (it != right_index.end()) out.tuples.push_back(combine_group({t, right.tuples[it->second]}));
        }
        break;
      case ast::SetOp::kExcept:
        for (const AnnotatedTuple& t : left.tuples) {
          if (!right_index.count(t.values)) out.tuples.push_back(t);
        }
        break;
    }
    out.columns = rel.columns;
    rel = std::move(out);
  }
  return rel;
}

}  // namespace annodb
