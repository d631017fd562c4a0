#include "annodb/dependency.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <tuple>

#include "annodb/error.hpp"

namespace annodb {

std::string to_string(const ColumnKey& key) { return key.table + "." + key.column; }

namespace {

using Graph = std::map<ColumnKey, std::set<ColumnKey>>;

Graph column_graph(const std::vector<DependencyRule>& rules) {
  Graph g;
  for (const DependencyRule& r : rules) {
    for (const std::string& s : r.source_columns) {
      for (const std::string& t : r.target_columns) g[{r.source_table, s}].insert({r.target_table, t});
    }
  }
  return g;
}

// Shortest path from `from` to `to`, empty when unreachable.
std::vector<ColumnKey> find_path(const Graph& g, const ColumnKey& from, const ColumnKey& to) {
  std::map<ColumnKey, ColumnKey> parent;
  std::deque<ColumnKey> queue{from};
  std::set<ColumnKey> seen{from};
  while (!queue.empty()) {
    ColumnKey cur = queue.front();
    queue.pop_front();
    if (cur == to) {
      std::vector<ColumnKey> path{cur};
      while (!(path.back() == from)) path.push_back(parent.at(path.back()));
      std::reverse(path.begin(), path.end());
      return path;
    }
    auto it = g.find(cur);
    if (it == g.end()) continue;
    for (const ColumnKey& next : it->second) {
      if (seen.insert(next).second) {
        parent[next] = cur;
        queue.push_back(next);
      }
    }
  }
  return {};
}

std::size_t column_of(const Catalog& catalog, const std::string& table, const std::string& column) {
  std::optional<std::size_t> idx = catalog.table(table).def().column_index(column);
  if (!idx) raise(ErrorCode::kUnknownColumn, table + "." + column);
  return *idx;
}

bool feeds(const DependencyRule& a, const DependencyRule& b) {
  if (a.target_table != b.source_table) return false;
  for (const std::string& t : a.target_columns) {
    if (std::find(b.source_columns.begin(), b.source_columns.end(), t) != b.source_columns.end()) return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::set<ColumnKey> reachable_columns(const std::vector<DependencyRule>& rules, const ColumnKey& start) {
  Graph g = column_graph(rules);
  std::set<ColumnKey> out;
  std::deque<ColumnKey> queue{start};
  while (!queue.empty()) {
    ColumnKey cur = queue.front();
    queue.pop_front();
    auto it = g.find(cur);
    if (it == g.end()) continue;
    for (const ColumnKey& next : it->second) {
      if (!(next == start) && out.insert(next).second) queue.push_back(next);
    }
  }
  return out;
}

std::vector<std::string> DependencyEngine::add_rule(const Catalog& catalog, const ProcedureRegistry& procedures,
                                                    DependencyRule rule) {
  if (rule.id.empty()) raise(ErrorCode::kInvalidQuery, "rule id must not be empty");
  for (const DependencyRule& r : rules_) {
    if (r.id == rule.id) raise(ErrorCode::kDuplicate, "rule " + rule.id);
  }
  if (rule.source_columns.empty() || rule.target_columns.empty()) {
    raise(ErrorCode::kInvalidQuery, "a rule needs source and target columns");
  }
  for (const std::string& c : rule.source_columns) column_of(catalog, rule.source_table, c);
  for (const std::string& c : rule.target_columns) column_of(catalog, rule.target_table, c);
  if (rule.link) {
    column_of(catalog, rule.source_table, rule.link->source_column);
    column_of(catalog, rule.target_table, rule.link->target_column);
  } else if (rule.source_table != rule.target_table) {
    raise(ErrorCode::kInvalidQuery, "LINK BY ROW needs source and target in the same table");
  }
  // External procedures run outside the database, so only executable rules
  // must name a registered procedure.
  const ProcedureDef* proc = procedures.find(rule.procedure);
  if (rule.executable && !proc) raise(ErrorCode::kUnknownProcedure, rule.procedure);
  if (proc && proc->arity != 0 && proc->arity != rule.source_columns.size()) {
    raise(ErrorCode::kArityMismatch, rule.procedure + " takes " + std::to_string(proc->arity) + " arguments, rule " +
                                         rule.id + " supplies " + std::to_string(rule.source_columns.size()));
  }

  Graph g = column_graph(rules_);
  for (const std::string& t : rule.target_columns) {
    for (const std::string& s : rule.source_columns) {
      ColumnKey target{rule.target_table, t};
      ColumnKey source{rule.source_table, s};
      std::vector<ColumnKey> path = target == source ? std::vector<ColumnKey>{target} : find_path(g, target, source);
      if (path.empty()) continue;
      std::vector<std::string> names{to_string(source)};
      for (const ColumnKey& k : path) names.push_back(to_string(k));
      raise(ErrorCode::kCycleDetected, join(names, " -> "));
    }
  }

  std::vector<std::string> warnings;
  for (const DependencyRule& r : rules_) {
    if (r.target_table != rule.target_table || r.procedure == rule.procedure) continue;
    for (const std::string& t : rule.target_columns) {
      if (std::find(r.target_columns.begin(), r.target_columns.end(), t) != r.target_columns.end()) {
        warnings.push_back("rules " + r.id + " and " + rule.id + " both derive " + rule.target_table + "." + t +
                           " with different procedures (" + r.procedure + ", " + rule.procedure + ")");
      }
    }
  }
  rules_.push_back(std::move(rule));
  return warnings;
}

void DependencyEngine::drop_rule(const std::string& id) {
  auto it = std::find_if(rules_.begin(), rules_.end(), [&](const DependencyRule& r) { return r.id == id; });
  if (it == rules_.end()) raise(ErrorCode::kUnknownRule, id);
  rules_.erase(it);
}

std::vector<DependencyRule> DependencyEngine::derived_rules() const {
  std::vector<DependencyRule> out;
  std::vector<std::size_t> chain;
  std::function<void()> extend = [&]() {
    const DependencyRule& last = rules_[chain.back()];
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (!feeds(last, rules_[i])) continue;
      if (std::find(chain.begin(), chain.end(), i) != chain.end()) continue;
      chain.push_back(i);
      const DependencyRule& first = rules_[chain.front()];
      DependencyRule d;
      d.source_table = first.source_table;
      d.source_columns = first.source_columns;
      d.target_table = rules_[i].target_table;
      d.target_columns = rules_[i].target_columns;
      d.executable = true;
      d.invertible = true;
      std::vector<std::string> procs;
      for (std::size_t c : chain) {
        d.derived_from.push_back(rules_[c].id);
        procs.push_back(rules_[c].procedure);
        d.executable = d.executable && rules_[c].executable;
        d.invertible = d.invertible && rules_[c].invertible;
      }
      d.id = join(d.derived_from, ">");
      d.procedure = join(procs, ">");
      out.push_back(std::move(d));
      extend();
      chain.pop_back();
    }
  };
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    chain = {i};
    extend();
  }
  return out;
}

std::set<ColumnKey> DependencyEngine::attribute_closure(const Catalog& catalog, const ColumnKey& column) const {
  column_of(catalog, column.table, column.column);
  return reachable_columns(rules_, column);
}

std::set<ColumnKey> DependencyEngine::procedure_closure(const std::string& procedure) const {
  std::set<ColumnKey> out;
  for (const DependencyRule& r : rules_) {
    if (r.procedure != procedure) continue;
    for (const std::string& t : r.target_columns) {
      ColumnKey k{r.target_table, t};
      out.insert(k);
      std::set<ColumnKey> more = reachable_columns(rules_, k);
      out.insert(more.begin(), more.end());
    }
  }
  return out;
}

void DependencyEngine::add_edge(DependencyEdge edge) { edges_.push_back(std::move(edge)); }

struct DependencyEngine::Step {
  std::string table;
  Rid rid = 0;
  std::size_t column = 0;
  bool tainted = false;
};

PropagationResult DependencyEngine::on_data_change(Catalog& catalog, const ProcedureRegistry& procedures,
                                                   const std::string& table, std::span<const CellChange> changes) {
  std::vector<Step> seeds;
  for (const CellChange& c : changes) seeds.push_back({table, c.rid, c.column, false});
  return propagate(catalog, procedures, std::move(seeds));
}

PropagationResult DependencyEngine::on_procedure_change(Catalog& catalog, const ProcedureRegistry& procedures,
                                                        const std::string& procedure) {
  // Re-firing a rule means treating one of its source cells per linked row as
  // changed; every source column of each row is seeded so no row is missed.
  std::vector<Step> seeds;
  std::set<std::tuple<std::string, Rid, std::size_t>> seen;
  for (const DependencyRule& r : rules_) {
    if (r.procedure != procedure) continue;
    const Table& t = catalog.table(r.source_table);
    std::size_t col = column_of(catalog, r.source_table, r.source_columns.front());
    for (const auto& [rid, row] : t.rows()) {
      if (seen.emplace(r.source_table, rid, col).second) seeds.push_back({r.source_table, rid, col, false});
    }
  }
  for (const DependencyEdge& e : edges_) {
    if (e.procedure != procedure) continue;
    if (seen.emplace(e.source.table, e.source.cell.rid, e.source.cell.column).second) {
      seeds.push_back({e.source.table, e.source.cell.rid, e.source.cell.column, false});
    }
  }
  return propagate(catalog, procedures, std::move(seeds));
}

PropagationResult DependencyEngine::propagate(Catalog& catalog, const ProcedureRegistry& procedures,
                                              std::vector<Step> seeds) {
  PropagationResult result;
  std::deque<Step> queue(seeds.begin(), seeds.end());
  std::set<std::tuple<std::string, Rid, std::size_t, bool>> visited;
  std::set<std::tuple<std::string, Rid, std::size_t>> marked;
  for (const Step& s : seeds) visited.emplace(s.table, s.rid, s.column, s.tainted);

  auto column_name = [&](const std::string& table, std::size_t col) -> const std::string& {
    return catalog.table(table).def().columns.at(col).name;
  };
  auto mark = [&](const std::string& table, Rid rid, std::size_t col) {
    set_outdated(table, column_name(table, col), rid, true);
    marked.emplace(table, rid, col);
    result.outdated.push_back({table, Cell{rid, col}});
  };
  // Reaching a target cell: recompute it when the link is executable and the
  // path so far is clean, otherwise mark it outdated.
  auto arrive = [&](const std::string& table, Rid rid, std::size_t col, bool executable, bool tainted,
                    const std::string& procedure, const std::function<std::vector<Value>()>& args) {
    bool clean = executable && !tainted;
    if (!clean) {
      if (!visited.emplace(table, rid, col, true).second) return;
      mark(table, rid, col);
      queue.push_back({table, rid, col, true});
      return;
    }
    if (!visited.emplace(table, rid, col, false).second) return;
    try {
      Value v = procedures.call(procedure, args());
      const Row* row = catalog.table(table).find(rid);
      if (row && !(row->values.at(col) == v)) catalog.write_cell(table, rid, col, v);
      if (!marked.count({table, rid, col})) set_outdated(table, column_name(table, col), rid, false);
      result.recomputed.push_back({table, Cell{rid, col}});
      queue.push_back({table, rid, col, false});
    } catch (const Error& e) {
      result.failures.push_back(table + "." + column_name(table, col) + "#" + std::to_string(rid) + ": " + e.what());
      if (visited.emplace(table, rid, col, true).second) {
        mark(table, rid, col);
        queue.push_back({table, rid, col, true});
      }
    }
  };

  while (!queue.empty()) {
    Step step = queue.front();
    queue.pop_front();
    const std::string& changed_column = column_name(step.table, step.column);
    for (const DependencyRule& r : rules_) {
      if (r.source_table != step.table) continue;
      if (std::find(r.source_columns.begin(), r.source_columns.end(), changed_column) == r.source_columns.end()) {
        continue;
      }
      const Table& source = catalog.table(r.source_table);
      const Row* source_row = source.find(step.rid);
      if (!source_row) continue;
      std::vector<Rid> targets;
      const Table& target = catalog.table(r.target_table);
      if (!r.link) {
        if (target.contains(step.rid)) targets.push_back(step.rid);
      } else {
        const Value& key = source_row->values.at(column_of(catalog, r.source_table, r.link->source_column));
        std::size_t tk = column_of(catalog, r.target_table, r.link->target_column);
        if (!key.is_null()) {
          for (const auto& [rid, row] : target.rows()) {
            if (compare_total(row.values[tk], key) == 0) targets.push_back(rid);
          }
        }
      }
      std::string source_table = r.source_table;
      Rid source_rid = step.rid;
      std::vector<std::size_t> arg_columns;
      for (const std::string& c : r.source_columns) arg_columns.push_back(column_of(catalog, r.source_table, c));
      auto args = [&catalog, source_table, source_rid, arg_columns]() {
        std::vector<Value> out;
        const Row* row = catalog.table(source_table).find(source_rid);
        for (std::size_t c : arg_columns) out.push_back(row ? row->values.at(c) : Value());
        return out;
      };
      for (Rid t : targets) {
        for (const std::string& c : r.target_columns) {
          arrive(r.target_table, t, column_of(catalog, r.target_table, c), r.executable, step.tainted, r.procedure,
                 args);
        }
      }
    }
    for (const DependencyEdge& e : edges_) {
      if (e.source.table != step.table || !(e.source.cell == Cell{step.rid, step.column})) continue;
      if (!catalog.table(e.target.table).contains(e.target.cell.rid)) continue;
      SourceCell src = e.source;
      auto args = [&catalog, src]() {
        const Row* row = catalog.table(src.table).find(src.cell.rid);
        return std::vector<Value>{row ? row->values.at(src.cell.column) : Value()};
      };
      arrive(e.target.table, e.target.cell.rid, e.target.cell.column, e.executable, step.tainted, e.procedure, args);
    }
  }
  return result;
}

std::size_t DependencyEngine::validate_cells(const std::string& table, const std::string& column,
                                             const std::vector<Rid>& rids) {
  std::size_t cleared = 0;
  for (Rid rid : rids) {
    if (is_outdated(table, column, rid)) {
      set_outdated(table, column, rid, false);
      ++cleared;
    }
  }
  return cleared;
}

bool DependencyEngine::is_outdated(const std::string& table, const std::string& column, Rid rid) const {
  auto t = bits_.find(table);
  if (t == bits_.end()) return false;
  auto c = t->second.find(column);
  if (c == t->second.end() || rid < 1) return false;
  auto i = static_cast<std::size_t>(rid - 1);
  return i < c->second.size() && c->second[i];
}

void DependencyEngine::set_outdated(const std::string& table, const std::string& column, Rid rid, bool value) {
  if (rid < 1) return;
  auto i = static_cast<std::size_t>(rid - 1);
  if (!value) {
    auto t = bits_.find(table);
    if (t == bits_.end()) return;
    auto c = t->second.find(column);
    if (c == t->second.end() || i >= c->second.size()) return;
    c->second[i] = false;
    return;
  }
  std::vector<bool>& bits = bits_[table][column];
  if (bits.size() <= i) bits.resize(i + 1, false);
  bits[i] = true;
}

std::vector<bool> DependencyEngine::bitmap(const std::string& table, const std::string& column,
                                           std::size_t length) const {
  std::vector<bool> out(length, false);
  auto t = bits_.find(table);
  if (t == bits_.end()) return out;
  auto c = t->second.find(column);
  if (c == t->second.end()) return out;
  for (std::size_t i = 0; i < length && i < c->second.size(); ++i) out[i] = c->second[i];
  return out;
}

void DependencyEngine::load_bitmap(const std::string& table, const std::string& column, std::vector<bool> bits) {
  bits_[table][column] = std::move(bits);
}

void DependencyEngine::drop_table(const std::string& table) {
  std::erase_if(rules_, [&](const DependencyRule& r) { return r.source_table == table || r.target_table == table; });
  std::erase_if(edges_, [&](const DependencyEdge& e) { return e.source.table == table || e.target.table == table; });
  bits_.erase(table);
}

}  // namespace annodb
