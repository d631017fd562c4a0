#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annodb/ast.hpp"
#include "annodb/clock.hpp"
#include "annodb/query.hpp"
#include "annodb/storage.hpp"

namespace annodb {

struct ExecResult {
  std::string message;                       // one-line summary; empty for SELECT
  std::optional<AnnotatedRelation> relation;  // SELECT, LIST PENDING, VACUUM
  std::vector<std::string> warnings;
  bool mutated = false;                       // the database changed and should be saved
  std::optional<std::int64_t> logged_op;     // approval log entry written for this statement
};

// Executes A-SQL statements against one database for one session user.
// The engine installs itself as the catalog's change hook, so it is neither
// copyable nor movable.
class Engine {
 public:
  explicit Engine(Database db = {}, Clock clock = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  ExecResult execute(const ast::Statement& stmt);
  // Parses and executes each statement of `script` in order.
  std::vector<ExecResult> execute_script(std::string_view script);
  // Parses and executes a single SELECT.
  AnnotatedRelation query(std::string_view select);

  Database& db() { return db_; }
  const Database& db() const { return db_; }
  QueryContext query_context() const;

  const std::string& user() const { return user_; }
  void set_user(std::string user) { user_ = std::move(user); }
  Clock& clock() { return clock_; }

  // Dependency effects accumulated since the last statement began.
  const PropagationResult& last_propagation() const { return propagation_; }

 private:
  struct DmlOutcome {
    std::vector<Rid> rids;    // inserted, matched (UPDATE) or deleted rows
    std::vector<CapturedRow> captured;
    std::optional<std::int64_t> op;
    std::size_t changed_cells = 0;
  };

  DmlOutcome run_insert(const ast::Insert& ins, const std::string& logged_text, bool unlogged, bool force);
  DmlOutcome run_update(const ast::Update& upd, const std::string& logged_text, bool unlogged);
  DmlOutcome run_delete(const ast::Delete& del, const std::string& logged_text, bool unlogged);
  std::vector<Rid> matching_rows(const std::string& table, const std::optional<ast::Expr>& where) const;

  ExecResult exec(const ast::CreateTable& s);
  ExecResult exec(const ast::Insert& s);
  ExecResult exec(const ast::Update& s);
  ExecResult exec(const ast::Delete& s);
  ExecResult exec(const ast::AnnSelect& s);
  ExecResult exec(const ast::CreateAnnotationTable& s);
  ExecResult exec(const ast::DropAnnotationTable& s);
  ExecResult exec(const ast::AddAnnotation& s);
  ExecResult exec(const ast::ArchiveAnnotation& s);
  ExecResult exec(const ast::RestoreAnnotation& s);
  ExecResult exec(const ast::VacuumAnnotations& s);
  ExecResult exec(const ast::CreateDependencyRule& s);
  ExecResult exec(const ast::DropDependencyRule& s);
  ExecResult exec(const ast::AddDependencyEdge& s);
  ExecResult exec(const ast::Validate& s);
  ExecResult exec(const ast::RegisterProcedure& s);
  ExecResult exec(const ast::StartContentApproval& s);
  ExecResult exec(const ast::EndContentApproval& s);
  ExecResult exec(const ast::Approve& s);
  ExecResult exec(const ast::Disapprove& s);
  ExecResult exec(const ast::ListPending& s);
  ExecResult exec(const ast::SetUser& s);

  ExecResult archive_or_restore(const std::vector<ast::AnnTableName>& tables, const std::optional<ast::TimeRange>& range,
                                const ast::AnnSelect& target, bool archive);
  void on_change(const std::string& table, std::span<const CellChange> changes);
  void absorb(const PropagationResult& r);
  void ensure_outdated_records();

  Database db_;
  Clock clock_;
  std::string user_ = "anonymous";
  PropagationResult propagation_;
  std::string current_text_;
};

}  // namespace annodb
