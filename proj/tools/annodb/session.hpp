#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>

#include "annodb/engine.hpp"
#include "annodb/output.hpp"
#include "annodb/splitter.hpp"

namespace annodb::cli {

class Session {
 public:
  // Opens (or creates) the database in `dir`.
  Session(std::filesystem::path dir, Clock clock = {}, OutputMode mode = OutputMode::kTable);

  // Executes one statement or meta-command and returns the rendered output.
  // Throws annodb::Error on failure; the session stays usable.
  std::string eval(const Chunk& chunk);

  // Runs every chunk of `text`, writing output to `out`. Errors are rendered
  // to `err`; with `stop_on_error` the first one aborts the run. Returns false
  // if any chunk failed. Stops early after `\q`.
  bool run(std::string_view text, std::ostream& out, std::ostream& err, bool stop_on_error);

  // Renders an error the way run() does.
  std::string render_error(const std::exception& e, std::size_t line = 0) const;

  std::size_t import_csv(const std::string& table, const std::filesystem::path& file);

  Engine& engine() { return *engine_; }
  OutputMode mode() const { return mode_; }
  void set_mode(OutputMode mode) { mode_ = mode; }
  bool finished() const { return finished_; }
  void save();

 private:
  std::string meta(const std::string& line);
  std::string render(const ExecResult& r) const;
  std::string lines(const std::string& text) const;

  std::filesystem::path dir_;
  std::unique_ptr<Engine> engine_;
  OutputMode mode_;
  bool finished_ = false;
};

}  // namespace annodb::cli
