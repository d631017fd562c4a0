#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "annodb/error.hpp"
#include "annodb/session.hpp"

int main(int argc, char** argv) {
  using annodb::cli::OutputMode;

  CLI::App app{"annodb: annotation-aware relational database"};
  std::string db_dir;
  std::string exec_file;
  std::vector<std::string> import_args;
  std::string output = "table";
  std::string user;
  std::string clock_text;
  app.add_option("--db", db_dir, "database directory (created if missing)")->envname("ANNODB_DB");
  app.add_option("--exec", exec_file, "run an A-SQL script and exit");
  app.add_option("--import", import_args, "bulk-load a CSV file into a table")->expected(2)->type_name("TABLE CSV");
  app.add_option("--output", output, "result format")->check(CLI::IsMember({"table", "csv", "jsonl"}));
  app.add_option("--user", user, "session user");
  app.add_option("--clock", clock_text, "pin the clock to an ISO-8601 instant (YYYY-MM-DDTHH:MM:SSZ)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (db_dir.empty()) {
    std::cerr << "annodb: --db is required\n" << app.help();
    return 2;
  }
  annodb::Clock clock;
  if (!clock_text.empty()) {
    auto pinned = annodb::Clock::pinned(clock_text);
    if (!pinned) {
      std::cerr << "annodb: malformed --clock value\n";
      return 2;
    }
    clock = *pinned;
  }

  std::unique_ptr<annodb::cli::Session> session;
  try {
    session = std::make_unique<annodb::cli::Session>(db_dir, clock, *annodb::cli::parse_output_mode(output));
    if (!user.empty()) session->engine().set_user(user);
    if (!import_args.empty()) {
      std::size_t n = session->import_csv(import_args[0], import_args[1]);
      std::cerr << n << (n == 1 ? " row" : " rows") << " imported into " << import_args[0] << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "annodb: " << e.what() << "\n";
    return 1;
  }

  if (!exec_file.empty()) {
    std::ifstream in(exec_file, std::ios::binary);
    if (!in) {
      std::cerr << "annodb: cannot read " << exec_file << "\n";
      return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return session->run(text.str(), std::cout, std::cerr, true) ? 0 : 1;
  }

  bool interactive = isatty(STDIN_FILENO);
  std::string pending;
  std::string line;
  while (!session->finished()) {
    if (interactive) std::cout << (pending.empty() ? "annodb> " : "   ...> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    pending += line;
    pending += '\n';
    annodb::cli::SplitResult split = annodb::cli::split_input(pending);
    for (const annodb::cli::Chunk& chunk : split.chunks) {
      try {
        std::cout << session->eval(chunk) << std::flush;
      } catch (const std::exception& e) {
        std::cout << std::flush;
        std::cerr << session->render_error(e) << std::flush;
      }
      if (session->finished()) break;
    }
    pending = split.rest;
    if (pending.find_first_not_of(" \t\r\n") == std::string::npos) pending.clear();
  }
  if (!pending.empty() && !session->finished()) {
    try {
      std::cout << session->eval({pending, false, 1});
    } catch (const std::exception& e) {
      std::cerr << session->render_error(e);
    }
  }
  return 0;
}
