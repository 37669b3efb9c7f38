// cohn <session-file> <command> [args...] [--json out.json] [--mode oracle|witness <name-or-file>|search] [--cap N]
//      [--shifts 1,2]
//
// Exit status: 0 success, 1 verdict false (eq, check-witness), 2 input error.

#include "cohn/session.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Computations in additive Cohn localizations and their weight structures"};
  std::string session_file, command, json_out;
  std::vector<std::string> args, mode{"oracle"};
  cohn::CommandOptions opts;
  app.add_option("session", session_file, "session file")->required();
  app.add_option("command", command, "command")->required()->check(CLI::IsMember(cohn::command_names()));
  // Arguments are collected as extras so that matrix literals like [[1]] stay intact.
  app.allow_extras();
  app.add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
  app.add_option("--mode", mode, "eq mode: oracle, witness <name-or-file>, or search")->expected(1, 2);
  app.add_option("--cap", opts.cap, "search cap")->check(CLI::Range(0, 8));
  app.add_option("--shifts", opts.shifts, "positive shifts for negativity")->delimiter(',');
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const auto& a : app.remaining()) {
    if (a.rfind("--", 0) == 0 && a.size() > 2) {
      std::cerr << "unknown option " << a << "\n";
      return 2;
    }
    if (a != "--") args.push_back(a);
  }
  opts.mode = mode.at(0);
  if (mode.size() > 1) opts.mode_arg = mode[1];

  try {
    std::ifstream in(session_file);
    if (!in) throw cohn::InputError("cannot open session file '" + session_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const cohn::Session session = cohn::parse_session(buf.str());
    const cohn::Report rep = cohn::run_command(session, command, args, opts);
    if (json_out == "-") {
      std::cout << rep.json.dump(2) << "\n";
    } else {
      std::cout << rep.text;
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw cohn::InputError("cannot write '" + json_out + "'");
        out << rep.json.dump(2) << "\n";
      }
    }
    return rep.exit_code;
  } catch (const cohn::SessionError& e) {
    if (e.line) std::cerr << session_file << ": " << e.what() << "\n";
    else std::cerr << "error: in argument expression, " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
