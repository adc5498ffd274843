#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mixshape/job.hpp"

// mixshape: exact decision procedures for mixing sets of toral epimorphisms.
//
// Reads one JSON job from stdin (or --input FILE), runs one subcommand and
// prints a JSON report on stdout.  Identical inputs and seeds produce
// byte-identical reports; timing goes to stderr only.

namespace {

struct Flags {
  std::string input_file;
  bool verbose = false;
  long max_exponent = -1;
  long seed = -1;
  long height = -1;
  long horizon = -1;
  long word_len = -1;
  long residue = -1;
};

nlohmann::json load_payload(const Flags& flags) {
  std::string text;
  if (!flags.input_file.empty()) {
    std::ifstream in(flags.input_file);
    if (!in) throw mixshape::cli::parse_error("cannot open input file: " + flags.input_file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (!isatty(fileno(stdin))) {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::parse(text);  // throws json::exception
  if (!payload.is_object()) throw mixshape::cli::parse_error("payload must be a JSON object");
  return payload;
}

void merge_flags(nlohmann::json& payload, const Flags& flags, const CLI::App& sub) {
  nlohmann::json& opts = payload["options"];
  if (!opts.is_object()) opts = nlohmann::json::object();
  if (sub.count("--max-exponent")) opts["max_exponent"] = flags.max_exponent;
  if (sub.count("--seed")) opts["seed"] = flags.seed;
  if (sub.count("--height")) opts["height"] = flags.height;
  if (sub.count("--horizon")) opts["horizon"] = flags.horizon;
  if (sub.count("--word-len")) opts["word_len"] = flags.word_len;
  if (sub.count("--residue")) opts["residue"] = flags.residue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact mixing / ergodicity decisions for sets of toral epimorphisms"};
  app.require_subcommand(1);
  Flags flags;

  std::vector<CLI::App*> subs;
  for (const std::string& name : mixshape::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", flags.input_file, "JSON job file (default: stdin)");
    sub->add_flag("--verbose", flags.verbose, "human summary on stderr");
    sub->add_option("--max-exponent", flags.max_exponent, "extend the exponent schedule to 1..N");
    sub->add_option("--seed", flags.seed, "PRNG seed (oracle-mc)");
    sub->add_option("--height", flags.height, "tuple height bound (oracle-search)");
    sub->add_option("--horizon", flags.horizon, "relation horizon (oracle-search)");
    sub->add_option("--word-len", flags.word_len, "word length bound (group-scan, oracle-search)");
    sub->add_option("--residue", flags.residue, "single residue class (limit)");
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = nullptr;
  for (CLI::App* sub : subs)
    if (sub->parsed()) chosen = sub;

  nlohmann::json payload;
  try {
    payload = load_payload(flags);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mixshape::cli::parse_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  merge_flags(payload, flags, *chosen);

  auto start = std::chrono::steady_clock::now();
  mixshape::cli::RunResult result = mixshape::cli::run(chosen->get_name(), payload);
  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

  std::cout << result.report.dump(2) << "\n";
  if (flags.verbose || result.exit_code != 0)
    std::cerr << result.summary << "  [" << elapsed.count() << " ms]\n";
  return result.exit_code;
}
