// Command-line front end: evaluation, analysis, sweeps, MCV and TM tooling.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cflab/analysis.hpp"
#include "cflab/errors.hpp"
#include "cflab/eval.hpp"
#include "cflab/mcv.hpp"
#include "cflab/nondet.hpp"
#include "cflab/parser.hpp"
#include "cflab/printer.hpp"
#include "cflab/report.hpp"
#include "cflab/thread.hpp"
#include "cflab/tm.hpp"

namespace fs = std::filesystem;
using namespace cflab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const std::vector<std::string> kEngines = {"tree",      "stack",        "stack-tco", "memo",
                                           "ncf-search", "ncf-saturate", "confirm"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunOptions {
  std::string engine = "tree";
  std::uint64_t budget = Budget::kDefaultSteps;
  bool tco = false;
  bool check_suffix = false;
};

bool is_ncf_engine(const std::string& e) { return e == "ncf-search" || e == "ncf-saturate"; }

Program load_program(const std::string& path, const RunOptions& o) {
  ProgramOptions po;
  po.allow_choose = is_ncf_engine(o.engine);
  return parse_program(read_file(path), po);
}

std::string program_name(const std::string& path) { return fs::path(path).stem().string(); }

/// Runs one engine; every engine-level failure propagates as an exception.
Record execute(const Program& p, const std::string& name, const BitString& x,
               const RunOptions& o) {
  EvalOptions opts;
  opts.budget.max_steps = o.budget;
  opts.check_suffix_lemma = o.check_suffix;
  Record r;
  run_with_stack(kLargeStack, [&] {
    if (o.engine == "tree") {
      r = make_record(eval_tree(p, x, opts, false).stats, name, x);
    } else if (o.engine == "stack" || o.engine == "stack-tco") {
      r = make_record(eval_stack(p, x, o.tco || o.engine == "stack-tco", opts), name, x);
    } else if (o.engine == "memo") {
      r = make_record(eval_memo(p, x, opts), name, x);
    } else if (o.engine == "ncf-search") {
      r = make_record(ncf_search(p, x, opts.budget), name, x);
    } else if (o.engine == "ncf-saturate") {
      r = make_record(ncf_saturate(p, x), name, x);
    } else if (o.engine == "confirm") {
      r = make_record(confirm_log2(p, x, opts.budget), name, x);
    } else {
      throw Error("unknown engine " + o.engine);
    }
  });
  r.reach_bound = reach_bound(p, x.size());
  return r;
}

void emit(const Record& r, const std::string& format, bool header) {
  if (format == "json") {
    std::cout << to_json(r).dump() << "\n";
  } else if (format == "csv") {
    if (header) std::cout << csv_header() << "\n";
    std::cout << to_csv(r) << "\n";
  } else {
    std::cout << to_human(r);
  }
}

BitString read_input(const std::string& literal, const std::string& file) {
  if (!file.empty()) return parse_input(read_file(file));
  return parse_input(literal);
}

/// "a..b" or a single number.
std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      std::size_t v = std::stoul(s);
      return {v, v};
    }
    std::size_t lo = std::stoul(s.substr(0, dots));
    std::size_t hi = std::stoul(s.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty range");
    return {lo, hi};
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected N or N..M, got '" + s + "'");
  }
}

BitString generate_input(const std::string& gen, std::size_t n, std::mt19937_64& rng) {
  BitString x;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    if (gen == "zeros") {
      x.push_back(false);
    } else if (gen == "ones") {
      x.push_back(true);
    } else if (gen == "alternating") {
      x.push_back(i % 2 == 1);
    } else {
      x.push_back(coin(rng));
    }
  }
  return x;
}

/// Record for a size point that did not finish.
Record failed_record(const Program& p, const std::string& name, const BitString& x,
                     const RunOptions& o, const std::string& what) {
  Record r;
  r.engine = o.engine == "stack" && o.tco ? "stack-tco" : o.engine;
  r.program = name;
  r.input_len = x.size();
  r.result = what;
  r.reach_bound = reach_bound(p, x.size());
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter and measurement toolkit for cons-free programs"};
  app.require_subcommand(1);

  RunOptions ro;
  auto add_run_flags = [&ro](CLI::App* sub) {
    sub->add_option("--engine", ro.engine, "Evaluation engine")
        ->check(CLI::IsMember(kEngines))
        ->capture_default_str();
    sub->add_option("--budget", ro.budget, "Step budget per run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--tco", ro.tco, "Tail-call optimization for the stack engine");
    sub->add_flag("--assert-suffix-lemma", ro.check_suffix,
                  "Check every value and binding against V_x");
  };
  auto add_format = [](CLI::App* sub, std::string& target) {
    sub->add_option("--format", target, "Output format")
        ->check(CLI::IsMember({"human", "csv", "json"}))
        ->capture_default_str();
  };

  std::string program_path, input_literal, input_file, range = "0..8", generator = "random";
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  // run
  auto* run = app.add_subcommand("run", "Evaluate a program on one input");
  run->add_option("program", program_path, "Program file (.cf)")->required()->check(CLI::ExistingFile);
  run->add_option("input", input_literal, "Input bits, e.g. 1011 or [1,0,1,1]");
  run->add_option("--input-file", input_file, "Read the input from a file")->check(CLI::ExistingFile);
  add_run_flags(run);
  std::string run_format = "human";
  add_format(run, run_format);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Classify call shapes and CFTR membership");
  analyze->add_option("program", program_path, "Program file (.cf)")->required()->check(CLI::ExistingFile);
  std::string analyze_format = "human";
  analyze->add_option("--format", analyze_format, "Output format")
      ->check(CLI::IsMember({"human", "json"}));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run over a range of input lengths");
  sweep->add_option("program", program_path, "Program file (.cf)")->required()->check(CLI::ExistingFile);
  sweep->add_option("range", range, "Input lengths N..M")->capture_default_str();
  sweep->add_option("--inputs", generator, "Input generator")
      ->check(CLI::IsMember({"zeros", "ones", "alternating", "random"}))
      ->capture_default_str();
  sweep->add_option("--seed", seed, "Seed for random inputs")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Size points evaluated concurrently")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  add_run_flags(sweep);
  std::string sweep_format = "csv";
  add_format(sweep, sweep_format);

  // MCV
  std::string circuit_path;
  auto* mcv_encode = app.add_subcommand("mcv-encode", "Encode a circuit file as a bit string");
  mcv_encode->add_option("circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
  bool list_form = false;
  mcv_encode->add_flag("--list", list_form, "Print as [b,b,...]");

  auto* mcv_decode = app.add_subcommand("mcv-decode", "Decode a bit string into a circuit");
  mcv_decode->add_option("bits", input_literal, "Encoded bits");
  mcv_decode->add_option("--input-file", input_file, "Read the bits from a file")->check(CLI::ExistingFile);

  auto* mcv_eval = app.add_subcommand("mcv-eval", "Evaluate a circuit directly or through the bundled program");
  mcv_eval->add_option("circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
  std::string mcv_engine = "circuit";
  std::vector<std::string> mcv_engines = kEngines;
  mcv_engines.insert(mcv_engines.begin(), "circuit");
  mcv_eval->add_option("--engine", mcv_engine, "'circuit' for the direct evaluator, or an engine")
      ->check(CLI::IsMember(mcv_engines))
      ->capture_default_str();
  mcv_eval->add_option("--budget", ro.budget, "Step budget")->check(CLI::PositiveNumber);
  std::string mcv_format = "human";
  add_format(mcv_eval, mcv_format);

  auto* mcv_program = app.add_subcommand("mcv-program", "Print the bundled MCV decider");
  (void)mcv_program;

  // TM
  std::string machine_path;
  auto* tm_run = app.add_subcommand("tm-run", "Run a Turing machine directly");
  tm_run->add_option("machine", machine_path, "Machine file (.tm)")->required()->check(CLI::ExistingFile);
  tm_run->add_option("input", input_literal, "Input bits");
  tm_run->add_option("--input-file", input_file, "Read the input from a file")->check(CLI::ExistingFile);
  tm_run->add_option("--budget", ro.budget, "Step budget")->check(CLI::PositiveNumber);

  auto* tm_compile = app.add_subcommand("tm-compile", "Compile a Turing machine into a cons-free program");
  tm_compile->add_option("machine", machine_path, "Machine file (.tm)")->required()->check(CLI::ExistingFile);
  std::string output_path;
  tm_compile->add_option("-o,--output", output_path, "Write the program here instead of stdout");

  // bound
  auto* bound = app.add_subcommand("bound", "Tabulate the reachable-configuration bound");
  bound->add_option("program", program_path, "Program file (.cf)")->required()->check(CLI::ExistingFile);
  bound->add_option("range", range, "Input lengths N..M")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      Program p = load_program(program_path, ro);
      BitString x = read_input(input_literal, input_file);
      Record r = execute(p, program_name(program_path), x, ro);
      emit(r, run_format, true);
    } else if (*analyze) {
      ProgramOptions po;
      po.allow_choose = true;
      Program p = parse_program(read_file(program_path), po);
      CallShapeReport rep = call_shape_report(p);
      if (analyze_format == "json") {
        std::cout << to_json(rep).dump(2) << "\n";
      } else {
        std::cout << "is_cftr: " << (rep.is_cftr ? "true" : "false") << "\n";
        std::cout << "all_calls_linear: " << (rep.all_calls_linear ? "true" : "false") << "\n";
        for (const auto& d : rep.definitions) std::cout << "alpha " << d.name << " = " << to_string(d.alpha) << "\n";
        for (const auto& s : rep.sites) {
          std::cout << "call " << s.definition << " -> " << s.callee << " at " << s.path << ": "
                    << to_string(s.kind) << "\n";
        }
      }
    } else if (*sweep) {
      Program p = load_program(program_path, ro);
      auto [lo, hi] = parse_range(range);
      std::mt19937_64 rng(seed);
      std::vector<BitString> inputs;
      for (std::size_t n = lo; n <= hi; ++n) inputs.push_back(generate_input(generator, n, rng));
      std::vector<Record> records(inputs.size());
      std::atomic<std::size_t> next{0};
      std::string name = program_name(program_path);
      auto worker = [&] {
        for (std::size_t i; (i = next++) < inputs.size();) {
          try {
            records[i] = execute(p, name, inputs[i], ro);
          } catch (const Timeout&) {
            records[i] = failed_record(p, name, inputs[i], ro, "timeout");
          } catch (const Stuck&) {
            records[i] = failed_record(p, name, inputs[i], ro, "stuck");
          } catch (const ReachBoundExceeded&) {
            records[i] = failed_record(p, name, inputs[i], ro, "reach-bound");
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      for (std::size_t i = 0; i < records.size(); ++i) emit(records[i], sweep_format, i == 0);
    } else if (*mcv_encode) {
      mcv::McvEncoding enc = mcv::encode_mcv(mcv::parse_circuit(read_file(circuit_path)));
      std::cout << (list_form ? enc.bits.list() : enc.bits.compact()) << "\n";
    } else if (*mcv_decode) {
      BitString bits = read_input(input_literal, input_file);
      std::cout << mcv::format_circuit(mcv::decode_mcv(bits));
    } else if (*mcv_eval) {
      mcv::StraightLineProgram c = mcv::parse_circuit(read_file(circuit_path));
      if (mcv_engine == "circuit") {
        std::cout << (mcv::eval_circuit(c) ? "True" : "False") << "\n";
      } else {
        ro.engine = mcv_engine;
        BitString x = mcv::encode_mcv(c).bits;
        emit(execute(mcv::mcv_cf_program(), "mcv", x, ro), mcv_format, true);
      }
    } else if (*mcv_program) {
      std::cout << mcv::mcv_cf_source();
    } else if (*tm_run) {
      tm::TuringMachine m = tm::parse_tm(read_file(machine_path));
      BitString x = read_input(input_literal, input_file);
      tm::TmRun r = tm::run_tm(m, x, Budget{ro.budget});
      std::cout << (r.accept ? "accept" : "reject") << " steps=" << r.steps << "\n";
    } else if (*tm_compile) {
      tm::TuringMachine m = tm::parse_tm(read_file(machine_path));
      std::string text = pretty_print(tm::compile_tm(m));
      if (output_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream(output_path) << text;
      }
    } else if (*bound) {
      ProgramOptions po;
      po.allow_choose = true;
      Program p = parse_program(read_file(program_path), po);
      auto [lo, hi] = parse_range(range);
      std::cout << "n,reach_bound\n";
      for (std::size_t n = lo; n <= hi; ++n) std::cout << n << "," << reach_bound(p, n) << "\n";
    }
  } catch (const Timeout& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Stuck& e) {
    std::cerr << "stuck: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const ReachBoundExceeded& e) {
    std::cerr << "reach bound exceeded: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
