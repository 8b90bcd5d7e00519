#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rz/catalogue.hpp"
#include "rz/cterm.hpp"
#include "rz/derivation.hpp"
#include "rz/errors.hpp"
#include "rz/machine.hpp"
#include "rz/numbering.hpp"
#include "rz/semantics.hpp"
#include "rz/term.hpp"
#include "rz/threads.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rz::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string steps_phrase(std::uint64_t n) {
  return std::to_string(n) + (n == 1 ? " step" : " steps");
}

// Inserts extra sections before the query's closing parenthesis. Sections are
// read last-wins, so an inserted universe or pole replaces the file's own.
std::string splice_sections(std::string text,
                            const std::vector<std::string>& fragments) {
  auto pos = text.find_last_of(')');
  if (pos == std::string::npos)
    throw rz::ParseError("query file: no closing parenthesis to splice into");
  std::string extra;
  for (const std::string& f : fragments) extra += " " + f + "\n";
  text.insert(pos, extra);
  return text;
}

int cmd_compile(const std::string& path, bool records) {
  rz::CTerm c = rz::compile(rz::parse_lambda(slurp(path)));
  auto free = rz::free_vars(c);
  if (records) {
    json j{{"kind", "compile"}, {"cterm", rz::to_string(c)}};
    j["free"] = std::vector<std::string>(free.begin(), free.end());
    if (free.empty())
      j["proof_like"] = rz::is_proof_like(rz::to_term(c));
    else
      j["proof_like"] = nullptr;
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << rz::to_string(c) << "\n";
  if (free.empty()) {
    std::cout << (rz::is_proof_like(rz::to_term(c))
                      ? "closed, proof-like\n"
                      : "closed, uses continuations\n");
  } else {
    std::cout << "free:";
    for (const std::string& v : free) std::cout << " " << v;
    std::cout << "\n";
  }
  return 0;
}

int cmd_run(const std::string& text, std::uint64_t budget, bool cycles,
            bool trace, bool records) {
  rz::Process p = rz::parse_process(text);
  rz::RunReport r = rz::run(p, budget, cycles);
  if (records) {
    if (trace) {
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        json j{{"kind", "state"},
               {"step", i},
               {"process", rz::to_string(r.trace[i])}};
        j["rule"] = r.rules[i];
        std::cout << j.dump() << "\n";
      }
    }
    json j{{"kind", "run"},
           {"status", rz::run_status_name(r.status)},
           {"steps", r.steps()},
           {"final", rz::to_string(r.last())},
           {"prefix", r.prefix_length},
           {"period", r.period}};
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (trace) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      std::cout << i << ": " << rz::to_string(r.trace[i]);
      if (i > 0) std::cout << "  [" << r.rules[i] << "]";
      std::cout << "\n";
    }
  } else {
    std::cout << rz::to_string(r.last()) << "\n";
  }
  switch (r.status) {
    case rz::RunStatus::Stuck:
      std::cout << "stuck after " << steps_phrase(r.steps()) << "\n";
      break;
    case rz::RunStatus::BudgetExhausted:
      std::cout << "budget exhausted after " << steps_phrase(r.steps())
                << "\n";
      break;
    case rz::RunStatus::Cyclic:
      std::cout << "cyclic after " << steps_phrase(r.prefix_length)
                << ", period " << r.period << "\n";
      break;
  }
  return 0;
}

int cmd_check(const std::string& path, bool records) {
  auto [ctx, d] = rz::parse_sequent(slurp(path));
  rz::CTerm prog = rz::check(d, ctx);
  auto free = rz::free_vars(prog);
  if (records) {
    json j{{"kind", "check"}, {"program", rz::to_string(prog)}};
    j["free"] = std::vector<std::string>(free.begin(), free.end());
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << rz::to_string(prog) << "\n";
  if (!free.empty()) {
    std::cout << "uses hypotheses:";
    for (const std::string& v : free) std::cout << " " << v;
    std::cout << "\n";
  }
  return 0;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  auto number = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw rz::ParseError("thread range: '" + s + "' is not a natural");
    return static_cast<std::uint64_t>(std::stoull(s));
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::uint64_t n = number(text);
    return {n, n};
  }
  std::uint64_t lo = number(text.substr(0, dots));
  std::uint64_t hi = number(text.substr(dots + 2));
  if (lo > hi) throw rz::ParseError("thread range: bounds out of order");
  return {lo, hi};
}

int cmd_threads(const std::string& range, std::uint64_t budget,
                bool records) {
  auto [lo, hi] = parse_range(range);
  int rc = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    rz::ThreadReport t = rz::run_thread(n, budget);
    bool local = true;
    for (std::uint32_t c : t.constants_seen)
      if (c != n) local = false;
    if (!local) rc = 1;
    if (records) {
      json j{{"kind", "thread"},
             {"index", n},
             {"status", rz::thread_status_name(t.status)},
             {"states", t.trace.size()},
             {"prefix", t.prefix_length},
             {"period", t.period},
             {"local", local}};
      j["constants"] = std::vector<std::uint32_t>(t.constants_seen.begin(),
                                                  t.constants_seen.end());
      std::cout << j.dump() << "\n";
      continue;
    }
    std::cout << "thread " << n << ": " << rz::thread_status_name(t.status);
    if (t.status == rz::ThreadStatus::Cyclic)
      std::cout << " (prefix " << t.prefix_length << ", period " << t.period
                << ")";
    std::cout << ", " << t.trace.size()
              << (t.trace.size() == 1 ? " state" : " states") << ", constants {";
    bool first = true;
    for (std::uint32_t c : t.constants_seen) {
      if (!first) std::cout << " ";
      std::cout << c;
      first = false;
    }
    std::cout << "}";
    if (!local) std::cout << " NONLOCAL";
    std::cout << "\n";
  }
  return rc;
}

int cmd_catalogue(const std::string& name, std::uint64_t budget_override,
                  bool records) {
  std::vector<std::string> names;
  if (name == "all")
    names = rz::catalogue_names();
  else
    names.push_back(name);
  std::size_t contracts = 0, failures = 0;
  for (const std::string& nm : names) {
    const rz::CatalogueEntry& e = rz::get(nm);
    rz::CatalogueReport rep = rz::run_contracts(nm, budget_override);
    if (!records) {
      std::cout << "== " << nm << "\n   source: " << e.source << "\n";
    }
    for (const rz::ContractOutcome& o : rep.outcomes) {
      ++contracts;
      if (!o.passed) ++failures;
      if (records) {
        json j{{"kind", "contract"},
               {"entry", nm},
               {"description", o.description},
               {"budget", o.budget},
               {"passed", o.passed}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "  [" << (o.passed ? "ok" : "FAIL") << "] "
                  << o.description << " (budget " << o.budget << ")\n";
      }
    }
  }
  if (!records) {
    std::cout << "entries: " << names.size() << ", contracts: " << contracts
              << ", failures: " << failures << "\n";
  }
  return failures ? 1 : 0;
}

int cmd_encode(const std::string& text, bool records) {
  rz::Term t = rz::parse_term(text);
  rz::BigNat code = rz::encode_term(t);
  if (records) {
    json j{{"kind", "encode"},
           {"term", rz::to_string(t)},
           {"code", code.str()}};
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << code << "\n";
  return 0;
}

int cmd_decode(const std::string& text, bool records) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw rz::ParseError("decode: '" + text + "' is not a natural");
  rz::BigNat code(text);
  rz::Term t = rz::decode_term(code);
  if (records) {
    json j{{"kind", "decode"}, {"code", text}, {"term", rz::to_string(t)}};
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << rz::to_string(t) << "\n";
  return 0;
}

int cmd_semantics(const std::string& path, const std::string& universe_path,
                  const std::string& pole_path, bool records) {
  std::string text = slurp(path);
  std::vector<std::string> fragments;
  if (!universe_path.empty()) fragments.push_back(slurp(universe_path));
  if (!pole_path.empty()) fragments.push_back(slurp(pole_path));
  if (!fragments.empty()) text = splice_sections(std::move(text), fragments);
  rz::QueryReport qr = rz::run_query_text(text);
  if (records) {
    json head{{"kind", "query"},
              {"fingerprint", qr.fingerprint},
              {"pole_certified", qr.pole_certified}};
    std::cout << head.dump() << "\n";
    for (const rz::QueryOutcome& o : qr.outcomes) {
      json j{{"kind", o.kind},
             {"formula", o.formula},
             {"subject", o.subject},
             {"verdict", rz::to_string(o.verdict)}};
      if (o.witness)
        j["witness"] = rz::to_string(*o.witness);
      else
        j["witness"] = nullptr;
      std::cout << j.dump() << "\n";
    }
    return 0;
  }
  std::cout << "universe " << qr.fingerprint << "\n";
  std::cout << "pole " << (qr.pole_certified ? "certified" : "uncertified")
            << "\n";
  for (const rz::QueryOutcome& o : qr.outcomes) {
    std::cout << o.kind << " " << o.formula << " @ " << o.subject << ": "
              << rz::to_string(o.verdict);
    if (o.witness) std::cout << "  witness " << rz::to_string(*o.witness);
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch workbench for the realizability machine"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t budget = 10000;
  std::string format = "human";
  std::string cycles = "on";
  app.add_option("--budget", budget, "step budget")->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"human", "records"}))
      ->capture_default_str();
  app.add_option("--cycles", cycles, "cycle detection for run")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();

  auto* c_compile = app.add_subcommand("compile", "compile a lambda term file");
  std::string compile_path;
  c_compile->add_option("file", compile_path, "lambda term file")->required();

  auto* c_run = app.add_subcommand("run", "step a process");
  std::string run_text;
  bool trace = false;
  c_run->add_option("process", run_text, "process text, e.g. \"I * K . pi0\"")
      ->required();
  c_run->add_flag("--trace", trace, "print every intermediate state");

  auto* c_check = app.add_subcommand("check", "check a derivation file");
  std::string check_path;
  c_check->add_option("file", check_path, "derivation file")->required();

  auto* c_threads = app.add_subcommand("threads", "run enumerated threads");
  std::string range;
  c_threads->add_option("range", range, "index or inclusive range a..b")
      ->required();

  auto* c_cat = app.add_subcommand("catalogue", "replay catalogue contracts");
  std::string entry = "all";
  c_cat->add_option("name", entry, "entry name, or 'all'")
      ->capture_default_str();

  auto* c_encode = app.add_subcommand("encode", "print a term's code");
  std::string encode_text;
  c_encode->add_option("term", encode_text, "term text")->required();

  auto* c_decode = app.add_subcommand("decode", "print a code's term");
  std::string decode_text;
  c_decode->add_option("code", decode_text, "natural number")->required();

  auto* c_sem = app.add_subcommand("semantics", "evaluate a query file");
  std::string query_path, universe_path, pole_path;
  c_sem->add_option("file", query_path, "query file")->required();
  c_sem->add_option("--universe", universe_path,
                    "file with a (universe ...) section that overrides the "
                    "query's own");
  c_sem->add_option("--pole", pole_path,
                    "file with a (pole ...) section that overrides the "
                    "query's own");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  bool records = format == "records";
  try {
    if (*c_compile) return cmd_compile(compile_path, records);
    if (*c_run)
      return cmd_run(run_text, budget, cycles == "on", trace, records);
    if (*c_check) return cmd_check(check_path, records);
    if (*c_threads) return cmd_threads(range, budget, records);
    if (*c_cat)
      return cmd_catalogue(entry, app.count("--budget") ? budget : 0,
                           records);
    if (*c_encode) return cmd_encode(encode_text, records);
    if (*c_decode) return cmd_decode(decode_text, records);
    if (*c_sem)
      return cmd_semantics(query_path, universe_path, pole_path, records);
  } catch (const rz::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rz::CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
