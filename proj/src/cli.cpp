#include "densevec/cli.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "densevec/feasible.hpp"
#include "densevec/qe.hpp"
#include "densevec/sexpr.hpp"
#include "densevec/skolem.hpp"

namespace densevec::cli {

namespace {

using nlohmann::json;

struct Options {
  Completion completion = Completion::germ_pos_inf();
  bool json_output = false;
  bool stats = false;
  std::uint64_t seed = 0;
  std::string dump_session;  // path; empty = off
  unsigned jobs = 1;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ';') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

Box parse_box(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s.front() == '(') s = s.substr(1);
  if (!s.empty() && s.back() == ')') s.pop_back();
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("box needs the form (lo,hi)", 1, 1);
  return Box{parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

ModelElement parse_element(const sexpr::Node& n) {
  sexpr::expect_list(n, "elem");
  ModelElement e;
  for (std::size_t i = 1; i < n.kids.size(); ++i) {
    const sexpr::Node& part = n.kids[i];
    if (part.is_list("one")) {
      e.one_coeff = e.one_coeff + parse_scalar_text(part.at(1).atom);
    } else if (part.is_list("gen")) {
      int id = std::stoi(part.at(1).atom);
      RationalFunction q = parse_scalar_text(part.at(2).atom);
      if (!q.is_zero()) {
        auto [it, inserted] = e.combo.emplace(id, q);
        if (!inserted) it->second = it->second + q;
      }
    } else {
      throw ParseError("element parts are (one \"rf\") or (gen id \"rf\")", 1, 1);
    }
  }
  return e;
}

std::string format_stats(const QEStats& s) {
  return "dnf-branches=" + std::to_string(s.dnf_branches) +
         " fm-steps=" + std::to_string(s.fm_steps);
}

std::string emit(const Options& opt, const std::string& command, json fields) {
  if (opt.json_output) {
    fields["command"] = command;
    return fields.dump() + "\n";
  }
  std::string out;
  if (fields.contains("verdict")) out += fields["verdict"].get<std::string>() + "\n";
  if (fields.contains("formula")) out += fields["formula"].get<std::string>() + "\n";
  if (fields.contains("text"))
    for (const auto& line : fields["text"]) out += line.get<std::string>() + "\n";
  if (opt.stats && fields.contains("stats"))
    out += "stats: dnf-branches=" + std::to_string(fields["stats"]["dnf_branches"].get<long>()) +
           " fm-steps=" + std::to_string(fields["stats"]["fm_steps"].get<long>()) + "\n";
  return out;
}

json stats_json(const QEStats& s) {
  return json{{"dnf_branches", s.dnf_branches}, {"fm_steps", s.fm_steps}};
}

// --- per-command handlers; each returns the output text -------------------

std::string run_decide(const Options& opt, const std::string& input) {
  FormulaPtr f = parse_formula(input);
  require_sentence(f);
  bool verdict = decide(f, opt.completion);
  return emit(opt, "decide", json{{"verdict", verdict ? "TRUE" : "FALSE"}});
}

std::string run_qe(const Options& opt, const std::string& input) {
  QEResult r = elim_quantifiers(parse_formula(input));
  return emit(opt, "qe",
              json{{"formula", print_canonical(r.formula)}, {"stats", stats_json(r.stats)}});
}

std::string run_einf(const Options& opt, const std::string& input) {
  FormulaPtr f = parse_formula(input);
  if (f->kind != Formula::Kind::ExistsInf)
    throw ParseError("einf expects an (exists-inf (x) ...) formula", 1, 1);
  QEStats stats;
  FormulaPtr body = elim_quantifiers(f->kids[0]).formula;
  FormulaPtr out = elim_exists_inf(f->binders[0], body, &stats);
  return emit(opt, "einf",
              json{{"formula", print_canonical(out)}, {"stats", stats_json(stats)}});
}

std::string run_topo(const Options& opt, const std::string& input, TopoMode mode,
                     const std::string& name) {
  FormulaPtr f = parse_formula(input);
  TopoResult r = topo(f, mode, opt.completion);
  json fields;
  if (r.verdict)
    fields["verdict"] = *r.verdict ? "TRUE" : "FALSE";
  else
    fields["formula"] = print_canonical(r.formula);
  fields["stats"] = stats_json(r.stats);
  return emit(opt, name, fields);
}

std::string run_witness(const Options& opt, const std::string& dirs_text,
                        const std::string& boxes_text) {
  std::vector<RationalFunction> dirs;
  for (const auto& part : split_list(dirs_text)) dirs.push_back(parse_scalar_text(part));
  std::vector<Box> boxes;
  for (const auto& part : split_list(boxes_text)) boxes.push_back(parse_box(part));

  ModelSession session(opt.completion, opt.seed);
  ModelElement witness = session.witness_in_boxes(dirs, boxes);
  int gen = witness.combo.begin()->first;

  json lines = json::array();
  json values = json::array();
  for (const auto& d : dirs) {
    GenericValue v = session.eval_direction(gen, d);
    lines.push_back("lam " + d.to_string() + " g" + std::to_string(gen) + " = " + v.to_string());
    values.push_back({{"direction", d.to_string()}, {"value", v.to_string()}});
  }
  if (!opt.dump_session.empty()) write_file(opt.dump_session, session.dump());
  json fields{{"text", lines}, {"witness", values}, {"generator", gen}};
  if (!opt.dump_session.empty()) fields["session_dump"] = opt.dump_session;
  return emit(opt, "witness", fields);
}

std::string run_span(const Options& opt, const std::string& input) {
  sexpr::Node root = sexpr::read(input);
  sexpr::expect_list(root, "span");
  std::optional<ModelElement> target;
  std::vector<ModelElement> members;
  for (std::size_t i = 1; i < root.kids.size(); ++i) {
    const sexpr::Node& n = root.kids[i];
    if (n.is_list("target")) {
      target = parse_element(n.at(1));
    } else if (n.is_list("members")) {
      for (std::size_t j = 1; j < n.kids.size(); ++j) members.push_back(parse_element(n.kids[j]));
    } else {
      throw ParseError("span input has (target ...) and (members ...)", 1, 1);
    }
  }
  if (!target) throw ParseError("span input needs a target", 1, 1);
  auto coeffs = span_membership(*target, members);
  if (!coeffs) return emit(opt, "span", json{{"verdict", "NOT-IN-SPAN"}});
  json lines = json::array();
  json cs = json::array();
  for (std::size_t i = 0; i < coeffs->size(); ++i) {
    lines.push_back("coeff " + std::to_string(i) + " = " + (*coeffs)[i].to_string());
    cs.push_back((*coeffs)[i].to_string());
  }
  return emit(opt, "span", json{{"verdict", "IN-SPAN"}, {"text", lines}, {"coefficients", cs}});
}

std::string run_exchange(const Options& opt, const std::string& input) {
  sexpr::Node root = sexpr::read(input);
  sexpr::expect_list(root, "exchange");
  std::vector<ModelElement> set;
  std::optional<ModelElement> a, b;
  for (std::size_t i = 1; i < root.kids.size(); ++i) {
    const sexpr::Node& n = root.kids[i];
    if (n.is_list("set")) {
      for (std::size_t j = 1; j < n.kids.size(); ++j) set.push_back(parse_element(n.kids[j]));
    } else if (n.is_list("a")) {
      a = parse_element(n.at(1));
    } else if (n.is_list("b")) {
      b = parse_element(n.at(1));
    } else {
      throw ParseError("exchange input has (set ...), (a ...), (b ...)", 1, 1);
    }
  }
  if (!a || !b) throw ParseError("exchange input needs a and b", 1, 1);
  ExchangeOutcome outcome = exchange_check(set, *a, *b);
  const char* text = outcome == ExchangeOutcome::Holds     ? "HOLDS"
                     : outcome == ExchangeOutcome::Vacuous ? "VACUOUS"
                                                           : "VIOLATION";
  return emit(opt, "exchange", json{{"verdict", text}});
}

std::string run_nonstrong(const Options& opt, const std::string& rows_text,
                          const std::string& cols_text, const std::string& path_text) {
  std::vector<RationalFunction> rows;
  for (const auto& part : split_list(rows_text)) rows.push_back(parse_scalar_text(part));
  std::vector<Box> cols;
  for (const auto& part : split_list(cols_text)) cols.push_back(parse_box(part));
  std::vector<std::size_t> path;
  for (const auto& part : split_list(path_text)) path.push_back(std::stoul(part));

  ModelSession session(opt.completion, opt.seed);
  NonstrongResult r = nonstrong_demo(session, rows, cols, path);
  json lines = json::array();
  lines.push_back("witness: " + r.witness.to_string());
  lines.push_back(std::string("memberships: ") + (r.memberships_verified ? "VERIFIED" : "FAILED"));
  lines.push_back(std::string("same-row pairs: ") +
                  (r.same_row_pairs_infeasible ? "INFEASIBLE" : "FEASIBLE") + " (" +
                  std::to_string(r.pairs_checked) + " checked)");
  if (!opt.dump_session.empty()) write_file(opt.dump_session, session.dump());
  return emit(opt, "nonstrong",
              json{{"text", lines},
                   {"memberships_verified", r.memberships_verified},
                   {"same_row_pairs_infeasible", r.same_row_pairs_infeasible},
                   {"pairs_checked", r.pairs_checked}});
}

std::string run_skolem_split(const Options& opt, const std::string& input) {
  sexpr::Node root = sexpr::read(input);
  sexpr::expect_list(root, "skolem-split");
  SkolemSignature sig = parse_signature(sexpr::to_text(root.at(1)));
  TermChain chain = parse_chain(sexpr::to_text(root.at(2)));
  ChainSplit split = split_term_chain(sig, chain);
  json lines = json::array();
  lines.push_back("phi: " + print_canonical(split.base));
  lines.push_back("config: " + print_config(split.config));
  return emit(opt, "skolem-split",
              json{{"text", lines},
                   {"phi", print_canonical(split.base)},
                   {"config", print_config(split.config)}});
}

std::string run_skolem_axiom(const Options& opt, const std::string& input) {
  sexpr::Node root = sexpr::read(input);
  sexpr::expect_list(root, "skolem-axiom");
  std::optional<SkolemSignature> sig;
  std::vector<std::string> vars;
  std::size_t k = 0;
  FormulaPtr phi;
  UniformConfiguration config;
  for (std::size_t i = 1; i < root.kids.size(); ++i) {
    const sexpr::Node& n = root.kids[i];
    if (n.is_list("signature")) {
      sig = parse_signature(sexpr::to_text(n));
    } else if (n.is_list("vars")) {
      for (std::size_t j = 1; j < n.kids.size(); ++j) vars.push_back(n.kids[j].atom);
    } else if (n.is_list("k")) {
      k = std::stoul(n.at(1).atom);
    } else if (n.is_list("phi")) {
      phi = parse_formula(sexpr::payload_text(n, 1));
    } else if (n.is_list("config")) {
      config = parse_config(sexpr::to_text(n));
    } else {
      throw ParseError("unknown skolem-axiom entry", 1, 1);
    }
  }
  if (!sig || !phi) throw ParseError("skolem-axiom needs a signature and phi", 1, 1);
  SkFormulaPtr axiom = axiom_instance(*sig, phi, config, vars, k);
  return emit(opt, "skolem-axiom", json{{"formula", sk_print(axiom)}});
}

std::string run_skolem_check(const Options& opt, const std::string& input) {
  sexpr::Node root = sexpr::read(input);
  sexpr::expect_list(root, "skolem-check");
  std::optional<SkolemSignature> sig;
  std::size_t gens = 0;
  SkolemTable table;
  std::vector<std::vector<ModelElement>> points;
  for (std::size_t i = 1; i < root.kids.size(); ++i) {
    const sexpr::Node& n = root.kids[i];
    if (n.is_list("signature")) {
      sig = parse_signature(sexpr::to_text(n));
    } else if (n.is_list("gens")) {
      gens = std::stoul(n.at(1).atom);
    } else if (n.is_list("table")) {
      for (std::size_t j = 1; j < n.kids.size(); ++j) {
        const sexpr::Node& entry = n.kids[j];
        SkolemAssignment row;
        row.fn = entry.at(0).atom;
        const sexpr::Node& args = entry.at(1);
        for (const auto& arg : args.kids) row.args.push_back(parse_element(arg));
        row.value = parse_element(entry.at(2));
        table.push_back(std::move(row));
      }
    } else if (n.is_list("points")) {
      for (std::size_t j = 1; j < n.kids.size(); ++j) {
        std::vector<ModelElement> point;
        for (const auto& arg : n.kids[j].kids) point.push_back(parse_element(arg));
        points.push_back(std::move(point));
      }
    } else {
      throw ParseError("unknown skolem-check entry", 1, 1);
    }
  }
  if (!sig) throw ParseError("skolem-check needs a signature", 1, 1);
  ModelSession session(opt.completion, opt.seed);
  for (std::size_t i = 0; i < gens; ++i) session.fresh_generator();
  FiniteCheckReport report = check_finite_model(session, *sig, table, points);
  json lines = json::array();
  lines.push_back(report.violations.empty()
                      ? "OK checks=" + std::to_string(report.checks)
                      : "VIOLATIONS " + std::to_string(report.violations.size()) + "/" +
                            std::to_string(report.checks));
  json vs = json::array();
  for (const auto& v : report.violations) {
    lines.push_back(v.fn + " @ point " + std::to_string(v.point_index) + ": " + v.reason);
    vs.push_back({{"fn", v.fn}, {"point", v.point_index}, {"reason", v.reason}});
  }
  if (!opt.dump_session.empty()) write_file(opt.dump_session, session.dump());
  return emit(opt, "skolem-check",
              json{{"text", lines}, {"checks", report.checks}, {"violations", vs}});
}

// --- driver ----------------------------------------------------------------

using Handler = std::string (*)(const Options&, const std::string&);

int run_over_files(const Options& opt, const std::vector<std::string>& files, Handler handler,
                   std::ostream& out, std::ostream& err) {
  std::vector<std::string> results(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      try {
        results[i] = handler(opt, read_input(files[i]));
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, files.size()));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  bool failed = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      err << files[i] << ": " << errors[i] << "\n";
      failed = true;
      continue;
    }
    if (files.size() > 1) out << "== " << files[i] << " ==\n";
    out << results[i];
  }
  return failed ? 2 : 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"densevec - decision procedures over the ordered group with dense scalar actions"};
  app.require_subcommand(1);

  std::string completion_text = "germ-pos-inf";
  std::string format_text = "text";
  Options opt;
  app.add_option("--completion", completion_text,
                 "completion of the type of 1: germ-pos-inf|germ-zero|seeded:<u64>");
  app.add_option("--format", format_text, "output format: text|json");
  app.add_option("--seed", opt.seed, "session seed (recorded in dumps)");
  app.add_flag("--stats", opt.stats, "print elimination statistics");
  app.add_option("--dump-session", opt.dump_session, "write the session record to this path");
  app.add_option("--jobs", opt.jobs, "process input files in parallel");

  std::vector<std::string> files;
  std::string dirs, boxes, rows, cols, path;

  auto add_file_cmd = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("files", files, "input files (- for stdin)")->expected(-1);
    return sub;
  };

  CLI::App* cmd_decide = add_file_cmd("decide", "decide a sentence");
  CLI::App* cmd_qe = add_file_cmd("qe", "eliminate quantifiers");
  CLI::App* cmd_einf = add_file_cmd("einf", "eliminate a top-level exists-inf");
  CLI::App* cmd_interior = add_file_cmd("interior", "interior of a quantifier-free formula");
  CLI::App* cmd_closure = add_file_cmd("closure", "closure of a quantifier-free formula");
  CLI::App* cmd_is_open = add_file_cmd("is-open", "decide whether a definable set is open");
  CLI::App* cmd_span = add_file_cmd("span", "Q(t)-span membership");
  CLI::App* cmd_exchange = add_file_cmd("exchange", "Steinitz exchange check");
  CLI::App* cmd_split = add_file_cmd("skolem-split", "split a term chain");
  CLI::App* cmd_axiom = add_file_cmd("skolem-axiom", "instantiate a Winkler axiom");
  CLI::App* cmd_check = add_file_cmd("skolem-check", "check a finite Skolem table");

  CLI::App* cmd_witness = app.add_subcommand("witness", "density witness inside boxes");
  cmd_witness->add_option("--dirs", dirs, "directions, ';'-separated scalars")->required();
  cmd_witness->add_option("--boxes", boxes, "open intervals, e.g. \"(0,1);(5,6)\"")->required();

  CLI::App* cmd_nonstrong = app.add_subcommand("nonstrong", "array demo witness and report");
  cmd_nonstrong->add_option("--rows", rows, "row directions, ';'-separated")->required();
  cmd_nonstrong->add_option("--cols", cols, "column intervals, ';'-separated")->required();
  cmd_nonstrong->add_option("--path", path, "column index per row, ';'-separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    opt.completion = Completion::parse(completion_text);
    if (format_text == "json")
      opt.json_output = true;
    else if (format_text != "text")
      throw ParseError("unknown format: " + format_text, 1, 1);

    if (cmd_witness->parsed()) {
      out << run_witness(opt, dirs, boxes);
      return 0;
    }
    if (cmd_nonstrong->parsed()) {
      out << run_nonstrong(opt, rows, cols, path);
      return 0;
    }

    Handler handler = nullptr;
    if (cmd_decide->parsed()) handler = run_decide;
    if (cmd_qe->parsed()) handler = run_qe;
    if (cmd_einf->parsed()) handler = run_einf;
    if (cmd_interior->parsed())
      handler = [](const Options& o, const std::string& in) {
        return run_topo(o, in, TopoMode::Interior, "interior");
      };
    if (cmd_closure->parsed())
      handler = [](const Options& o, const std::string& in) {
        return run_topo(o, in, TopoMode::Closure, "closure");
      };
    if (cmd_is_open->parsed())
      handler = [](const Options& o, const std::string& in) {
        return run_topo(o, in, TopoMode::IsOpen, "is-open");
      };
    if (cmd_span->parsed()) handler = run_span;
    if (cmd_exchange->parsed()) handler = run_exchange;
    if (cmd_split->parsed()) handler = run_skolem_split;
    if (cmd_axiom->parsed()) handler = run_skolem_axiom;
    if (cmd_check->parsed()) handler = run_skolem_check;
    if (!handler) {
      err << "no command selected\n";
      return 2;
    }
    if (files.empty()) files.push_back("-");
    return run_over_files(opt, files, handler, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace densevec::cli
