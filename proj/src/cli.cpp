#include "kmdesign/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kmdesign/io.hpp"
#include "kmdesign/iso.hpp"

namespace kmdesign::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  int t = 0;
  int v = 0;
  int k = 0;
  std::uint64_t lambda = 0;
  std::string group;
  std::string matrix;
  std::vector<std::string> designs;
  std::string blocks;
  std::string solutions;
  std::optional<std::uint64_t> bound;
  std::string mode = "enumerate";
  std::optional<std::uint64_t> limit;
  std::optional<double> budget_seconds;
  std::uint64_t budget_nodes = IsoOptions{}.node_budget;
  std::string order = "include-first";
  std::size_t index = 0;
  int workers = 1;
  bool count = false;
  std::string out;
};

PermutationGroup load_group_file(const std::string& path) {
  const io::GroupFile gf = io::load_group(path);
  return generate_group(gf.generators);
}

std::string base_name(const std::string& path) { return fs::path(path).filename().string(); }

// Writes to --out when given, else to the output stream.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& writer) {
  if (o.out.empty()) {
    writer(out);
  } else {
    io::save(o.out, writer);
  }
}

SolveRequest make_request(const Options& o) {
  SolveRequest req;
  req.lambda = o.lambda;
  if (o.mode == "first") {
    req.mode = SolveMode::kFirst;
  } else if (o.mode == "count") {
    req.mode = SolveMode::kCount;
  } else {
    req.mode = SolveMode::kEnumerate;
  }
  if (o.count) req.mode = SolveMode::kCount;
  req.solution_limit = o.limit;
  if (o.budget_seconds) req.time_budget = std::chrono::duration<double>(*o.budget_seconds);
  req.workers = o.workers;
  req.branch_order = o.order == "exclude-first" ? BranchOrder::kExcludeFirst : BranchOrder::kIncludeFirst;
  return req;
}

OrbitSet k_orbits(const PermutationGroup& g, const Options& o, const std::string& label) {
  OrbitOptions oo;
  oo.workers = o.workers;
  OrbitSet s = o.bound ? enumerate_short_orbits(g, o.k, *o.bound, oo) : enumerate_orbits(g, o.k, oo);
  s.group_label = label;
  return s;
}

KmMatrix matrix_for(const PermutationGroup& g, const Options& o) {
  OrbitSet rows = enumerate_orbits(g, o.t);
  return build_matrix(g, o.t, k_orbits(g, o, base_name(o.group)), rows);
}

void print_verify(std::ostream& out, const VerifyReport& r, int t) {
  if (r.ok) {
    out << "verified t=" << t << " lambda=" << r.lambda << '\n';
  } else {
    out << "not a " << t << "-design: " << r.witness->to_string() << " lies in " << r.witness_count
        << " blocks, the first " << t << "-subset in " << r.lambda << '\n';
  }
}

int cmd_params(const Options& o, std::ostream& out) {
  const DesignParameters p = parameters(o.t, o.v, o.k, o.lambda);
  out << "t=" << p.t << " v=" << p.v << " k=" << p.k << " lambda=" << p.lambda << '\n';
  out << "lambda_s=";
  for (std::size_t s = 0; s < p.lambda_s.size(); ++s) {
    out << (s ? "," : "") << p.lambda_s[s].num;
    if (!p.lambda_s[s].is_integer()) out << '/' << p.lambda_s[s].den;
  }
  out << '\n';
  out << "b=";
  if (p.b) {
    out << *p.b;
  } else {
    out << "non-integer";
  }
  out << '\n';
  out << "lambda_min=" << p.lambda_min << '\n';
  out << "lambda_max=" << p.lambda_max << '\n';
  out << "M=" << p.m << '\n';
  out << "admissible=" << (p.admissible ? "yes" : "no") << '\n';
  out << "fisher=" << (p.fisher_ok ? "ok" : "violated") << '\n';
  return p.admissible && p.fisher_ok ? kOk : kDomainFailure;
}

int cmd_orbits(const Options& o, std::ostream& out) {
  const PermutationGroup g = load_group_file(o.group);
  const OrbitSet s = k_orbits(g, o, base_name(o.group));
  emit(o, out, [&](std::ostream& os) { io::write_orbits(os, s); });
  return kOk;
}

int cmd_matrix(const Options& o, std::ostream& out) {
  const PermutationGroup g = load_group_file(o.group);
  const KmMatrix a = matrix_for(g, o);
  emit(o, out, [&](std::ostream& os) { io::write_matrix(os, a); });
  return kOk;
}

int solve_status(const SolveResult& r) {
  if (r.status == SolveStatus::kIncomplete) return kBudget;
  return r.count == 0 ? kDomainFailure : kOk;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const KmMatrix a = io::load_matrix(o.matrix);
  SolveRequest req = make_request(o);
  if (!o.group.empty()) {
    const PermutationGroup g = load_group_file(o.group);
    if (g.degree() != a.v()) throw InputError(o.group + " acts on " + std::to_string(g.degree()) + " points, " + o.matrix + " on " + std::to_string(a.v()));
    req.implied = implied_constraints(g, a, o.lambda);
  }
  const SolveResult r = solve(a, req);
  io::SolutionsFile sf{base_name(o.matrix), o.lambda, r.count, r.status == SolveStatus::kComplete, r.solutions};
  emit(o, out, [&](std::ostream& os) { io::write_solutions(os, sf); });
  if (r.status == SolveStatus::kIncomplete) err << "time budget exhausted after " << r.count << " solutions\n";
  return solve_status(r);
}

int write_checked_design(const Options& o, std::ostream& out, const Design& d, int t) {
  const VerifyReport rep = verify(d, t, o.workers);
  if (!rep.ok) {
    print_verify(out, rep, t);
    return kDomainFailure;
  }
  const io::DesignFile df{t, rep.lambda, d};
  emit(o, out, [&](std::ostream& os) { io::write_design(os, df); });
  return kOk;
}

int cmd_expand(const Options& o, std::ostream& out) {
  const PermutationGroup g = load_group_file(o.group);
  if (!o.blocks.empty()) {
    const io::BaseBlocks bb = io::load_baseblocks(o.blocks);
    if (bb.v != g.degree()) throw InputError(o.blocks + " has v=" + std::to_string(bb.v) + " but the group acts on " + std::to_string(g.degree()) + " points");
    const int t = o.t > 0 ? o.t : bb.t;
    if (t <= 0) throw InputError("no t given and " + o.blocks + " carries none");
    return write_checked_design(o, out, expand(g, bb.blocks), t);
  }
  if (o.matrix.empty() || o.solutions.empty()) throw InputError("expand needs --blocks, or --matrix with --solutions");
  const KmMatrix a = io::load_matrix(o.matrix);
  const io::SolutionsFile sf = io::load_solutions(o.solutions);
  if (o.index >= sf.solutions.size()) {
    throw InputError(o.solutions + " has " + std::to_string(sf.solutions.size()) + " solutions, no index " + std::to_string(o.index));
  }
  return write_checked_design(o, out, solution_to_design(a, sf.solutions[o.index], g), a.t());
}

io::DesignFile single_design(const Options& o) {
  if (o.designs.size() != 1) throw InputError("expected exactly one --design");
  return io::load_design(o.designs.front());
}

int cmd_verify(const Options& o, std::ostream& out) {
  const io::DesignFile df = single_design(o);
  const int t = o.t > 0 ? o.t : df.t;
  const VerifyReport r = verify(df.design, t, o.workers);
  print_verify(out, r, t);
  if (!r.ok) return kDomainFailure;
  if (t == df.t && r.lambda != df.lambda) {
    out << "header claims lambda=" << df.lambda << '\n';
    return kDomainFailure;
  }
  return kOk;
}

int cmd_supplement(const Options& o, std::ostream& out) {
  const io::DesignFile df = single_design(o);
  return write_checked_design(o, out, supplement(df.design), o.t > 0 ? o.t : df.t);
}

int cmd_complement(const Options& o, std::ostream& out) {
  const io::DesignFile df = single_design(o);
  return write_checked_design(o, out, complement_design(df.design), o.t > 0 ? o.t : df.t);
}

int cmd_union(const Options& o, std::ostream& out) {
  if (o.designs.size() != 2) throw InputError("union needs exactly two --design files");
  const io::DesignFile a = io::load_design(o.designs[0]);
  const io::DesignFile b = io::load_design(o.designs[1]);
  return write_checked_design(o, out, disjoint_union(a.design, b.design), o.t > 0 ? o.t : a.t);
}

int cmd_fingerprint(const Options& o, std::ostream& out) {
  const io::DesignFile df = single_design(o);
  const Fingerprint f = fingerprint(df.design);
  out << "v=" << f.v << " k=" << f.k << " b=" << f.b << '\n';
  out << "intersections";
  for (const auto& [size, n] : f.intersection_histogram) out << ' ' << size << ':' << n;
  out << '\n';
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < f.profiles.size(); ++i) {
    if (i == 0 || f.profiles[i] != f.profiles[i - 1]) ++distinct;
  }
  out << "profiles " << distinct << " distinct\n";
  for (std::size_t i = 0; i < f.profiles.size();) {
    std::size_t e = i;
    while (e < f.profiles.size() && f.profiles[e] == f.profiles[i]) ++e;
    out << e - i << " x";
    for (std::uint32_t c : f.profiles[i]) out << ' ' << c;
    out << '\n';
    i = e;
  }
  return kOk;
}

int cmd_classes(const Options& o, std::ostream& out) {
  if (o.designs.empty()) throw InputError("classes needs at least one --design");
  std::vector<Design> ds;
  for (const auto& p : o.designs) ds.push_back(io::load_design(p).design);
  IsoOptions opt;
  opt.node_budget = o.budget_nodes;
  const IsoClasses cls = classify(ds, opt);
  bool complete = cls.complete;
  out << "classes " << cls.classes.size() << (cls.complete ? "" : " (some tests unknown)") << '\n';
  for (std::size_t c = 0; c < cls.classes.size(); ++c) {
    const auto& members = cls.classes[c];
    const AutomorphismResult aut = automorphism_order(ds[members.front()], opt);
    complete = complete && aut.complete;
    out << "class " << c + 1 << " representative=" << o.designs[members.front()] << " aut=" << aut.order_string()
        << (aut.complete ? "" : "+") << " members=";
    for (std::size_t i = 0; i < members.size(); ++i) out << (i ? "," : "") << o.designs[members[i]];
    out << '\n';
  }
  return complete ? kOk : kBudget;
}

int cmd_autorder(const Options& o, std::ostream& out) {
  const io::DesignFile df = single_design(o);
  IsoOptions opt;
  opt.node_budget = o.budget_nodes;
  const AutomorphismResult aut = automorphism_order(df.design, opt);
  out << (aut.complete ? "order=" : "order>=") << aut.order_string() << '\n';
  out << "generators=" << aut.generators.size() << '\n';
  return aut.complete ? kOk : kBudget;
}

int cmd_pipeline(const Options& o, std::ostream& out) {
  const PermutationGroup g = load_group_file(o.group);
  out << "group " << base_name(o.group) << " degree=" << g.degree() << " order=" << g.order() << '\n';
  const OrbitSet rows = enumerate_orbits(g, o.t);
  const OrbitSet cols = k_orbits(g, o, base_name(o.group));
  out << "orbits t=" << o.t << ": " << rows.orbits.size() << ", k=" << o.k << ": " << cols.orbits.size()
      << (cols.complete ? "" : " (short orbits only)") << '\n';
  const KmMatrix a = build_matrix(g, o.t, cols, rows);
  out << "matrix " << a.num_rows() << "x" << a.num_cols() << '\n';

  SolveRequest req = make_request(o);
  req.implied = implied_constraints(g, a, o.lambda);
  const SolveResult counted = solve(a, req);
  out << "solutions " << counted.count << (counted.limit_reached ? "+" : "")
      << (counted.status == SolveStatus::kComplete ? "" : " (incomplete)") << '\n';

  std::optional<Solution> first;
  if (!counted.solutions.empty()) {
    first = counted.solutions.front();
  } else if (counted.count > 0) {
    SolveRequest one = req;
    one.mode = SolveMode::kEnumerate;
    one.solution_limit = 1;
    const SolveResult r = solve(a, one);
    if (!r.solutions.empty()) first = r.solutions.front();
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    const std::string stem = (fs::path(o.out) / fs::path(o.group).stem()).string();
    io::save(stem + ".orb", [&](std::ostream& os) { io::write_orbits(os, cols); });
    io::save(stem + ".km", [&](std::ostream& os) { io::write_matrix(os, a); });
    io::SolutionsFile sf{fs::path(stem + ".km").filename().string(), o.lambda, counted.count,
                         counted.status == SolveStatus::kComplete, counted.solutions};
    io::save(stem + ".sol", [&](std::ostream& os) { io::write_solutions(os, sf); });
  }
  if (!first) return solve_status(counted);

  const Design d = solution_to_design(a, *first, g);
  out << "design from columns";
  for (std::size_t j : first->columns) out << ' ' << j;
  out << ": b=" << d.b() << '\n';
  const VerifyReport rep = verify(d, o.t, o.workers);
  print_verify(out, rep, o.t);
  if (!o.out.empty()) {
    const std::string stem = (fs::path(o.out) / fs::path(o.group).stem()).string();
    io::save(stem + ".dsg", [&](std::ostream& os) { io::write_design(os, io::DesignFile{o.t, rep.lambda, d}); });
  }
  if (!rep.ok || rep.lambda != o.lambda) return kDomainFailure;
  return counted.status == SolveStatus::kComplete ? kOk : kBudget;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kramer-Mesner construction of t-designs with a prescribed automorphism group", "kmdesign"};
  app.require_subcommand(1);
  Options o;

  auto need = [](CLI::App* sub, const char* name, auto& var, const char* help) {
    return sub->add_option(name, var, help)->required();
  };
  auto with_tvkl = [&](CLI::App* sub) {
    need(sub, "--t", o.t, "strength t");
    need(sub, "--v", o.v, "number of points");
    need(sub, "--k", o.k, "block size");
    need(sub, "--lambda", o.lambda, "lambda");
  };
  auto with_workers = [&](CLI::App* sub) { sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber); };
  auto with_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default: standard output)"); };
  auto with_design = [&](CLI::App* sub) { need(sub, "--design", o.designs, "design file"); };
  auto with_solve = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "first, enumerate or count")->check(CLI::IsMember({"first", "enumerate", "count"}));
    sub->add_option("--limit", o.limit, "stop after this many solutions");
    sub->add_option("--budget-seconds", o.budget_seconds, "time budget")->check(CLI::NonNegativeNumber);
    sub->add_option("--order", o.order, "include-first or exclude-first")->check(CLI::IsMember({"include-first", "exclude-first"}));
  };

  auto* params = app.add_subcommand("params", "parameter arithmetic for t-(v,k,lambda)");
  with_tvkl(params);

  auto* orbits = app.add_subcommand("orbits", "orbits of k-subsets");
  need(orbits, "--group", o.group, "group file");
  need(orbits, "--k", o.k, "subset size");
  orbits->add_option("--bound", o.bound, "only orbits of at most this size");
  with_workers(orbits);
  with_out(orbits);

  auto* matrix = app.add_subcommand("matrix", "Kramer-Mesner matrix");
  need(matrix, "--group", o.group, "group file");
  need(matrix, "--t", o.t, "strength t");
  need(matrix, "--k", o.k, "block size");
  matrix->add_option("--bound", o.bound, "use only column orbits of at most this size");
  with_workers(matrix);
  with_out(matrix);

  auto* solve_cmd = app.add_subcommand("solve", "0-1 solutions of A x = lambda j");
  need(solve_cmd, "--matrix", o.matrix, "matrix file");
  need(solve_cmd, "--lambda", o.lambda, "lambda");
  solve_cmd->add_option("--group", o.group, "group file; adds the lower-level equations for pruning");
  solve_cmd->add_flag("--count", o.count, "count only");
  with_solve(solve_cmd);
  with_workers(solve_cmd);
  with_out(solve_cmd);

  auto* expand_cmd = app.add_subcommand("expand", "design from base blocks or from a solution");
  need(expand_cmd, "--group", o.group, "group file");
  expand_cmd->add_option("--blocks", o.blocks, "base-block file");
  expand_cmd->add_option("--matrix", o.matrix, "matrix file");
  expand_cmd->add_option("--solutions", o.solutions, "solutions file");
  expand_cmd->add_option("--index", o.index, "which solution (0-based)");
  expand_cmd->add_option("--t", o.t, "strength t to verify");
  with_workers(expand_cmd);
  with_out(expand_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "brute-force t-design check");
  with_design(verify_cmd);
  verify_cmd->add_option("--t", o.t, "strength t (default: from the file)");
  with_workers(verify_cmd);

  for (auto [name, help] : {std::pair{"supplement", "all k-subsets not in the design"},
                            std::pair{"complement", "complement of every block"}}) {
    auto* sub = app.add_subcommand(name, help);
    with_design(sub);
    sub->add_option("--t", o.t, "strength t (default: from the file)");
    with_workers(sub);
    with_out(sub);
  }

  auto* union_cmd = app.add_subcommand("union", "union of two designs with no common block");
  need(union_cmd, "--design", o.designs, "design file (twice)")->expected(2);
  union_cmd->add_option("--t", o.t, "strength t (default: from the first file)");
  with_workers(union_cmd);
  with_out(union_cmd);

  auto* fp = app.add_subcommand("fingerprint", "block intersection invariants");
  with_design(fp);

  auto* classes = app.add_subcommand("classes", "isomorphism classes");
  need(classes, "--design", o.designs, "design files")->expected(1, -1);
  classes->add_option("--budget-nodes", o.budget_nodes, "search nodes per test");

  auto* autorder = app.add_subcommand("autorder", "order of the automorphism group");
  with_design(autorder);
  autorder->add_option("--budget-nodes", o.budget_nodes, "search nodes");

  auto* pipeline = app.add_subcommand("pipeline", "orbits, matrix, solve, expand and verify");
  need(pipeline, "--group", o.group, "group file");
  need(pipeline, "--t", o.t, "strength t");
  need(pipeline, "--k", o.k, "block size");
  need(pipeline, "--lambda", o.lambda, "lambda");
  pipeline->add_option("--bound", o.bound, "use only column orbits of at most this size");
  pipeline->add_flag("--count", o.count, "count all solutions, list none");
  with_solve(pipeline);
  with_workers(pipeline);
  pipeline->add_option("--out", o.out, "directory for the orbit, matrix, solution and design files");

  if (!args.empty() && args.front().rfind("-", 0) != 0 && app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown subcommand '" << args.front() << "'\n";
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "params") return cmd_params(o, out);
    if (cmd == "orbits") return cmd_orbits(o, out);
    if (cmd == "matrix") return cmd_matrix(o, out);
    if (cmd == "solve") return cmd_solve(o, out, err);
    if (cmd == "expand") return cmd_expand(o, out);
    if (cmd == "verify") return cmd_verify(o, out);
    if (cmd == "supplement") return cmd_supplement(o, out);
    if (cmd == "complement") return cmd_complement(o, out);
    if (cmd == "union") return cmd_union(o, out);
    if (cmd == "fingerprint") return cmd_fingerprint(o, out);
    if (cmd == "classes") return cmd_classes(o, out);
    if (cmd == "autorder") return cmd_autorder(o, out);
    if (cmd == "pipeline") return cmd_pipeline(o, out);
  } catch (const DuplicateBlockError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LimitError& e) {
    err << "limit: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kUsage;
}

}  // namespace kmdesign::cli
