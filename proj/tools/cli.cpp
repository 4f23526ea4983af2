#include "cli.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace rht::cli {

using fourfold::RankTable;
using fourfold::Split;
using ojson = nlohmann::ordered_json;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceFlags {
  std::optional<long long> b2;
  std::string split;
  std::string form;
};

struct RunFlags {
  int max_degree = 5;
  std::size_t guard = gca::kDefaultGuard;
  bool engine = false;
  std::string format = "table";
};

struct Source {
  std::string label;
  Split split;
  bool split_known = true;
};

std::vector<long long> parse_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InputError("not an integer list: '" + text + "'");
    }
    if (used != item.size()) throw InputError("not an integer list: '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

Split parse_split(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2 || v[0] < 0 || v[1] < 0) throw InputError("--split expects P,Q with P,Q >= 0");
  return {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])};
}

Source resolve(const SourceFlags& flags) {
  const bool numeric = flags.b2.has_value() || !flags.split.empty();
  if (numeric && !flags.form.empty()) throw InputError("give either --b2/--split or --form, not both");
  if (!flags.form.empty()) {
    const auto form = read_form_file(flags.form);
    return {form.name().empty() ? flags.form : form.name(), form.split()};
  }
  if (!numeric) throw InputError("a source is required: --b2 N [--split P,Q] or --form PATH");
  if (flags.b2 && *flags.b2 < 0) throw InputError("--b2 must be nonnegative");
  Split split;
  if (!flags.split.empty()) {
    split = parse_split(flags.split);
    if (flags.b2 && static_cast<std::size_t>(*flags.b2) != split.b2())
      throw InputError("--split does not add up to --b2");
  } else {
    split = {static_cast<std::size_t>(*flags.b2), 0};
  }
  return {"b2=" + std::to_string(split.b2()), split};
}

void check_run_flags(const RunFlags& run) {
  if (run.max_degree < 2) throw InputError("--max-degree must be at least 2");
  if (run.format != "table" && run.format != "json") throw InputError("--format is table or json");
}

std::string cell(std::optional<long long> v) { return v ? std::to_string(*v) : "?"; }

ojson ranks_json(const RankTable& t) {
  ojson o = ojson::object();
  for (const auto& [r, c] : t.entries) o[std::to_string(r)] = c;
  return o;
}

ojson meta_json(const Split& split, int max_degree) {
  ojson m = ojson::object();
  m["b2"] = split.b2();
  m["b2plus"] = split.plus;
  m["b2minus"] = split.minus;
  m["sigma"] = split.signature();
  m["max_degree"] = max_degree;
  return m;
}

void print_header(std::ostream& out, const std::string& label, const Split& s,
                  bool split_known = true) {
  if (!split_known) {
    out << label << ": b₂ = " << s.b2() << " (signature not needed for the ranks)\n";
    return;
  }
  out << label << ": b₂ = " << s.b2() << ", b₂⁺ = " << s.plus << ", b₂⁻ = " << s.minus
      << ", σ = " << s.signature() << "\n";
}

// ---------------------------------------------------------------------------
// ranks

int cmd_ranks(const Source& src, const RunFlags& run, std::ostream& out, std::ostream& err) {
  const RankTable formula = fourfold::closed_form_ranks(src.split.b2());
  std::optional<RankTable> engine;
  bool complete = true;
  std::string guard_message;
  if (run.engine) {
    sullivan::BuildOptions opts;
    opts.max_degree = run.max_degree;
    opts.guard = run.guard;
    try {
      engine = sullivan::build(fourfold::cohomology_algebra(src.split), opts).ranks;
    } catch (const sullivan::GuardExceeded& e) {
      engine = e.partial();
      complete = false;
      guard_message = e.what();
    }
  }

  std::set<int> degrees;
  for (const auto& [r, c] : formula.entries) degrees.insert(r);
  if (engine)
    for (const auto& [r, c] : engine->entries) degrees.insert(r);

  bool agree_all = true;
  std::map<int, std::optional<bool>> agree;
  if (engine) {
    for (const auto& [r, c] : engine->entries) {
      const auto f = formula.at(r);
      agree[r] = f ? std::optional<bool>(*f == c) : std::nullopt;
      if (f && *f != c) agree_all = false;
    }
  }

  if (run.format == "json") {
    ojson doc = ojson::object();
    doc["meta"] = meta_json(src.split, run.max_degree);
    if (!src.split_known)
      for (const char* k : {"b2plus", "b2minus", "sigma"}) doc["meta"][k] = nullptr;
    doc["formula"] = {{"ranks", ranks_json(formula)}, {"finite_tail", formula.finite_tail}};
    if (engine) {
      ojson a = ojson::object();
      for (const auto& [r, v] : agree) a[std::to_string(r)] = v ? ojson(*v) : ojson(nullptr);
      doc["engine"] = {{"ranks", ranks_json(*engine)}, {"complete", complete}, {"agree", a}};
    }
    out << doc.dump(2) << "\n";
  } else {
    print_header(out, src.label, src.split, src.split_known);
    if (engine) {
      out << "   r  rk π_r formula  rk π_r engine  agree\n";
      for (int r : degrees) {
        const auto e = engine->entries.count(r) ? std::optional<long long>(engine->entries.at(r))
                                                : std::nullopt;
        std::string verdict = "-";
        if (agree.count(r) && agree[r]) verdict = *agree[r] ? "yes" : "NO";
        out << std::setw(4) << r << "  " << std::setw(14) << cell(formula.at(r)) << "  "
            << std::setw(13) << (e ? std::to_string(*e) : "") << "  " << verdict << "\n";
      }
    } else {
      out << "   r  rk π_r\n";
      for (int r : degrees) out << std::setw(4) << r << "  " << cell(formula.at(r)) << "\n";
    }
    if (formula.finite_tail) {
      out << "rationally elliptic: rk π_r = 0 for every other r\n";
    } else {
      out << "rationally hyperbolic: dim π_* ⊗ Q = ∞; unlisted ranks have no closed form\n";
    }
  }
  if (!complete) {
    err << "guard exceeded: " << guard_message << "\n";
    return kGuardExceeded;
  }
  return agree_all ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// model

int cmd_model(const Source& src, const RunFlags& run, std::ostream& out, std::ostream& err) {
  sullivan::BuildOptions opts;
  opts.max_degree = run.max_degree;
  opts.guard = run.guard;
  sullivan::BuildResult result;
  try {
    result = sullivan::build(fourfold::cohomology_algebra(src.split), opts);
  } catch (const sullivan::GuardExceeded& e) {
    if (run.format == "json") {
      ojson doc = ojson::object();
      doc["ranks"] = ranks_json(e.partial());
      doc["meta"] = meta_json(src.split, e.last_completed_stage());
      out << doc.dump(2) << "\n";
    } else {
      print_header(out, src.label, src.split);
      out << "partial ranks through degree " << e.last_completed_stage() << ":";
      for (const auto& [r, c] : e.partial().entries) out << " " << r << ":" << c;
      out << "\n";
    }
    err << "guard exceeded: " << e.what() << "\n";
    return kGuardExceeded;
  }

  if (run.format == "json") {
    out << model_document(result.stage, result.ranks, src.split, run.max_degree).dump(2) << "\n";
    return kOk;
  }
  print_header(out, src.label, src.split);
  const auto& gens = result.stage.gens;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out << gens[i].name << "(" << gens[i].degree << "): d" << gens[i].name << " = "
        << gca::to_string(result.stage.diff.image(gens, i), gens) << "\n";
  }
  out << "ranks:";
  for (const auto& [r, c] : result.ranks.entries) out << " " << r << ":" << c;
  out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const std::vector<std::string>& paths, const std::string& format,
                 std::ostream& out) {
  if (paths.size() != 2) throw InputError("classify takes exactly two forms");
  if (format != "table" && format != "json") throw InputError("--format is table or json");
  const auto a = read_form_file(paths[0]);
  const auto b = read_form_file(paths[1]);
  const bool eq = fourfold::rationally_equivalent(a, b);
  if (format == "json") {
    ojson doc = ojson::object();
    ojson forms = ojson::array();
    for (const auto* f : {&a, &b}) {
      const Split cs = fourfold::canonical_connected_sum(*f);
      ojson o = ojson::object();
      o["name"] = f->name();
      o["rank"] = f->b2();
      o["signature"] = f->signature();
      o["connected_sum"] = {{"p", cs.plus}, {"q", cs.minus}};
      forms.push_back(o);
    }
    doc["forms"] = forms;
    doc["equivalent"] = eq;
    out << doc.dump(2) << "\n";
    return kOk;
  }
  int idx = 0;
  for (const auto* f : {&a, &b}) {
    const Split cs = fourfold::canonical_connected_sum(*f);
    const std::string label = f->name().empty() ? paths[idx] : f->name();
    ++idx;
    out << "Q" << idx << " " << label
        << ": rank " << f->b2() << ", σ = " << f->signature() << "  ~_Q  " << cs.plus
        << " CP² # " << cs.minus << " (-CP²)  (p,q) = (" << cs.plus << "," << cs.minus << ")\n";
  }
  out << (eq ? "EQUIVALENT" : "NOT EQUIVALENT") << " over Q\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// examples

int cmd_examples(const std::string& which, const std::string& params, const RunFlags& run,
                 std::ostream& out, std::ostream& err) {
  fourfold::CatalogEntry entry;
  try {
    if (which == "hypersurface") {
      const auto v = parse_list(params);
      if (v.size() != 1 || v[0] < 1) throw InputError("hypersurface takes one degree d >= 1");
      entry = fourfold::hypersurface_example(v[0]);
    } else if (which == "ci") {
      entry = fourfold::complete_intersection_example(parse_list(params));
    } else if (which == "k3") {
      entry = fourfold::k3_example();
    } else if (which == "connected-sum") {
      entry = fourfold::connected_sum_example(parse_split(params));
    } else {
      throw InputError("unknown example '" + which + "' (hypersurface, ci, k3, connected-sum)");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const Split split = entry.split.value_or(Split{entry.b2, 0});
  return cmd_ranks({entry.name, split, entry.split.has_value()}, run, out, err);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyJob {
  Split split;
  int max_degree = 4;
};

struct VerifyOutcome {
  bool passed = true;
  bool guard = false;
  RankTable ranks;
  std::vector<std::string> failures;
};

VerifyOutcome run_verify_job(const VerifyJob& job, std::size_t guard, const std::string& fault) {
  VerifyOutcome o;
  const auto a = fourfold::cohomology_algebra(job.split);
  sullivan::BuildOptions opts;
  opts.max_degree = job.max_degree;
  opts.guard = guard;
  sullivan::BuildResult built;
  try {
    built = sullivan::build(a, opts);
  } catch (const sullivan::GuardExceeded& e) {
    o.passed = false;
    o.guard = true;
    o.failures.push_back(std::string("guard: ") + e.what());
    return o;
  }
  o.ranks = built.ranks;
  // Faults go into the top stage only; lower truncations stay clean.
  sullivan::MinimalModelStage top = built.stage;
  try {
    if (fault == "d2") top = sullivan::fixtures::corrupt_differential(top);
    if (fault == "linear") top = sullivan::fixtures::inject_linear_term(top);
  } catch (const std::logic_error& e) {
    o.passed = false;
    o.failures.push_back(std::string("fault injection: ") + e.what());
  }

  for (int k = 2; k <= job.max_degree; ++k) {
    const auto stage = k == job.max_degree ? top : sullivan::truncate(built.stage, k);
    const auto report = sullivan::verify_stage(stage, a, guard);
    for (const auto& c : report.checks) {
      if (c.passed) continue;
      o.passed = false;
      o.failures.push_back("stage " + std::to_string(k) + " " + c.name + ": " + c.witness);
    }
  }
  const RankTable formula = fourfold::closed_form_ranks(job.split.b2());
  for (const auto& [r, c] : built.ranks.entries) {
    const auto f = formula.at(r);
    if (f && *f != c) {
      o.passed = false;
      o.failures.push_back("rk π_" + std::to_string(r) + ": engine " + std::to_string(c) +
                           ", formula " + std::to_string(*f));
    }
  }
  return o;
}

int cmd_verify(std::optional<long long> b2, int max_degree, bool all_splits, std::size_t guard,
               const std::string& fault, std::ostream& out) {
  if (max_degree < 2) throw InputError("--max-degree must be at least 2");
  if (!fault.empty() && fault != "d2" && fault != "linear")
    throw InputError("unknown fault '" + fault + "'");
  if (b2 && *b2 < 0) throw InputError("--b2 must be nonnegative");
  std::vector<std::size_t> range;
  if (b2) {
    range.push_back(static_cast<std::size_t>(*b2));
  } else {
    for (std::size_t b = 0; b <= 6; ++b) range.push_back(b);
  }
  std::vector<VerifyJob> jobs;
  for (std::size_t b : range) {
    if (all_splits) {
      for (std::size_t p = b + 1; p-- > 0;) jobs.push_back({{p, b - p}, max_degree});
    } else {
      jobs.push_back({{b, 0}, max_degree});
    }
  }

  std::vector<std::future<VerifyOutcome>> futures;
  for (const auto& job : jobs)
    futures.push_back(std::async(std::launch::async, run_verify_job, job, guard, fault));

  bool ok = true;
  bool guard_hit = false;
  std::map<std::size_t, RankTable> first_table;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    VerifyOutcome o = futures[i].get();
    const auto& s = jobs[i].split;
    if (!o.guard) {
      auto [it, inserted] = first_table.try_emplace(s.b2(), o.ranks);
      if (!inserted && it->second.entries != o.ranks.entries) {
        o.passed = false;
        o.failures.push_back("ranks differ from another split with the same b₂");
      }
    }
    out << "b₂=" << s.b2() << " split=(" << s.plus << "," << s.minus << ") D=" << max_degree
        << "  " << (o.passed ? "PASS" : "FAIL") << "  ranks";
    for (const auto& [r, c] : o.ranks.entries) out << " " << r << ":" << c;
    out << "\n";
    for (const auto& f : o.failures) out << "    " << f << "\n";
    ok = ok && o.passed;
    guard_hit = guard_hit || o.guard;
  }
  out << (ok ? "all checks passed" : "verification FAILED") << "\n";
  if (guard_hit) return kGuardExceeded;
  return ok ? kOk : kVerificationFailed;
}

void add_source_flags(CLI::App* sub, SourceFlags& src) {
  sub->add_option("--b2", src.b2, "second Betti number");
  sub->add_option("--split", src.split, "signature split P,Q = (b2+, b2-)");
  sub->add_option("--form", src.form, "intersection form JSON file");
}

void add_run_flags(CLI::App* sub, RunFlags& run) {
  sub->add_option("--max-degree", run.max_degree, "build the model through this degree")
      ->capture_default_str();
  sub->add_option("--guard", run.guard, "maximum monomials per degree")->capture_default_str();
  sub->add_option("--format", run.format, "table or json")->capture_default_str();
}

}  // namespace

// ---------------------------------------------------------------------------

fourfold::IntersectionForm parse_form(const nlohmann::json& doc) {
  if (!doc.is_object()) throw fourfold::FormError("form document must be a JSON object");
  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    throw fourfold::FormError("form document needs a \"matrix\" array");
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw fourfold::FormError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  std::vector<std::vector<long long>> rows;
  for (const auto& row : doc["matrix"]) {
    if (!row.is_array()) throw fourfold::FormError("matrix rows must be arrays");
    std::vector<long long> r;
    for (const auto& e : row) {
      if (!e.is_number_integer()) throw fourfold::FormError("matrix entries must be integers");
      if (e.is_number_unsigned() && e.get<unsigned long long>() > 1ULL << 62)
        throw fourfold::FormError("matrix entry out of range");
      r.push_back(e.get<long long>());
    }
    rows.push_back(std::move(r));
  }
  return fourfold::make_form(rows, name);
}

fourfold::IntersectionForm read_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fourfold::FormError("cannot open form file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw fourfold::FormError("form file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_form(doc);
}

nlohmann::json model_document(const sullivan::MinimalModelStage& stage, const RankTable& ranks,
                              const Split& split, int max_degree) {
  // Built as an ordered document, then handed back as plain json text-equivalent.
  ojson gens = ojson::array();
  for (std::size_t i = 0; i < stage.gens.size(); ++i) {
    const auto& g = stage.gens[i];
    const gca::Poly img = stage.diff.image(stage.gens, i);
    ojson terms = ojson::array();
    for (auto it = img.terms().rbegin(); it != img.terms().rend(); ++it) {
      ojson mono = ojson::array();
      const auto& e = it->first.exponents();
      for (std::size_t j = 0; j < e.size(); ++j)
        if (e[j] > 0) mono.push_back(ojson::array({stage.gens[j].name, e[j]}));
      ojson term = ojson::object();
      term["coeff"] = it->second.get_str();
      term["monomial"] = mono;
      terms.push_back(term);
    }
    ojson o = ojson::object();
    o["name"] = g.name;
    o["degree"] = g.degree;
    o["differential"] = terms;
    gens.push_back(o);
  }
  ojson doc = ojson::object();
  doc["generators"] = gens;
  doc["ranks"] = ranks_json(ranks);
  doc["meta"] = meta_json(split, max_degree);
  return nlohmann::json::parse(doc.dump());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational homotopy ranks and minimal models of simply connected four-manifolds"};
  app.require_subcommand(1);

  SourceFlags ranks_src, model_src;
  RunFlags ranks_run, model_run, examples_run;
  std::optional<long long> verify_b2;
  int verify_degree = 4;
  bool all_splits = false;
  std::size_t verify_guard = gca::kDefaultGuard;
  std::string fault;
  std::vector<std::string> classify_paths;
  std::string classify_format = "table";
  std::string example_which, example_params;

  auto* ranks = app.add_subcommand("ranks", "closed-form ranks, optionally checked by the engine");
  add_source_flags(ranks, ranks_src);
  add_run_flags(ranks, ranks_run);
  ranks->add_flag("--engine", ranks_run.engine, "also build the minimal model and compare");

  auto* model = app.add_subcommand("model", "print the minimal model");
  add_source_flags(model, model_src);
  add_run_flags(model, model_run);

  auto* classify = app.add_subcommand("classify", "compare two forms up to rational homotopy");
  classify->add_option("forms", classify_paths, "two form JSON files")->expected(2);
  classify->add_option("--form", classify_paths, "form JSON file (twice)");
  classify->add_option("--format", classify_format, "table or json")->capture_default_str();

  auto* examples = app.add_subcommand("examples", "hypersurface D | ci D1,D2,.. | k3 | connected-sum P,Q");
  examples->add_option("which", example_which, "example family")->required();
  examples->add_option("params", example_params, "family parameters");
  add_run_flags(examples, examples_run);
  examples->add_flag("--engine", examples_run.engine, "also build the minimal model and compare");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--b2", verify_b2, "single b2 (default: 0..6)");
  verify->add_option("--max-degree", verify_degree, "build degree")->capture_default_str();
  verify->add_option("--guard", verify_guard, "maximum monomials per degree");
  verify->add_flag("--all-splits", all_splits, "run every signature split");
  verify->add_option("--inject-fault", fault)->group("");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*ranks) {
      check_run_flags(ranks_run);
      return cmd_ranks(resolve(ranks_src), ranks_run, out, err);
    }
    if (*model) {
      check_run_flags(model_run);
      return cmd_model(resolve(model_src), model_run, out, err);
    }
    if (*classify) return cmd_classify(classify_paths, classify_format, out);
    if (*examples) {
      check_run_flags(examples_run);
      return cmd_examples(example_which, example_params, examples_run, out, err);
    }
    if (*verify) return cmd_verify(verify_b2, verify_degree, all_splits, verify_guard, fault, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fourfold::FormError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace rht::cli
