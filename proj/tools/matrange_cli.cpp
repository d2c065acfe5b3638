// matrange: command-line front end. All inputs and outputs use the JSON
// encodings of json_io.hpp. Exit codes: 0 member / success, 1 not a member,
// 2 inconclusive, 3 other failures, 64 malformed input, 65 bad dimensions.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "matrange/essential_model.hpp"
#include "matrange/json_io.hpp"
#include "matrange/lambda_pq.hpp"
#include "matrange/simplex_dilation.hpp"
#include "matrange/spatial.hpp"
#include "matrange/suite.hpp"

using namespace matrange;

namespace {

constexpr int kExitFailure = 3;
constexpr int kExitMalformed = 64;
constexpr int kExitBadDims = 65;

struct Args {
  std::string a, b, model, t, simplex, in, out;
  std::optional<long long> q;
  long long p = 1;
  double tol = MembershipOptions{}.gap_tol;
  int max_iter = MembershipOptions{}.max_iter;
  int budget = MembershipOptions{}.witness_budget;
  int samples = 20;
  std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(const Args& args, std::uint64_t fallback) {
  if (args.seed) return *args.seed;
  if (const char* env = std::getenv("MATRANGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw FormatError("MATRANGE_SEED: not an unsigned integer");
    }
  }
  return fallback;
}

MembershipOptions membership_options(const Args& args) {
  MembershipOptions o;
  o.gap_tol = args.tol;
  o.max_iter = args.max_iter;
  o.witness_budget = args.budget;
  o.seed = resolve_seed(args, 0);
  return o;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int exit_for(Status s) {
  switch (s) {
    case Status::Member: return 0;
    case Status::NotMember: return 1;
    default: return 2;
  }
}

HermTuple load_tuple(const std::string& path, const std::string& field) {
  return tuple_from_json(read_json_file(path), field);
}

// Reference tuple for B: either a finite tuple A or the body of a model.
struct Reference {
  std::optional<HermTuple> a;
  std::optional<BlockRepetitionModel> model;
  const HermTuple& tuple() const { return a ? *a : model->body(); }
  std::string field() const { return a ? "A" : "model.body"; }
};

Reference load_reference(const Args& args) {
  Reference r;
  if (!args.a.empty()) r.a = load_tuple(args.a, "A");
  else r.model = model_from_json(read_json_file(args.model), "model");
  return r;
}

HermTuple load_b(const Args& args, const Reference& ref) {
  HermTuple b = load_tuple(args.b, "B");
  if (b.size() != ref.tuple().size())
    throw DimensionError("B: has " + std::to_string(b.size()) + " members, " + ref.field() + " has " +
                         std::to_string(ref.tuple().size()));
  if (args.q && b.dim() != *args.q)
    throw DimensionError("B: matrices are " + std::to_string(b.dim()) + "x" + std::to_string(b.dim()) +
                         " but --q is " + std::to_string(*args.q));
  return b;
}

int cmd_member(const Args& args) {
  const Reference ref = load_reference(args);
  const HermTuple b = load_b(args, ref);
  const MembershipOptions o = membership_options(args);
  const MembershipVerdict v = ref.a ? membership(b, *ref.a, o) : essential_membership(b, *ref.model, o);
  Json out = verdict_to_json(v);
  out["mode"] = ref.a ? "finite" : "essential";
  emit(out);
  return exit_for(v.status);
}

int cmd_witness(const Args& args) {
  const Reference ref = load_reference(args);
  const HermTuple b = load_b(args, ref);
  WitnessOptions o;
  o.budget = args.budget;
  o.gap_tol = args.tol;
  o.seed = resolve_seed(args, 0);
  const auto w = search_witness(b, finite_reference(ref.tuple()), o);
  Json out = {{"found", w.has_value()}};
  if (w) out["witness"] = witness_to_json(*w);
  emit(out);
  return 0;
}

int cmd_dilate(const Args& args) {
  const HermTuple t = load_tuple(args.t, "T");
  const Simplex s = simplex_from_json(read_json_file(args.simplex), "simplex");
  if (static_cast<int>(t.size()) != s.m())
    throw DimensionError("T: has " + std::to_string(t.size()) + " members, simplex lives in R^" + std::to_string(s.m()));
  Povm q;
  try {
    q = barycentric_povm(t, s);
  } catch (const NotInSimplex& e) {
    emit({{"error", "not_in_simplex"}, {"vertex", e.vertex}, {"min_eigenvalue", e.min_eigenvalue}});
    return kExitFailure;
  }
  const Isometry x = naimark_dilate(q);
  Json povm = Json::array();
  for (const auto& e : q.elements) povm.push_back(matrix_to_json(e));
  Rng rng(resolve_seed(args, 0));
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < args.samples; ++i) {
    const SimplexNormBound nb = simplex_norm_bound(random_norm_test(t.dim(), t.size(), rng), t, s);
    worst = std::max(worst, nb.lhs - nb.bound);
  }
  emit({{"povm", povm},
        {"isometry", matrix_to_json(x.matrix())},
        {"residual", dilation_residual(x, t, s)},
        {"orthonormality_error", x.orthonormality_error()},
        {"norm_bound", {{"samples", args.samples}, {"worst_excess", args.samples > 0 ? Json(worst) : Json(nullptr)}}}});
  return 0;
}

int cmd_essential(const Args& args) {
  const BlockRepetitionModel model = model_from_json(read_json_file(args.model), "model");
  const InteriorTest it = interior_test(model);
  Json interior = {{"independent", it.independent}, {"ratio", it.ratio}};
  if (it.witness) {
    Json w = Json::array();
    for (Eigen::Index i = 0; i < it.witness->size(); ++i) w.push_back((*it.witness)(i));
    interior["relation"] = w;
  }
  Json out = {{"interior", interior}};
  int code = 0;
  if (!args.b.empty()) {
    Reference ref;
    ref.model = model;
    const HermTuple b = load_b(args, ref);
    const MembershipVerdict v = essential_membership(b, model, membership_options(args));
    out["verdict"] = verdict_to_json(v);
    code = exit_for(v.status);
  }
  emit(out);
  return code;
}

int cmd_perturb(const Args& args) {
  const BlockRepetitionModel model = model_from_json(read_json_file(args.model), "model");
  const PerturbationTuple k = preserving_perturbation(model);
  const BlockRepetitionModel fixed = apply_perturbation(model, k);
  const HermTuple apk = fixed.materialize();
  Rng rng(resolve_seed(args, 0));
  double gap = 0.0;
  for (int i = 0; i < args.samples; ++i) {
    const NormTestTuple r = random_norm_test(2, model.m(), rng);
    gap = std::max(gap, std::abs(pencil_norm(r, apk) - essential_pencil_norm(model, r)));
  }
  emit({{"K", k.head_delta ? tuple_to_json(*k.head_delta) : Json::array()},
        {"rank_bound", k.rank_bound},
        {"perturbed_model", model_to_json(fixed)},
        {"verification", {{"samples", args.samples}, {"max_essential_norm_gap", gap}}}});
  return 0;
}

int cmd_lambda(const Args& args) {
  const Reference ref = load_reference(args);
  const HermTuple b = load_b(args, ref);
  if (args.p < 1) throw DimensionError("p: must be positive");
  if (ref.a) {
    LambdaSearchOptions o;
    o.budget = args.budget;
    o.seed = resolve_seed(args, 0);
    const auto x = lambda_search(b, *ref.a, args.p, o);
    Json out = {{"status", x ? "found" : "not_found"}, {"p", args.p}};
    if (x) {
      out["isometry"] = matrix_to_json(x->matrix());
      out["residual"] = tuple_distance(x->compress(*ref.a), ampliate(b, args.p));
    }
    emit(out);
    return x ? 0 : 2;
  }
  const MembershipVerdict v = essential_membership(b, *ref.model, membership_options(args));
  if (v.status != Status::Member) {
    emit({{"status", v.status == Status::NotMember ? "not_member" : "inconclusive"}, {"verdict", verdict_to_json(v)}});
    return exit_for(v.status);
  }
  // Apply the preserving perturbation and grow the truncation until the
  // realization fits.
  BlockRepetitionModel target = apply_perturbation(*ref.model, preserving_perturbation(*ref.model));
  for (;;) {
    try {
      const Isometry x = lambda_realize(b, target, args.p, *v.certificate);
      emit({{"status", "realized"},
            {"p", args.p},
            {"level", target.level()},
            {"isometry", matrix_to_json(x.matrix())},
            {"residual", tuple_distance(x.compress(target.materialize()), ampliate(b, args.p))}});
      return 0;
    } catch (const TruncationTooSmall& e) {
      int level = target.level();
      while (level < e.required) level *= 2;
      target = target.with_level(level);
    }
  }
}

int cmd_theoremsuite(const Args& args) {
  const std::uint64_t seed = resolve_seed(args, 7);
  const suite::SuiteReport rep = suite::run_theorem_suite(seed, [](const suite::CriterionResult& c) {
    std::fprintf(stderr, "%d  %s  %-36s %s\n", c.id, c.passed ? "PASS" : "FAIL", c.name.c_str(), c.summary.c_str());
  });
  const std::string text = rep.to_json().dump(2) + "\n";
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) throw FormatError(args.out + ": cannot write");
    f << text;
  } else {
    std::cout << text;
  }
  return rep.all_passed() ? 0 : 1;
}

int cmd_report(const Args& args) {
  const Json j = read_json_file(args.in);
  if (!j.contains("criteria") || !j["criteria"].is_array()) throw FormatError(args.in + ": missing \"criteria\"");
  std::cout << "| # | criterion | result | summary |\n|---|---|---|---|\n";
  bool all = true;
  for (const auto& c : j["criteria"]) {
    const bool passed = c.value("passed", false);
    all = all && passed;
    std::cout << "| " << c.value("id", 0) << " | " << c.value("name", std::string()) << " | "
              << (passed ? "pass" : "FAIL") << " | " << c.value("summary", std::string()) << " |\n";
  }
  std::cout << "\nseed " << j.value("seed", 0ULL) << ", " << (all ? "all criteria pass" : "some criteria fail") << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint matricial ranges of Hermitian tuples"};
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* c) {
    c->add_option("--tol", args.tol, "gap tolerance");
    c->add_option("--max-iter", args.max_iter, "alternating-projection iterations");
    c->add_option("--budget", args.budget, "witness or search budget");
    c->add_option("--seed", args.seed, "random seed (default: $MATRANGE_SEED, else 0)");
  };
  auto reference = [&](CLI::App* c) {
    auto* a = c->add_option("--A", args.a, "finite tuple A")->check(CLI::ExistingFile);
    auto* m = c->add_option("--model", args.model, "block-repetition model")->check(CLI::ExistingFile);
    a->excludes(m);
    m->excludes(a);
    c->add_option("--B", args.b, "tuple B")->required()->check(CLI::ExistingFile);
    c->add_option("--q", args.q, "expected dimension of B");
    c->callback([&args] {
      if (args.a.empty() && args.model.empty()) throw CLI::RequiredError("--A or --model");
    });
  };

  CLI::App* member = app.add_subcommand("member", "decide B ∈ W^q(A), or the essential range of a model");
  reference(member);
  common(member);

  CLI::App* witness = app.add_subcommand("witness", "search for a refuting norm witness");
  reference(witness);
  common(witness);

  CLI::App* dilate = app.add_subcommand("dilate", "barycentric POVM and dilation of T into a simplex");
  dilate->add_option("--T", args.t, "tuple T")->required()->check(CLI::ExistingFile);
  dilate->add_option("--simplex", args.simplex, "simplex")->required()->check(CLI::ExistingFile);
  dilate->add_option("--samples", args.samples, "random R for the vertex norm bound");
  common(dilate);

  CLI::App* essential = app.add_subcommand("essential", "interior test and essential membership");
  essential->add_option("--model", args.model, "block-repetition model")->required()->check(CLI::ExistingFile);
  essential->add_option("--B", args.b, "tuple B")->check(CLI::ExistingFile);
  essential->add_option("--q", args.q, "expected dimension of B");
  common(essential);

  CLI::App* perturb = app.add_subcommand("perturb", "range-preserving head perturbation");
  perturb->add_option("--model", args.model, "block-repetition model")->required()->check(CLI::ExistingFile);
  perturb->add_option("--samples", args.samples, "random R for the norm check");
  common(perturb);

  CLI::App* lambda = app.add_subcommand("lambda", "rank-(p, q) range: realize or search");
  reference(lambda);
  lambda->add_option("--p", args.p, "tensor multiplicity p");
  common(lambda);

  CLI::App* theoremsuite = app.add_subcommand("theoremsuite", "run the acceptance suite");
  theoremsuite->add_option("--seed", args.seed, "random seed (default: $MATRANGE_SEED, else 7)");
  theoremsuite->add_option("--out", args.out, "write the JSON report here instead of stdout");

  CLI::App* report = app.add_subcommand("report", "pass/fail table from a theoremsuite report");
  report->add_option("--in", args.in, "theoremsuite JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  try {
    if (*member) return cmd_member(args);
    if (*witness) return cmd_witness(args);
    if (*dilate) return cmd_dilate(args);
    if (*essential) return cmd_essential(args);
    if (*perturb) return cmd_perturb(args);
    if (*lambda) return cmd_lambda(args);
    if (*theoremsuite) return cmd_theoremsuite(args);
    if (*report) return cmd_report(args);
  } catch (const FormatError& e) {
    std::fprintf(stderr, "malformed input: %s\n", e.what());
    return kExitMalformed;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "bad dimensions: %s\n", e.what());
    return kExitBadDims;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
