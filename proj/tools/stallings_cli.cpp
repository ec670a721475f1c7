// Command-line front end. Exit status: 0 on a computed result (unknown
// verdicts included), 2 on user error, 3 when a budget cap is hit.

#include <cstddef>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stallings/automaton.hpp"
#include "stallings/automorphism.hpp"
#include "stallings/error.hpp"
#include "stallings/extensions.hpp"
#include "stallings/io.hpp"
#include "stallings/lattice.hpp"
#include "stallings/random.hpp"
#include "stallings/subgroup.hpp"
#include "stallings/sync_fold.hpp"

namespace {

using namespace stallings;
using io::Json;

constexpr int kUserError = 2;
constexpr int kBudgetError = 3;

struct Options {
  std::size_t rank = 0;
  std::vector<std::string> words;
  std::vector<std::string> sub;
  std::vector<std::string> over;
  std::vector<std::string> basis;
  std::string word;
  std::string kind;
  std::string check = "semimodular";
  std::string elements = "fringe";
  std::string format = "table";
  std::size_t depth = Budget{}.depth;
  std::size_t extra_letters = Budget{}.extra_letters;
  unsigned long long bell_cap = Budget{}.bell_cap;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  RandomSubgroupSpec random;
};

Budget budget_of(Options const& o) {
  return Budget{o.depth, o.extra_letters, o.bell_cap, o.threads};
}

Subgroup subgroup_of(std::vector<std::string> const& words, std::size_t rank,
                     char const* what) {
  if (words.empty()) throw Error(std::string("no words given for ") + what);
  return Subgroup::parse(words, rank);
}

std::string basis_line(Subgroup const& h) { return to_string(h); }

void emit_json(Json const& j) { std::cout << j.dump(2) << '\n'; }

void require_format(Options const& o, bool dot_allowed) {
  if (o.format == "dot" && !dot_allowed) {
    throw Error("--format dot is not available for this command");
  }
}

void print_automaton_table(Automaton const& g) {
  std::cout << "vertices: " << g.vertex_count() << '\n';
  std::cout << "basepoint: " << g.basepoint() << '\n';
  std::cout << "edges:\n";
  for (Edge const& e : g.edges()) {
    std::cout << "  " << e.src << " -" << to_string(Word::generator(e.letter)) << "-> "
              << e.dst << '\n';
  }
}

void print_subgroup(Subgroup const& h, Options const& o) {
  if (o.format == "json") {
    emit_json(io::to_json(h));
  } else if (o.format == "dot") {
    std::cout << io::to_dot(h.graph());
  } else {
    std::cout << "subgroup: " << basis_line(h) << '\n';
    std::cout << "rank: " << h.rank() << '\n';
    print_automaton_table(h.graph());
  }
}

void print_subgroups(std::vector<Subgroup> const& hs, Options const& o) {
  require_format(o, false);
  if (o.format == "json") {
    emit_json(io::to_json(hs));
    return;
  }
  std::cout << "count: " << hs.size() << '\n';
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::cout << i << '\t' << basis_line(hs[i]) << '\n';
  }
}

void print_verdict(Verdict const& v, Options const& o) {
  require_format(o, false);
  if (o.format == "json") {
    emit_json(io::to_json(v));
    return;
  }
  std::cout << "outcome: " << to_string(v.outcome) << '\n';
  if (v.witness) std::cout << "witness: " << to_string(*v.witness) << '\n';
  std::cout << "depth: " << v.depth << '\n';
  std::cout << "extra_letters: " << v.extra_letters << '\n';
}

void print_bool(char const* key, bool value, Options const& o) {
  require_format(o, false);
  if (o.format == "json") {
    emit_json(Json{{key, value}});
  } else {
    std::cout << (value ? "true" : "false") << '\n';
  }
}

// Subcommands.

void run_stallings(Options const& o) {
  print_subgroup(subgroup_of(o.words, o.rank, "the subgroup"), o);
}

void run_member(Options const& o) {
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  print_bool("member", h.contains(parse_word(o.word, o.rank)), o);
}

void run_fringe(Options const& o) {
  print_subgroups(fringe(subgroup_of(o.words, o.rank, "the subgroup"), o.bell_cap), o);
}

void run_ae(Options const& o) {
  print_subgroups(
      algebraic_extensions(subgroup_of(o.words, o.rank, "the subgroup"), o.bell_cap), o);
}

void run_closure(Options const& o) {
  require_format(o, false);
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  Subgroup k = subgroup_of(o.over, o.rank, "--over");
  ClosureKind kind = o.kind == "alg"    ? ClosureKind::algebraic
                     : o.kind == "onto" ? ClosureKind::onto
                                        : ClosureKind::fully_onto;
  ClosureResult c = closure(h, k, kind, budget_of(o));
  if (o.format == "json") {
    emit_json(io::to_json(c));
    return;
  }
  std::cout << "closure: " << basis_line(c.closure) << '\n';
  std::cout << "status: " << to_string(c.status) << '\n';
  for (auto const& [member, verdict] : c.candidates) {
    std::cout << "candidate " << basis_line(member) << ": "
              << (verdict ? to_string(verdict->outcome) : "skipped") << '\n';
  }
}

void run_check(Options const& o) {
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  Subgroup k = subgroup_of(o.over, o.rank, "--over");
  require_subgroup(h, k);
  Budget const b = budget_of(o);
  if (o.kind == "ff") {
    print_bool("free_factor", is_free_factor(h, k), o);
  } else if (o.kind == "alg") {
    print_bool("algebraic", is_algebraic(h, k, o.bell_cap), o);
  } else if (o.kind == "onto") {
    print_verdict(check_onto(h, k, b), o);
  } else if (o.kind == "fonto") {
    print_verdict(check_fully_onto(h, k, b), o);
  } else {
    print_verdict(check_into(h, k, b), o);
  }
}

void run_lattice(Options const& o) {
  Subgroup h = subgroup_of(o.words, o.rank, "the subgroup");
  auto members = o.elements == "ae" ? algebraic_extensions(h, o.bell_cap)
                                    : fringe(h, o.bell_cap);
  auto l = ExtensionLattice::build(members, h);
  if (o.format == "dot") {
    std::cout << io::to_dot(l);
    return;
  }
  Json j = io::to_json(l);
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  std::optional<bool> verdict;
  if (o.check == "semimodular") {
    violations = l.semimodularity_violations();
    verdict = violations.empty();
    Json pairs = Json::array();
    for (auto const& [x, y] : violations) pairs.push_back({x, y});
    j["semimodular"] = *verdict;
    j["violations"] = std::move(pairs);
  } else if (o.check == "distributive") {
    verdict = l.is_distributive();
    j["distributive"] = *verdict;
  }
  if (o.format == "json") {
    emit_json(j);
    return;
  }
  for (std::size_t i = 0; i < l.size(); ++i) {
    std::cout << i << '\t' << basis_line(l.element(i)) << '\n';
  }
  for (auto const& [i, k] : l.cover_relation()) {
    std::cout << "cover " << i << " < " << k << '\n';
  }
  if (verdict) std::cout << o.check << ": " << (*verdict ? "true" : "false") << '\n';
  for (auto const& [x, y] : violations) {
    std::cout << "violation " << x << ' ' << y << '\n';
  }
}

void run_intersect(Options const& o) {
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  Subgroup k = subgroup_of(o.over, o.rank, "--over");
  print_subgroup(intersection(h, k), o);
}

Endomorphism basis_of(Options const& o) {
  if (o.basis.size() != o.rank) {
    throw Error("--basis needs exactly " + std::to_string(o.rank) + " words");
  }
  return Endomorphism::parse(o.basis, o.rank);
}

void run_in_basis(Options const& o) {
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  print_subgroup(Subgroup::from_automaton(in_basis(h, basis_of(o))), o);
}

void run_syncfold(Options const& o) {
  require_format(o, false);
  Subgroup h = subgroup_of(o.sub, o.rank, "--sub");
  Subgroup k = subgroup_of(o.over, o.rank, "--over");
  require_subgroup(h, k);
  Morphism theta0 = *morphism(h.graph(), k.graph());
  if (!o.basis.empty()) {
    // Reading the standard automata in the new basis.
    theta0 = expand_morphism(theta0, invert_automorphism(basis_of(o)));
  }
  SyncFoldResult r = synchronized_fold(theta0);
  if (o.format == "json") {
    emit_json(io::to_json(r));
    return;
  }
  for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
    SyncFoldStep const& s = r.trace.steps[i];
    std::cout << "step " << i << ": onto=" << (s.onto ? "true" : "false")
              << " source=" << s.source_vertices << "v/" << s.source_edges << "e"
              << " target=" << s.target_vertices << "v/" << s.target_edges << "e";
    if (i > 0) std::cout << " empty=" << (r.trace.step_empty(i) ? "true" : "false");
    std::cout << '\n';
  }
  std::cout << "onto: " << (is_onto(r.theta) ? "true" : "false") << '\n';
}

void run_random(Options const& o) {
  require_format(o, false);
  RandomSubgroupSpec spec = o.random;
  spec.ambient_rank = o.rank;
  std::mt19937_64 rng(o.seed);
  std::vector<Subgroup> out;
  for (std::size_t i = 0; i < o.count; ++i) out.push_back(random_subgroup(rng, spec));
  print_subgroups(out, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stallings automata and extensions of free-group subgroups"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-r,--rank", o.rank, "Rank of the ambient free group")
        ->required()
        ->check(CLI::Range(std::size_t{1}, std::size_t{26}));
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "dot"}));
  };
  auto budgets = [&](CLI::App* sub) {
    sub->add_option("--depth", o.depth, "Whitehead search depth");
    sub->add_option("--extra-letters", o.extra_letters, "Extra ambient letters");
    sub->add_option("--bell-cap", o.bell_cap, "Largest Bell number enumerated")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto pair = [&](CLI::App* sub) {
    sub->add_option("--sub", o.sub, "Generators of H")->required();
    sub->add_option("--over", o.over, "Generators of K")->required();
  };
  auto positional = [&](CLI::App* sub) {
    sub->add_option("words", o.words, "Generators")->required();
  };

  std::vector<std::pair<CLI::App*, void (*)(Options const&)>> commands;
  auto add = [&](char const* name, char const* help, void (*run)(Options const&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, run);
    return sub;
  };

  positional(add("stallings", "Stallings automaton, basis and rank", run_stallings));

  auto* member = add("member", "Membership of a word", run_member);
  member->add_option("--sub", o.sub, "Generators of H")->required();
  member->add_option("--word", o.word, "Word to test")->required();

  auto* fr = add("fringe", "Quotients of the Stallings automaton", run_fringe);
  positional(fr);
  fr->add_option("--bell-cap", o.bell_cap)->check(CLI::PositiveNumber);

  auto* ae = add("ae", "Algebraic extensions", run_ae);
  positional(ae);
  ae->add_option("--bell-cap", o.bell_cap)->check(CLI::PositiveNumber);

  auto* cl = add("closure", "Closure of H inside K", run_closure);
  pair(cl);
  budgets(cl);
  cl->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"alg", "onto", "fonto"}));

  auto* ck = add("check", "Extension type of H <= K", run_check);
  pair(ck);
  budgets(ck);
  ck->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"ff", "alg", "onto", "fonto", "into"}));

  auto* la = add("lattice", "Lattice of overgroups", run_lattice);
  positional(la);
  la->add_option("--bell-cap", o.bell_cap)->check(CLI::PositiveNumber);
  la->add_option("--check", o.check)
      ->check(CLI::IsMember({"semimodular", "distributive", "none"}));
  la->add_option("--elements", o.elements)->check(CLI::IsMember({"fringe", "ae"}));

  pair(add("intersect", "Intersection of two subgroups", run_intersect));

  auto* ib = add("in-basis", "Stallings automaton in another ambient basis", run_in_basis);
  ib->add_option("--sub", o.sub, "Generators of H")->required();
  ib->add_option("--basis", o.basis, "Images of the new basis")->required();

  auto* sf = add("syncfold", "Synchronized folding trace", run_syncfold);
  pair(sf);
  sf->add_option("--basis", o.basis, "Ambient basis to read H and K in");

  auto* rs = add("random-subgroup", "Random subgroups", run_random);
  rs->add_option("--seed", o.seed);
  rs->add_option("--count", o.count)->check(CLI::PositiveNumber);
  rs->add_option("--max-vertices", o.random.max_vertices)->check(CLI::PositiveNumber);
  rs->add_option("--min-rank", o.random.min_rank);
  rs->add_option("--max-rank", o.random.max_rank);
  rs->add_option("--max-length", o.random.max_word_length)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kUserError;
  }

  try {
    for (auto const& [sub, run] : commands) {
      if (sub->parsed()) run(o);
    }
  } catch (BudgetExceeded const& e) {
    std::cerr << "error: " << e.what() << " (cap: " << e.cap_name() << ")\n";
    return kBudgetError;
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  }
  return 0;
}
