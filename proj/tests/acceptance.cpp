// Desk-scale acceptance run: one PASS/FAIL line per criterion.

#include "cli.hpp"

#include "rowfin/equivalence.hpp"
#include "rowfin/errors.hpp"
#include "rowfin/fearing.hpp"
#include "rowfin/finite_checks.hpp"
#include "rowfin/sandwich.hpp"
#include "rowfin/twogen.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace rowfin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
  void require(const CheckList& checks, const std::string& what) {
    if (!checks.all_pass()) {
      const Check* bad = checks.first_failure();
      require(false, what + ": " + bad->name + " (" + bad->detail + ")");
    }
  }
};

Outcome two_generator_families() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t members = 0;
  for (int fam = 0; fam < 50; ++fam) {
    const Ring ring = fam % 2 ? Ring::prime_field(5) : Ring::integers_mod(6);
    const std::size_t count = 1 + uniform_below(rng, 7);
    SourceFamily src;
    for (std::size_t k = 0; k < count; ++k) {
      src.emplace(zunfold(k + 1), rf_random_finite(ring, rng, 24, 24, 0.05, "u" + std::to_string(k)));
    }
    members += count;
    const GFamily gf = build_g_family(ring, src);
    const TwoGenWitness tg = build_two_generators(gf);
    for (Index n : {32, 64}) {
      o.require(verify_two_generators(tg, gf, Window(n)), "family " + std::to_string(fam) + " window " + std::to_string(n));
    }
  }
  const double t = seconds_since(start);
  o.require(t < 10.0, "took " + std::to_string(t) + " s");
  std::ostringstream os;
  os << "50 families, " << members << " members, windows 32 and 64, " << t << " s";
  if (o.pass) o.note = os.str();
  return o;
}

Outcome g_family_identities() {
  Outcome o;
  std::mt19937_64 rng(7);
  const Ring ring = Ring::prime_field(3);
  SourceFamily units, random;
  for (std::int64_t i = -2; i <= 2; ++i) units.emplace(i, rf_matrix_unit(ring, 1, static_cast<Index>(i + 3)));
  for (std::size_t k = 0; k < 7; ++k) random.emplace(zunfold(k + 1), rf_random_finite(ring, rng, 24, 24, 0.05));
  o.require(verify_g_family(build_g_family(ring, units), Window(128)), "units family");
  o.require(verify_g_family(build_g_family(ring, random), Window(128)), "random family");
  if (o.pass) o.note = "g2g1 = projection, g1g2 = g4g5 = g5g4 = 1 on window 128";
  return o;
}

Outcome maltsev() {
  Outcome o;
  MaltsevOptions opt;
  opt.window = Window(32);
  const MaltsevReport z6 = maltsev_embed(Ring::integers_mod(6), 6, opt);
  o.require(z6.checks, "Zmod:6");
  const MaltsevReport m2 = maltsev_embed(Ring::parse("Mat:2:GF:2"), 16, opt);
  o.require(m2.checks, "Mat:2:GF:2");
  std::size_t central = 0;
  for (bool c : m2.central) central += c;
  o.require(central == 2, "Mat:2:GF:2 center has " + std::to_string(central) + " elements");
  if (o.pass) o.note = "6 + 16 elements on window 32, " + std::to_string(z6.checks.size() + m2.checks.size()) + " checks";
  return o;
}

Outcome sandwich() {
  Outcome o;
  const auto start = Clock::now();
  const Window w(20);
  for (const char* spec : {"Int", "Zmod:6", "GF:5"}) {
    const Ring ring = Ring::parse(spec);
    std::mt19937_64 rng(100);
    for (int t = 0; t < 100; ++t) {
      const RowFiniteMap Y = rf_random_lower(ring, rng, w.n, 0.5);
      const RowFiniteMap X = sandwich_X(Y, w);
      o.require(verify_sandwich(Y, X, w), std::string(spec) + " sample " + std::to_string(t));
      o.require(preorder_membership(X, Preorder::diagonal(), Window(triangular(w.n))).member,
                std::string(spec) + " X not diagonal");
    }
  }
  if (o.pass) o.note = "300 targets, window 20, " + std::to_string(seconds_since(start)) + " s";
  return o;
}

Outcome classification() {
  Outcome o;
  const std::vector<std::pair<const char*, Verdict>> table{
      {"diag", Verdict::DClass},
      {"ge", Verdict::DClass},
      {"le", Verdict::EClass},
      {"full", Verdict::EClass},
      {"union-finite:{(1,5)}", Verdict::DClass},
      {"union-finite:{(1,2),(2,3),(9,4)}", Verdict::DClass},
      {"mod:2:{(1,0)}", Verdict::EClass},
      {"mod:3:{(0,1),(1,2)}", Verdict::EClass},
  };
  SpotCheckBounds doubled;
  doubled.relation_bound *= 2;
  doubled.transitive_trials *= 2;
  doubled.refinement_bars *= 2;
  doubled.bar_prefix *= 2;
  for (const auto& [dsl, expected] : table) {
    const Preorder rho = Preorder::parse(dsl);
    const Verdict v = classify_preorder(rho).verdict;
    o.require(v == expected, std::string(dsl) + " gave " + to_string(v));
    o.require(classify_preorder(rho, doubled).verdict == v, std::string(dsl) + " unstable under doubled bounds");
  }
  if (o.pass) o.note = std::to_string(table.size()) + " descriptors, stable under doubled bounds";
  return o;
}

Outcome eclass_witnesses() {
  Outcome o;
  const Ring ring = Ring::prime_field(3);
  const Window w(12);
  const EquivWitness nested = eclass_witness(ring, Preorder::less_equal());
  const EquivWitness disjoint = eclass_witness(ring, Preorder::parse("mod:2:{(1,0)}"));
  o.require(nested.branch == RefinementBranch::Nested, "le is not Nested");
  o.require(disjoint.branch == RefinementBranch::Disjoint, "mod is not Disjoint");
  std::mt19937_64 rng(6);
  for (int t = 0; t < 25; ++t) {
    const RowFiniteMap Y = rf_random_upper(ring, rng, w.n, 0.4);
    o.require(verify_lift(nested, Y, nested.lift(Y, w), w), "le target " + std::to_string(t));
    const RowFiniteMap F = rf_random_finite(ring, rng, w.n, w.n, 0.3);
    o.require(verify_lift(disjoint, F, disjoint.lift(F, w), w), "mod target " + std::to_string(t));
  }
  if (o.pass) o.note = "25 Nested + 25 Disjoint lifts on window 12";
  return o;
}

Outcome fear() {
  Outcome o;
  const Ring gf3 = Ring::prime_field(3);
  const FearWitness fw = fear_witness(FearingDescriptor::diagonal(gf3), {{"s", rf_shift(gf3)}}, 8);
  o.require(fw.steps.size() == 8, "expected 8 steps");
  o.require(verify_fear_witness(fw), "GF:3, J=8");

  const auto start = Clock::now();
  const Ring gf2 = Ring::prime_field(2);
  const Environment U{{"s", rf_shift(gf2)}};
  const FearWitness small = fear_witness(FearingDescriptor::diagonal(gf2), U, 2);
  try {
    o.require(confirm_fear_by_oracle(small, U, gf2, 2), "GF:2 oracle");
  } catch (const BoundExceeded& e) {
    o.require(false, std::string("GF:2 oracle: bound exceeded: ") + e.what());
  }
  const double t = seconds_since(start);
  o.require(t < 60.0, "oracle took " + std::to_string(t) + " s");
  if (o.pass) o.note = "8 escapes over GF:3; oracle confirms p > j for j <= 2 over GF:2 in " + std::to_string(t) + " s";
  return o;
}

Outcome support_balls() {
  Outcome o;
  const Ring ring = Ring::prime_field(3);
  std::mt19937_64 rng(8);
  const Environment env{{"a", rf_random_finite(ring, rng, 40, 40, 0.06)},
                        {"d", FearingDescriptor::diagonal(ring).sample(3)},
                        {"s", rf_shift(ring)},
                        {"t", rf_random_finite(ring, rng, 40, 40, 0.04)}};
  std::vector<SupportStep> steps;
  for (const auto& [name, f] : env) steps.push_back(map_step(name, f));
  const std::vector<std::string> names{"a", "d", "s", "t"};
  std::function<RingWord(std::size_t)> random_word = [&](std::size_t len) -> RingWord {
    if (len == 1) {
      const std::uint64_t k = uniform_below(rng, names.size() + 3);
      if (k == 0) return RingWord::zero();
      if (k == 1) return RingWord::one();
      if (k == 2) return RingWord::neg_one();
      return RingWord::gen(names[k - 3]);
    }
    const std::size_t left = 1 + uniform_below(rng, len - 1);
    RingWord l = random_word(left), r = random_word(len - left);
    return uniform_below(rng, 2) ? RingWord::sum(l, r) : RingWord::prod(l, r);
  };
  std::size_t violations = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<FinVec::Entry> entries;
    for (int k = 0; k < 3; ++k) entries.emplace_back(1 + 13 * k + uniform_below(rng, 13), ring.from_int(1 + uniform_below(rng, 2)));
    const FinVec x(ring, entries);
    const RingWord w = random_word(1 + uniform_below(rng, 7));
    const IndexSet cover = support_closure(x, steps, w.length()).cover;
    for (Index k : word_apply(x, w, env, ring).support()) violations += !cover.count(k);
  }
  o.require(violations == 0, std::to_string(violations) + " coordinates escaped their cover");
  if (o.pass) o.note = "200 (x, word) pairs, zero violations";
  return o;
}

Outcome simple_full() {
  Outcome o;
  const SimpleFullReport rep = simple_full_check(2, 2);
  o.require(rep.checks, "census");
  o.require(rep.relations.size() == 4, std::to_string(rep.relations.size()) + " subrings");
  o.require(rep.relations == preorders_on(2), "relations differ from the preorders on 2 points");
  if (o.pass) o.note = "4 subrings = E(rho) for the 4 preorders on {1,2}";
  return o;
}

Outcome lower_embed() {
  Outcome o;
  const Ring ring = Ring::prime_field(3);
  const std::vector<FearingDescriptor> descriptors{
      FearingDescriptor::diagonal(ring), FearingDescriptor::banded(ring),
      FearingDescriptor::from_preorder(ring, Preorder::parse("union-finite:{(1,5)}"))};
  for (const auto& S : descriptors) {
    o.require(verify_lower_embed(fear_lower_embed(S), S, 20, Window(64)), S.name);
  }
  // Raw maxima l_1 = l_2 = 5 repeat for the last descriptor; the levels still increase.
  const LowerEmbed rep = fear_lower_embed(descriptors[2]);
  o.require(rep.level(1) == 5 && rep.level(2) == 6, "levels for repeated maxima");
  if (o.pass) o.note = "diag, banded, union-finite:{(1,5)}; 20 samples each on window 64";
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::vector<cli::RunConfig> configs = [] {
    std::vector<cli::RunConfig> out;
    auto add = [&out](std::string sub, std::function<void(cli::RunConfig&)> tweak = {}) {
      cli::RunConfig c;
      c.subcommand = std::move(sub);
      if (tweak) tweak(c);
      out.push_back(c);
    };
    add("two-gen", [](cli::RunConfig& c) { c.family = "random"; c.seed = 3; });
    add("maltsev");
    add("sandwich", [](cli::RunConfig& c) { c.samples = 3; });
    add("classify", [](cli::RunConfig& c) { c.preorder = "mod:2:{(1,0)}"; });
    add("witness");
    add("fear");
    add("simple-full");
    add("oracle");
    add("lower-embed");
    add("split");
    add("c-member");
    add("decompose");
    return out;
  }();
  for (const auto& c : configs) {
    const std::string first = cli::run(c).json().dump(2);
    const std::string second = cli::run(c).json().dump(2);
    o.require(first == second, c.subcommand + " reports differ");
  }
  if (o.pass) o.note = std::to_string(configs.size()) + " subcommands, byte-identical reports";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"two-generator words reproduce random families", two_generator_families},
      {"g-family identities on window 128", g_family_identities},
      {"diagonal embeddings of Zmod:6 and Mat:2:GF:2", maltsev},
      {"sandwich AXB = Y", sandwich},
      {"classification table", classification},
      {"E-class witnesses", eclass_witnesses},
      {"fear witness", fear},
      {"support balls", support_balls},
      {"simple-full census", simple_full},
      {"lower-triangular embedding", lower_embed},
      {"determinism", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.note << "\n";
  }
  return all ? 0 : 1;
}
