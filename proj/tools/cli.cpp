#include "cli.hpp"

#include "rowfin/equivalence.hpp"
#include "rowfin/errors.hpp"
#include "rowfin/fearing.hpp"
#include "rowfin/finite_checks.hpp"
#include "rowfin/sandwich.hpp"
#include "rowfin/twogen.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rowfin::cli {

namespace {

Ring ring_or(const RunConfig& c, const std::string& fallback) { return Ring::parse(c.ring.empty() ? fallback : c.ring); }

Index window_or(const RunConfig& c, Index fallback) { return c.window ? c.window : fallback; }

std::uint64_t or_default(std::uint64_t v, std::uint64_t fallback) { return v ? v : fallback; }

std::uint64_t word_cap(const RunConfig& c) {
  if (c.bound) return *c.bound;
  if (const char* env = std::getenv("ROWFIN_BOUND")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("ROWFIN_BOUND: not a number: '" + std::string(env) + "'");
    }
  }
  return kDefaultWordCap;
}

void allow_corrupt(const RunConfig& c, std::initializer_list<const char*> flags) {
  if (c.corrupt.empty()) return;
  std::string names;
  for (const char* f : flags) {
    if (c.corrupt == f) return;
    names += names.empty() ? f : std::string(", ") + f;
  }
  throw ParseError(c.subcommand + ": unknown --corrupt flag '" + c.corrupt + "' (expected " + names + ")");
}

// Adds one to entry (row, col).
RowFiniteMap perturb(const RowFiniteMap& f, Index row, Index col) {
  const Ring ring = f.ring();
  return rf_from_rows(
      ring,
      [f, ring, row, col](Index a) { return a == row ? vec_add(ring, f.row(a), FinVec::unit(ring, col)) : f.row(a); },
      f.tag() + "+e" + std::to_string(row) + "," + std::to_string(col));
}

Json sparse_json(const RowFiniteMap& f, Window w) {
  Json out = Json::array();
  for (const auto& t : rf_to_sparse(f, w)) out.push_back(Json::array({t.row, t.col, t.value}));
  return out;
}

Json index_list(const IndexSet& s) {
  Json out = Json::array();
  for (Index k : s) out.push_back(k);
  return out;
}

RowFiniteMap load_matrix(const std::string& path, const Ring& ring) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  SparseMatrixFile file = read_sparse(in);
  if (file.ring != ring) {
    throw RingMismatch("matrix file '" + path + "' is over " + file.ring.spec() + ", expected " + ring.spec());
  }
  return rf_from_sparse(ring, file.triples, path);
}

// Ring from --ring, else from the first input file's header, else fallback.
Ring ring_for_inputs(const RunConfig& c, const std::string& fallback) {
  if (!c.ring.empty() || c.inputs.empty()) return ring_or(c, fallback);
  std::ifstream in(c.inputs.front());
  if (!in) throw ParseError("cannot open matrix file '" + c.inputs.front() + "'");
  return read_sparse(in).ring;
}

FearingDescriptor parse_descriptor(const std::string& text, const Ring& ring) {
  if (text == "diag") return FearingDescriptor::diagonal(ring);
  if (text == "banded") return FearingDescriptor::banded(ring);
  if (text.rfind("star:", 0) == 0) {
    return FearingDescriptor::from_preorder(ring, Preorder::star(std::stoull(text.substr(5))));
  }
  if (text.rfind("preorder:", 0) == 0) return FearingDescriptor::from_preorder(ring, Preorder::parse(text.substr(9)));
  throw ParseError("descriptor: expected diag, banded, star:<root> or preorder:<dsl>, got '" + text + "'");
}

Environment parse_gens(const RunConfig& c, const Ring& ring, const Environment& fallback) {
  if (c.gens.empty()) return fallback;
  Environment env;
  for (const auto& g : c.gens) {
    const auto eq = g.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--gen: expected name=shift|identity|<file>, got '" + g + "'");
    const std::string name = g.substr(0, eq);
    const std::string what = g.substr(eq + 1);
    RingWord::gen(name);
    if (what == "shift") {
      env.emplace(name, rf_shift(ring));
    } else if (what == "identity") {
      env.emplace(name, rf_identity(ring));
    } else {
      env.emplace(name, load_matrix(what, ring));
    }
  }
  return env;
}

Json env_names(const Environment& env) {
  Json out = Json::array();
  for (const auto& [name, f] : env) out.push_back(name + "=" + f.tag());
  return out;
}

Report cmd_two_gen(const RunConfig& c) {
  allow_corrupt(c, {"f3"});
  const Ring ring = ring_for_inputs(c, "GF:3");
  const Window w(window_or(c, 32));
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["family"] = c.inputs.empty() ? c.family : "files";

  SourceFamily source;
  if (!c.inputs.empty()) {
    for (std::size_t k = 0; k < c.inputs.size(); ++k) source.emplace(zunfold(k + 1), load_matrix(c.inputs[k], ring));
    r.config["inputs"] = c.inputs;
  } else if (c.family == "units") {
    for (std::int64_t i = -2; i <= 2; ++i) source.emplace(i, rf_matrix_unit(ring, 1, static_cast<Index>(i + 3)));
  } else if (c.family == "random") {
    std::mt19937_64 rng(c.seed);
    const std::uint64_t count = or_default(c.count, 7);
    r.config["count"] = count;
    for (std::uint64_t k = 0; k < count; ++k) {
      source.emplace(zunfold(k + 1), rf_random_finite(ring, rng, 24, 24, 0.05, "u" + std::to_string(k)));
    }
  } else if (c.family != "empty") {
    throw ParseError("two-gen: --family must be units, random or empty");
  }

  GFamily gf = build_g_family(ring, source);
  r.checks.append(verify_g_family(gf, w));
  TwoGenWitness tg = build_two_generators(gf);
  if (c.corrupt == "f3") tg.f3 = perturb(tg.f3, 2, 1);
  r.checks.append(verify_two_generators(tg, gf, w));

  Json mat = Json::array();
  for (auto i : tg.materialized) mat.push_back(i);
  r.results["materialized"] = mat;
  Json gw = Json::object();
  for (int i = 1; i <= 5; ++i) {
    gw["g" + std::to_string(i)] = {{"length", tg.word_for_g(i).length()}, {"word", tg.word_for_g(i).str()}};
  }
  r.witnesses["g_words"] = gw;
  Json uw = Json::object();
  for (auto i : tg.materialized) {
    const RingWord word = tg.word_for_u(i);
    uw["u" + std::to_string(i)] = {{"length", word.length()}, {"word", word.str()}};
  }
  r.witnesses["u_words"] = uw;
  r.witnesses["f1"] = sparse_json(tg.f1, w);
  r.witnesses["f3"] = sparse_json(tg.f3, w);
  return r;
}

Report cmd_maltsev(const RunConfig& c) {
  allow_corrupt(c, {"f3"});
  const Ring ring = ring_or(c, "Zmod:6");
  const Window w(window_or(c, 16));
  const std::uint64_t count = or_default(c.count, ring.order().value_or(8));
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["count"] = count;

  MaltsevOptions opt;
  opt.window = w;
  opt.seed = c.seed;
  if (c.corrupt == "f3") opt.tamper = [](TwoGenWitness& tg) { tg.f3 = perturb(tg.f3, 2, 1); };
  MaltsevReport m = maltsev_embed(ring, count, opt);
  r.checks.append(m.checks);

  Json elems = Json::array();
  Json center = Json::array();
  for (std::size_t e = 0; e < m.elements.size(); ++e) {
    elems.push_back({{"element", ring.format(m.elements[e])},
                     {"family_index", m.family_index[e]},
                     {"word_length", m.words[e].length()},
                     {"central", static_cast<bool>(m.central[e])}});
    if (m.central[e]) center.push_back(ring.format(m.elements[e]));
  }
  r.results["elements"] = elems;
  r.results["center"] = center;
  return r;
}

Report cmd_sandwich(const RunConfig& c) {
  allow_corrupt(c, {"X"});
  const Ring ring = ring_for_inputs(c, "GF:5");
  const Window w(window_or(c, 20));
  const std::uint64_t samples = c.inputs.empty() ? or_default(c.samples, 1) : c.inputs.size();
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["samples"] = samples;
  if (!c.inputs.empty()) r.config["inputs"] = c.inputs;

  std::mt19937_64 rng(c.seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    RowFiniteMap Y =
        c.inputs.empty() ? rf_random_lower(ring, rng, w.n, 0.5, "Y" + std::to_string(s)) : load_matrix(c.inputs[s], ring);
    RowFiniteMap X = sandwich_X(Y, w);
    if (c.corrupt == "X") X = perturb(X, 1, 1);
    r.checks.append(verify_sandwich(Y, X, w), "sample " + std::to_string(s) + ": ");
    if (s == 0) r.witnesses["X"] = sparse_json(X, Window(triangular(w.n)));
  }
  return r;
}

Report cmd_classify(const RunConfig& c) {
  allow_corrupt(c, {"tag"});
  if (c.preorder.empty()) throw ParseError("classify: --preorder is required");
  Preorder rho = Preorder::parse(c.preorder);
  if (c.corrupt == "tag") {
    rho = rho.with_infinite_tag(is_finite(rho.infinite_upset_indices()) ? Support{InfiniteSet::naturals()}
                                                                         : Support{IndexSet{}});
  }
  SpotCheckBounds bounds;
  bounds.seed = c.seed;
  if (c.bound) bounds.relation_bound = *c.bound;
  Report r;
  r.config["preorder"] = rho.name();
  r.config["seed"] = c.seed;
  r.config["relation_bound"] = bounds.relation_bound;

  try {
    Classification cls = classify_preorder(rho, bounds);
    r.checks.add("descriptor consistent", true);
    SpotCheckBounds doubled = bounds;
    doubled.relation_bound *= 2;
    doubled.transitive_trials *= 2;
    doubled.refinement_bars *= 2;
    doubled.bar_prefix *= 2;
    Classification again = classify_preorder(rho, doubled);
    r.checks.add("verdict stable under doubled bounds", again.verdict == cls.verdict,
                 to_string(cls.verdict) + " became " + to_string(again.verdict));
    r.results["verdict"] = to_string(cls.verdict);
    r.results["evidence"] = describe(cls.evidence);
    if (rho.refinement()) r.results["refinement"] = to_string(rho.refinement()->branch);
  } catch (const PreconditionViolation& e) {
    r.checks.add("descriptor consistent", false, e.what());
  }
  return r;
}

Report cmd_witness(const RunConfig& c) {
  allow_corrupt(c, {"lift"});
  const Ring ring = ring_or(c, "GF:3");
  const Window w(window_or(c, 12));
  const Preorder rho = Preorder::parse(c.preorder.empty() ? "le" : c.preorder);
  const std::uint64_t samples = or_default(c.samples, 25);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["preorder"] = rho.name();
  r.config["samples"] = samples;

  EquivWitness ew = eclass_witness(ring, rho);
  const bool nested = ew.branch == RefinementBranch::Nested;
  const Index first_bar = rho.refinement()->bars(1).nth(1);
  std::mt19937_64 rng(c.seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    RowFiniteMap target = nested ? rf_random_upper(ring, rng, w.n, 0.4, "Y" + std::to_string(s))
                                 : rf_random_finite(ring, rng, w.n, w.n, 0.3, "F" + std::to_string(s));
    RowFiniteMap lifted = ew.lift(target, w);
    if (c.corrupt == "lift") lifted = perturb(lifted, ew.anchor(1), first_bar);
    r.checks.append(verify_lift(ew, target, lifted, w), "target " + std::to_string(s) + ": ");
  }
  r.results["branch"] = to_string(ew.branch);
  Json anchors = Json::array();
  for (Index j = 1; j <= w.n; ++j) anchors.push_back(ew.anchor(j));
  r.results["anchors"] = anchors;
  r.witnesses["g"] = sparse_json(ew.g, w);
  r.witnesses["h"] = sparse_json(ew.h, Window(first_bar + w.n));
  return r;
}

Report cmd_fear(const RunConfig& c) {
  allow_corrupt(c, {"g"});
  const Ring ring = ring_or(c, "GF:3");
  const FearingDescriptor S = parse_descriptor(c.descriptor.empty() ? "diag" : c.descriptor, ring);
  const Environment U = parse_gens(c, ring, Environment{{"s", rf_shift(ring)}});
  const std::uint64_t J = or_default(c.steps, 8);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["descriptor"] = S.name;
  r.config["U"] = env_names(U);
  r.config["J"] = J;
  r.config["oracle_steps"] = c.oracle_steps;
  r.config["word_cap"] = word_cap(c);

  FearWitness fw = fear_witness(S, U, J);
  if (c.corrupt == "g") fw.g = perturb(fw.g, fw.steps.front().m, fw.steps.front().m);
  r.checks.append(verify_fear_witness(fw));
  if (c.oracle_steps) {
    try {
      r.checks.append(confirm_fear_by_oracle(fw, U, ring, c.oracle_steps, word_cap(c)));
    } catch (const BoundExceeded& e) {
      r.warnings.push_back(std::string("bound exceeded: ") + e.what());
    }
  }
  Json steps = Json::array();
  for (std::size_t j = 0; j < fw.steps.size(); ++j) {
    const FearStep& st = fw.steps[j];
    steps.push_back({{"j", j + 1},
                     {"m", st.m},
                     {"escape", st.escape},
                     {"cover", index_list(st.cover)},
                     {"contributors", st.contributors}});
  }
  r.results["steps"] = steps;
  return r;
}

Report cmd_simple_full(const RunConfig& c) {
  allow_corrupt(c, {"count"});
  const Ring ring = ring_or(c, "GF:2");
  if (ring.kind() != Ring::Kind::PrimeField) throw ParseError("simple-full: --ring must be GF:<p>");
  const std::uint64_t n = c.n;
  Report r;
  r.config["ring"] = ring.spec();
  r.config["n"] = n;

  SimpleFullReport sf = simple_full_check(n, ring.modulus());
  r.checks.append(sf.checks);
  auto found = sf.relations;
  if (c.corrupt == "count" && !found.empty()) found.pop_back();
  const auto expected = preorders_on(n);
  r.checks.add("subrings match the preorders on " + std::to_string(n) + " points", found == expected,
               std::to_string(found.size()) + " subrings vs " + std::to_string(expected.size()) + " preorders");
  r.results["count"] = sf.relations.size();
  Json rels = Json::array();
  for (std::size_t k = 0; k < sf.relations.size(); ++k) {
    Json pairs = Json::array();
    for (auto [a, b] : sf.relations[k]) pairs.push_back(Json::array({a, b}));
    rels.push_back({{"relation", pairs}, {"dimension", sf.dimensions[k]}});
  }
  r.results["subrings"] = rels;
  return r;
}

Report cmd_oracle(const RunConfig& c) {
  allow_corrupt(c, {"cover"});
  const Ring ring = ring_or(c, "Zmod:5");
  const Environment env = parse_gens(c, ring, Environment{{"s", rf_shift(ring)}});
  const FinVec x = parse_vec(ring, c.x.empty() ? "1:1" : c.x);
  const FinVec y = parse_vec(ring, c.y.empty() ? "2:1" : c.y);
  const std::uint64_t radius = or_default(c.radius, 3);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["env"] = env_names(env);
  r.config["x"] = format_vec(ring, x);
  r.config["y"] = format_vec(ring, y);
  r.config["radius"] = radius;
  r.config["word_cap"] = word_cap(c);

  std::vector<SupportStep> steps;
  for (const auto& [name, f] : env) steps.push_back(map_step(name, f));
  SupportBallReport ball = support_closure(x, steps, radius);
  IndexSet cover = ball.cover;
  if (c.corrupt == "cover" && !x.empty()) cover.erase(x.max_index());
  bool covers_x = true;
  for (Index k : x.support()) covers_x = covers_x && cover.count(k);
  r.checks.add("cover contains support(x)", covers_x, "support(x) leaves the cover");
  r.results["cover"] = index_list(ball.cover);
  r.results["contributors"] = ball.contributors;

  try {
    OracleResult res = proximity_oracle(x, y, env, ring, radius, word_cap(c));
    if (auto* found = std::get_if<OracleFound>(&res)) {
      r.results["proximity"] = {{"found", found->length}, {"witness", found->witness.str()}};
      r.checks.add("witness reproduces y", word_apply(x, found->witness, env, ring) == y, "re-evaluation differs");
      const SupportBallReport at = support_closure(x, steps, found->length);
      bool inside = true;
      for (Index k : y.support()) inside = inside && at.cover.count(k);
      r.checks.add("support(y) inside the closure at the found length", inside, "y escapes the closure");
    } else {
      r.results["proximity"] = {{"not_within", radius}};
    }
  } catch (const BoundExceeded& e) {
    r.warnings.push_back(std::string("bound exceeded: ") + e.what());
  }
  return r;
}

Report cmd_lower_embed(const RunConfig& c) {
  allow_corrupt(c, {"f"});
  const Ring ring = ring_or(c, "GF:3");
  const Window w(window_or(c, 64));
  const FearingDescriptor S = parse_descriptor(c.descriptor.empty() ? "banded" : c.descriptor, ring);
  const std::uint64_t samples = or_default(c.samples, 20);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["descriptor"] = S.name;
  r.config["samples"] = samples;

  LowerEmbed le = fear_lower_embed(S);
  if (c.corrupt == "f") le.f = perturb(le.f, le.level(1), 2);
  r.checks.append(verify_lower_embed(le, S, samples, w, c.seed));
  Json levels = Json::array();
  for (Index k = 1; k <= std::min<Index>(w.n, 16); ++k) levels.push_back(le.level(k));
  r.results["levels"] = levels;
  return r;
}

Report cmd_split(const RunConfig& c) {
  allow_corrupt(c, {"f3"});
  const Ring ring = ring_or(c, "GF:3");
  const Window w(window_or(c, 16));
  const FearingDescriptor S = parse_descriptor(c.descriptor.empty() ? "star:1" : c.descriptor, ring);
  const std::uint64_t samples = or_default(c.samples, 10);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;
  r.config["descriptor"] = S.name;
  r.config["samples"] = samples;

  WeakFearSplit split = split_weak_fearing(S);
  std::function<void(TwoGenWitness&)> tamper;
  if (c.corrupt == "f3") tamper = [](TwoGenWitness& tg) { tg.f3 = perturb(tg.f3, 2, 1); };
  r.checks.append(verify_split(split, S, samples, w, c.seed, tamper));
  r.results["sigma"] = index_list(split.sigma);
  return r;
}

Report cmd_c_member(const RunConfig& c) {
  allow_corrupt(c, {"h"});
  const Ring ring = ring_for_inputs(c, "Int");
  const Window w(window_or(c, 8));
  RowFiniteMap f = c.inputs.empty() ? rf_identity(ring) : load_matrix(c.inputs.front(), ring);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["input"] = c.inputs.empty() ? "identity" : c.inputs.front();

  CMembership m = c_membership(f, w);
  if (c.corrupt == "h") m.h = perturb(m.h, 2, 3);
  r.results["member"] = m.member;
  r.results["s"] = ring.format(m.s);
  if (m.member) {
    r.checks.add("s*1 + h = f", rf_equal_on_window(rf_add(rf_scalar(ring, m.s), m.h), f, w), ring);
    r.checks.add("h in column 1", in_finite_columns(m.h, w, IndexSet{1}), "h uses columns beyond 1");
    r.witnesses["h"] = sparse_json(m.h, w);
  } else {
    auto [a, b] = *m.violation;
    const Element* v = f.row(a).find(b);
    const bool genuine = v && b != 1 && (a != b || *v != m.s);
    const bool missing_diag = !v && a == b && !ring.is_zero(m.s);
    r.checks.add("violation is a genuine cell", genuine || missing_diag, "cell fits the pattern");
    r.results["violation"] = Json::array({a, b});
  }
  return r;
}

Report cmd_decompose(const RunConfig& c) {
  allow_corrupt(c, {"upper"});
  const Ring ring = ring_for_inputs(c, "GF:5");
  const Window w(window_or(c, 16));
  std::mt19937_64 rng(c.seed);
  RowFiniteMap f = c.inputs.empty() ? rf_random_finite(ring, rng, w.n, w.n, 0.4, "f") : load_matrix(c.inputs.front(), ring);
  Report r;
  r.config["ring"] = ring.spec();
  r.config["window"] = w.n;
  r.config["seed"] = c.seed;

  TriangularSplit parts = upper_equiv_decompose(f);
  if (c.corrupt == "upper") parts.upper = perturb(parts.upper, 2, 1);
  r.checks.add("lower + upper = f", rf_equal_on_window(rf_add(parts.lower, parts.upper), f, w), ring);
  auto lo = preorder_membership(parts.lower, Preorder::greater_equal(), w);
  r.checks.add("lower part in E(ge)", lo.member, lo.member ? "" : "entry outside ge");
  auto up = preorder_membership(parts.upper, Preorder::less_equal(), w);
  bool strict = !first_below_diagonal(parts.upper, w);
  for (Index a = 1; a <= w.n; ++a) strict = strict && !parts.upper.row(a).find(a);
  r.checks.add("upper part strictly upper in E(le)", up.member && strict, "entry on or below the diagonal");
  r.witnesses["lower"] = sparse_json(parts.lower, w);
  r.witnesses["upper"] = sparse_json(parts.upper, w);
  return r;
}

const std::map<std::string, std::function<Report(const RunConfig&)>>& commands() {
  static const std::map<std::string, std::function<Report(const RunConfig&)>> table{
      {"two-gen", cmd_two_gen},       {"maltsev", cmd_maltsev},     {"sandwich", cmd_sandwich},
      {"classify", cmd_classify},     {"witness", cmd_witness},     {"fear", cmd_fear},
      {"simple-full", cmd_simple_full}, {"oracle", cmd_oracle},     {"lower-embed", cmd_lower_embed},
      {"split", cmd_split},           {"c-member", cmd_c_member},   {"decompose", cmd_decompose},
  };
  return table;
}

}  // namespace

std::string Report::status() const {
  if (failed()) return "fail";
  if (!warnings.empty()) return "warning";
  return "pass";
}

Json Report::json() const {
  Json out = Json::object();
  out["subcommand"] = subcommand;
  out["config"] = config;
  out["status"] = status();
  Json cs = Json::array();
  for (const auto& ch : checks.items()) {
    Json item = {{"name", ch.name}, {"verdict", ch.pass ? "pass" : "fail"}};
    if (!ch.pass) item["discrepancy"] = ch.detail;
    cs.push_back(item);
  }
  out["checks"] = cs;
  Json ws = Json::array();
  for (const auto& w : warnings) ws.push_back({{"verdict", "bound exceeded"}, {"message", w}});
  out["warnings"] = ws;
  out["results"] = results;
  out["witnesses"] = witnesses;
  return out;
}

std::string Report::text() const {
  std::ostringstream os;
  os << "rowfin " << subcommand << "\n";
  for (const auto& [key, value] : config.items()) os << "  " << key << " = " << value.dump() << "\n";
  for (const auto& ch : checks.items()) {
    os << (ch.pass ? "[PASS] " : "[FAIL] ") << ch.name;
    if (!ch.pass) os << ": " << ch.detail;
    os << "\n";
  }
  for (const auto& w : warnings) os << "[WARN] " << w << "\n";
  for (const auto& [key, value] : results.items()) os << key << ": " << value.dump() << "\n";
  std::size_t passed = 0;
  for (const auto& ch : checks.items()) passed += ch.pass;
  os << "status: " << status() << " (" << passed << "/" << checks.size() << " checks passed)\n";
  os << "wall time: " << wall_seconds << " s\n";
  return os.str();
}

Report run(const RunConfig& config) {
  auto it = commands().find(config.subcommand);
  if (it == commands().end()) throw ParseError("unknown subcommand '" + config.subcommand + "'");
  const auto start = std::chrono::steady_clock::now();
  Report r = it->second(config);
  r.subcommand = config.subcommand;
  if (!config.corrupt.empty()) r.config["corrupt"] = config.corrupt;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rowfin: constructions on row-finite matrices, verified on finite windows"};
  app.require_subcommand(1);
  RunConfig cfg;
  for (const auto& [name, fn] : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--ring", cfg.ring, "Ring spec: Int, Zmod:<n>, GF:<p>, Mat:<k>:<ring>");
    sub->add_option("--window", cfg.window, "Window size n (rows 1..n are checked)");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--preorder", cfg.preorder, "Preorder: diag, le, ge, full, mod:<m>:<pairs>, union-finite:<pairs>");
    sub->add_option("--in", cfg.inputs, "Matrix file in the sparse triple format (repeatable)");
    sub->add_option("--out", cfg.out, "Write the structured report to this file");
    sub->add_option("--bound", cfg.bound, "Enumeration cap (overrides ROWFIN_BOUND)");
    sub->add_option("--corrupt", cfg.corrupt, "Inject a deliberate fault (negative control)");
    sub->add_flag("--json", cfg.json, "Print the structured report instead of text");
    sub->add_option("--family", cfg.family, "two-gen source family: units, random, empty");
    sub->add_option("--count", cfg.count, "Number of family members or ring elements");
    sub->add_option("--samples", cfg.samples, "Number of random samples");
    sub->add_option("--J", cfg.steps, "Number of fear-witness steps");
    sub->add_option("--oracle", cfg.oracle_steps, "Confirm fear steps 1..k with the brute-force oracle");
    sub->add_option("--n", cfg.n, "Matrix size for simple-full");
    sub->add_option("--radius", cfg.radius, "Largest word length for the oracle");
    sub->add_option("--descriptor", cfg.descriptor, "diag, banded, star:<root> or preorder:<dsl>");
    sub->add_option("--x", cfg.x, "Vector {i:v,...}");
    sub->add_option("--y", cfg.y, "Vector {i:v,...}");
    sub->add_option("--gen", cfg.gens, "Generator name=shift|identity|<file> (repeatable)");
    sub->add_option_function<std::string>(
        "--random-Y",
        [&cfg](const std::string& v) {
          if (v.rfind("seed=", 0) != 0) throw CLI::ValidationError("--random-Y", "expected seed=<k>");
          cfg.seed = std::stoull(v.substr(5));
        },
        "Random lower-triangular target, as seed=<k>");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    Report r = run(cfg);
    if (!cfg.out.empty()) {
      std::ofstream file(cfg.out);
      if (!file) throw ParseError("cannot write '" + cfg.out + "'");
      file << r.json().dump(2) << "\n";
    }
    if (cfg.json) {
      out << r.json().dump(2) << "\n";
    } else {
      out << r.text();
    }
    return r.failed() ? 1 : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rowfin::cli
