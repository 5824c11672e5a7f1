#include "rowfin/twogen.hpp"

#include "rowfin/errors.hpp"

#include <cstdlib>

namespace rowfin {

const RowFiniteMap& GFamily::g(int i) const {
  switch (i) {
    case 1:
      return g1;
    case 2:
      return g2;
    case 3:
      return g3;
    case 4:
      return g4;
    case 5:
      return g5;
  }
  throw Error("GFamily::g: index " + std::to_string(i) + " outside 1..5");
}

RowFiniteMap GFamily::layer_zero_projection() const {
  const ZPairing p = pairing;
  return rf_projection(
      ring, [p](Index k) { return p.decode(k).first == 0; }, "layer0");
}

GFamily build_g_family(const Ring& ring, SourceFamily source, ZPairing pairing) {
  for (const auto& [i, u] : source) {
    if (u.ring() != ring) {
      throw RingMismatch("source u_" + std::to_string(i) + " is over " + u.ring().spec() + ", expected " + ring.spec());
    }
  }
  auto src = std::make_shared<const SourceFamily>(source);
  GFamily gf{ring, pairing, std::move(source), rf_zero(ring), rf_zero(ring), rf_zero(ring), rf_zero(ring), rf_zero(ring)};

  gf.g1 = rf_index_map(
      ring, [pairing](Index k) -> std::optional<Index> { return pairing.encode(0, k); }, "g1");
  gf.g2 = rf_index_map(
      ring,
      [pairing](Index k) -> std::optional<Index> {
        auto [i, c] = pairing.decode(k);
        if (i != 0) return std::nullopt;
        return c;
      },
      "g2");
  gf.g3 = rf_from_rows(
      ring,
      [ring, src, pairing](Index k) -> FinVec {
        auto [i, c] = pairing.decode(k);
        auto it = src->find(i);
        if (it == src->end()) return {};
        std::vector<FinVec::Entry> out;
        for (const auto& [col, v] : it->second.row(c)) out.emplace_back(pairing.encode(i, col), v);
        return FinVec(ring, std::move(out));
      },
      "g3");
  gf.g4 = rf_index_map(
      ring,
      [pairing](Index k) -> std::optional<Index> {
        auto [i, c] = pairing.decode(k);
        return pairing.encode(i + 1, c);
      },
      "g4");
  gf.g5 = rf_index_map(
      ring,
      [pairing](Index k) -> std::optional<Index> {
        auto [i, c] = pairing.decode(k);
        return pairing.encode(i - 1, c);
      },
      "g5");
  return gf;
}

RowFiniteMap g_family_value(const GFamily& gf, std::int64_t i) {
  const RowFiniteMap& up = i >= 0 ? gf.g4 : gf.g5;
  const RowFiniteMap& down = i >= 0 ? gf.g5 : gf.g4;
  const std::size_t steps = static_cast<std::size_t>(std::llabs(i));
  std::vector<RowFiniteMap> chain{gf.g1};
  chain.insert(chain.end(), steps, up);
  chain.push_back(gf.g3);
  chain.insert(chain.end(), steps, down);
  chain.push_back(gf.g2);
  return rf_compose_all(chain);
}

CheckList verify_g_family(const GFamily& gf, Window w) {
  CheckList checks;
  const Ring& r = gf.ring;
  const RowFiniteMap one = rf_identity(r);
  checks.add("g2g1 = layer projection", rf_equal_on_window(rf_compose(gf.g2, gf.g1), gf.layer_zero_projection(), w), r);
  checks.add("g1g2 = 1", rf_equal_on_window(rf_compose(gf.g1, gf.g2), one, w), r);
  checks.add("g4g5 = 1", rf_equal_on_window(rf_compose(gf.g4, gf.g5), one, w), r);
  checks.add("g5g4 = 1", rf_equal_on_window(rf_compose(gf.g5, gf.g4), one, w), r);
  for (const auto& [i, u] : gf.source) {
    checks.add("u[" + std::to_string(i) + "] from g-chain", rf_equal_on_window(g_family_value(gf, i), u, w), r);
  }
  return checks;
}

Environment TwoGenWitness::env() const { return Environment{{"f1", f1}, {"f3", f3}}; }

const RingWord& TwoGenWitness::word_for_g(int i) const {
  if (i < 1 || i > 5) throw Error("word_for_g: index " + std::to_string(i) + " outside 1..5");
  return g_words[static_cast<std::size_t>(i - 1)];
}

RingWord TwoGenWitness::word_for_u(std::int64_t i) const {
  const RingWord& up = word_for_g(i >= 0 ? 4 : 5);
  const RingWord& down = word_for_g(i >= 0 ? 5 : 4);
  const std::size_t steps = static_cast<std::size_t>(std::llabs(i));
  std::vector<RingWord> chain{word_for_g(1)};
  chain.insert(chain.end(), steps, up);
  chain.push_back(word_for_g(3));
  chain.insert(chain.end(), steps, down);
  chain.push_back(word_for_g(2));
  return RingWord::product_chain(chain);
}

TwoGenWitness build_two_generators(const GFamily& gf, const SevenPartition& partition) {
  const Ring& ring = gf.ring;
  struct Isos {
    std::vector<OrderIso> step;  // step[c-1]: piece c -> piece c+1, c = 1..5
    OrderIso tail;
    OrderIso f2;
    SevenPartition part;
  };
  std::vector<OrderIso> step;
  for (int c = 1; c <= 5; ++c) step.push_back(order_iso(partition.piece(c), partition.piece(c + 1)));
  auto isos = std::make_shared<const Isos>(Isos{std::move(step), order_iso(partition.tail_pieces(), partition.piece(7)),
                                                order_iso(InfiniteSet::naturals(), partition.piece(1)), partition});

  auto f1_fwd = [isos](Index k) -> std::optional<Index> {
    const int c = isos->part.class_of(k);
    if (c <= 5) return isos->step[static_cast<std::size_t>(c - 1)](k);
    return isos->tail(k);
  };
  auto f1_inv = [isos](Index m) -> std::optional<Index> {
    const int c = isos->part.class_of(m);
    if (c == 1) return std::nullopt;
    if (c <= 6) return isos->step[static_cast<std::size_t>(c - 2)].inverse(m);
    return isos->tail.inverse(m);
  };

  TwoGenWitness tg{ring,
                   rf_index_map(ring, f1_fwd, "f1"),
                   rf_index_map(
                       ring, [isos](Index k) { return isos->f2(k); }, "f2"),
                   rf_zero(ring),
                   {},
                   RingWord::gen("f1"),
                   RingWord::gen("f3"),
                   {RingWord::zero(), RingWord::zero(), RingWord::zero(), RingWord::zero(), RingWord::zero()}};
  for (const auto& [i, u] : gf.source) tg.materialized.push_back(i);

  const std::array<RowFiniteMap, 5> gs{gf.g1, gf.g2, gf.g3, gf.g4, gf.g5};
  tg.f3 = rf_from_rows(
      ring,
      [ring, isos, f1_inv, gs](Index m) -> FinVec {
        const int c = isos->part.class_of(m);
        if (c == 1) return {};
        // Undo f1 back into piece 1 (t_i^{-1}, or t_6^{-1} on piece 7).
        const int depth = c == 7 ? 6 : c - 1;
        Index k = m;
        for (int s = 0; s < depth; ++s) {
          auto prev = f1_inv(k);
          if (!prev) return {};
          k = *prev;
        }
        if (c == 7) return FinVec::unit(ring, *isos->f2(k));
        auto j = isos->f2.inverse(k);
        if (!j) return {};
        return gs[static_cast<std::size_t>(c - 2)].row(*j);
      },
      "f3");

  for (int i = 1; i <= 5; ++i) {
    std::vector<RingWord> chain(6, tg.f1_word);
    chain.push_back(tg.f3_word);
    chain.insert(chain.end(), static_cast<std::size_t>(i), tg.f1_word);
    chain.push_back(tg.f3_word);
    tg.g_words[static_cast<std::size_t>(i - 1)] = RingWord::product_chain(chain);
  }
  return tg;
}

CheckList verify_two_generators(const TwoGenWitness& tg, const GFamily& gf, Window w) {
  CheckList checks;
  WordEvaluator ev(tg.ring, tg.env());
  for (int i = 1; i <= 5; ++i) {
    checks.add("g" + std::to_string(i) + " = f1^6 f3 f1^" + std::to_string(i) + " f3",
               rf_equal_on_window(ev.eval(tg.word_for_g(i)), gf.g(i), w), tg.ring);
  }
  for (const auto& [i, u] : gf.source) {
    checks.add("u[" + std::to_string(i) + "] from {f1,f3}", rf_equal_on_window(ev.eval(tg.word_for_u(i)), u, w),
               tg.ring);
  }
  return checks;
}

TwoGenWitness two_generator_words(const Ring& ring, SourceFamily source, Window w) {
  GFamily gf = build_g_family(ring, std::move(source));
  require_all(verify_g_family(gf, w), "g-family");
  TwoGenWitness tg = build_two_generators(gf);
  require_all(verify_two_generators(tg, gf, w), "two generators");
  return tg;
}

std::vector<bool> central_flags(const Ring& ring, const std::vector<Element>& elements) {
  std::vector<bool> out(elements.size(), true);
  if (ring.is_commutative()) return out;
  std::vector<Element> probes;
  if (auto order = ring.order()) {
    for (std::uint64_t k = 0; k < *order; ++k) probes.push_back(ring.element_at(k));
  } else {
    const std::size_t m = ring.matrix_size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) probes.push_back(ring.matrix_unit(i, j));
    }
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (const auto& y : probes) {
      if (ring.mul(elements[e], y) != ring.mul(y, elements[e])) {
        out[e] = false;
        break;
      }
    }
  }
  return out;
}

MaltsevReport maltsev_embed(const Ring& ring, std::size_t count, const MaltsevOptions& options) {
  if (count == 0) throw PreconditionViolation("maltsev: count must be positive");
  if (auto order = ring.order(); order && count > *order) {
    throw PreconditionViolation("maltsev: " + ring.spec() + " has only " + std::to_string(*order) + " elements");
  }
  MaltsevReport report{ring, {}, {}, {}, {}, {}};
  SourceFamily family;
  for (std::size_t e = 0; e < count; ++e) {
    Element s = ring.element_at(e);
    const std::int64_t i = zunfold(e + 1);
    family.emplace(i, rf_scalar(ring, s));
    report.elements.push_back(std::move(s));
    report.family_index.push_back(i);
  }
  GFamily gf = build_g_family(ring, family);
  TwoGenWitness tg = build_two_generators(gf);
  if (options.tamper) options.tamper(tg);
  report.checks.append(verify_g_family(gf, options.window));
  report.checks.append(verify_two_generators(tg, gf, options.window));

  WordEvaluator ev(ring, tg.env());
  std::vector<RowFiniteMap> values;
  for (std::size_t e = 0; e < count; ++e) {
    report.words.push_back(tg.word_for_u(report.family_index[e]));
    values.push_back(ev.eval(report.words.back()));
  }

  const Window w = options.window;
  auto first_bad = [&](auto&& combine, auto&& expected, const char* op) {
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        auto cmp = rf_equal_on_window(combine(values[a], values[b]), rf_scalar(ring, expected(a, b)), w);
        if (!cmp.equal) {
          return ring.format(report.elements[a]) + " " + op + " " + ring.format(report.elements[b]) + ": " +
                 cmp.describe(ring);
        }
      }
    }
    return std::string{};
  };
  std::string bad_mul = first_bad([](const RowFiniteMap& x, const RowFiniteMap& y) { return rf_compose(x, y); },
                                  [&](std::size_t a, std::size_t b) {
                                    return ring.mul(report.elements[a], report.elements[b]);
                                  },
                                  "*");
  report.checks.add("hom: products", bad_mul.empty(), bad_mul);
  std::string bad_add = first_bad([](const RowFiniteMap& x, const RowFiniteMap& y) { return rf_add(x, y); },
                                  [&](std::size_t a, std::size_t b) {
                                    return ring.add(report.elements[a], report.elements[b]);
                                  },
                                  "+");
  report.checks.add("hom: sums", bad_add.empty(), bad_add);

  report.central = central_flags(ring, report.elements);
  std::mt19937_64 rng(options.seed);
  std::vector<RowFiniteMap> samples{tg.f1, tg.f3};
  for (std::size_t k = 0; k < options.commute_samples; ++k) {
    samples.push_back(rf_random_finite(ring, rng, w.n, w.n, 0.25, "sample" + std::to_string(k)));
  }
  for (std::size_t e = 0; e < count; ++e) {
    if (!report.central[e]) continue;
    const RowFiniteMap& d = values[e];
    std::string bad;
    for (std::size_t k = 0; k < samples.size() && bad.empty(); ++k) {
      auto cmp = rf_equal_on_window(rf_compose(d, samples[k]), rf_compose(samples[k], d), w);
      if (!cmp.equal) bad = samples[k].tag() + ": " + cmp.describe(ring);
    }
    report.checks.add("center: " + ring.format(report.elements[e]) + " commutes", bad.empty(), bad);
  }
  return report;
}

}  // namespace rowfin
