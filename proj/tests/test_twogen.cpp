#include "support.hpp"

#include "rowfin/errors.hpp"
#include "rowfin/twogen.hpp"

#include <array>

using namespace rowfin;

namespace {

SourceFamily random_family(const Ring& r, std::mt19937_64& rng, std::size_t count) {
  SourceFamily src;
  for (std::size_t k = 0; k < count; ++k) src.emplace(zunfold(k + 1), rf_random_finite(r, rng, 24, 24, 0.05));
  return src;
}

}  // namespace

TEST_CASE("g-family on small sources") {
  const Ring r = Ring::prime_field(3);
  const Window w(20);
  {
    SourceFamily src;
    src.emplace(0, rf_identity(r));
    const GFamily gf = build_g_family(r, src);
    CHECK(rf_equal_on_window(rf_compose_all({gf.g1, gf.g3, gf.g2}), rf_identity(r), w));
  }
  {
    SourceFamily src;
    src.emplace(1, rf_matrix_unit(r, 1, 2));
    const GFamily gf = build_g_family(r, src);
    CHECK(rf_equal_on_window(rf_compose_all({gf.g1, gf.g4, gf.g3, gf.g5, gf.g2}), rf_matrix_unit(r, 1, 2), w));
    CHECK(rf_equal_on_window(rf_compose_all({gf.g1, gf.g3, gf.g2}), rf_zero(r), w));
    CHECK(rf_equal_on_window(g_family_value(gf, 1), rf_matrix_unit(r, 1, 2), w));
    CHECK(rf_equal_on_window(g_family_value(gf, -1), rf_zero(r), w));
  }
  {
    SourceFamily src;
    src.emplace(-2, rf_matrix_unit(r, 3, 1));
    const GFamily gf = build_g_family(r, src);
    testing::require_pass(verify_g_family(gf, w));
    CHECK(rf_equal_on_window(g_family_value(gf, -2), rf_matrix_unit(r, 3, 1), w));
  }
  SourceFamily wrong;
  wrong.emplace(0, rf_identity(Ring::prime_field(5)));
  CHECK_THROWS_AS(build_g_family(r, wrong), RingMismatch);
}

TEST_CASE("g-family rows follow the layer coordinates") {
  const Ring r = Ring::integers();
  const GFamily gf = build_g_family(r, {});
  const ZPairing p = z_pairing();
  for (Index k = 1; k <= 30; ++k) {
    CHECK(gf.g1.row(k) == FinVec::unit(r, p.encode(0, k)));
    CHECK(gf.g2.row(p.encode(0, k)) == FinVec::unit(r, k));
    CHECK(gf.g4.row(p.encode(2, k)) == FinVec::unit(r, p.encode(3, k)));
    CHECK(gf.g5.row(p.encode(-1, k)) == FinVec::unit(r, p.encode(-2, k)));
    CHECK(gf.g3.row(k).empty());
  }
  CHECK(gf.g2.row(p.encode(1, 1)).empty());
}

TEST_CASE("two generators: f1, f2 and word lengths") {
  const Ring r = Ring::integers();
  SourceFamily src;
  src.emplace(0, rf_identity(r));
  const GFamily gf = build_g_family(r, src);
  const TwoGenWitness tg = build_two_generators(gf);
  for (Index k = 1; k <= 40; ++k) CHECK(tg.f2.row(k) == FinVec::unit(r, 7 * k - 6));
  // f1 moves each of the first five pieces to the next, and pieces 6, 7 together onto piece 7.
  for (Index j = 1; j <= 20; ++j) {
    for (Index c = 1; c <= 5; ++c) CHECK(tg.f1.row(7 * (j - 1) + c) == FinVec::unit(r, 7 * (j - 1) + c + 1));
    CHECK(tg.f1.row(7 * j - 1) == FinVec::unit(r, 7 * (2 * j - 1)));
    CHECK(tg.f1.row(7 * j) == FinVec::unit(r, 7 * 2 * j));
  }
  const RowFiniteMap f16 = rf_pow(tg.f1, 6);
  for (Index j = 1; j <= 20; ++j) CHECK(f16.row(7 * j - 6) == FinVec::unit(r, 7 * (2 * j - 1)));
  for (Index k = 1; k <= 40; k += 7) CHECK(tg.f3.row(k).empty());
  for (int i = 1; i <= 5; ++i) CHECK(tg.word_for_g(i).length() == static_cast<std::size_t>(8 + i));
  CHECK(tg.word_for_g(1).generators() == std::vector<std::string>{"f1", "f3"});
  CHECK(tg.word_for_u(0).generators() == std::vector<std::string>{"f1", "f3"});
}

TEST_CASE("two generators reproduce small families") {
  const Ring r = Ring::prime_field(3);
  SourceFamily src;
  src.emplace(0, rf_identity(r));
  src.emplace(1, rf_matrix_unit(r, 1, 2));
  src.emplace(-2, rf_matrix_unit(r, 3, 1));
  const GFamily gf = build_g_family(r, src);
  testing::require_pass(verify_g_family(gf, Window(20)));
  const TwoGenWitness tg = build_two_generators(gf);
  testing::require_pass(verify_two_generators(tg, gf, Window(28)));
  CHECK(tg.materialized == std::vector<std::int64_t>{-2, 0, 1});

  const TwoGenWitness empty = two_generator_words(r, {}, Window(24));
  CHECK(empty.materialized.empty());
  const GFamily none = build_g_family(r, {});
  for (Index k = 1; k <= 24; ++k) CHECK(none.g3.row(k).empty());
}

TEST_CASE("u-words against a dense oracle") {
  std::mt19937_64 rng(41);
  for (std::int64_t mod : {6, 5}) {
    const Ring r = mod == 6 ? Ring::integers_mod(6) : Ring::prime_field(5);
    for (int t = 0; t < 4; ++t) {
      const SourceFamily src = random_family(r, rng, 1 + uniform_below(rng, 7));
      const GFamily gf = build_g_family(r, src);
      const TwoGenWitness tg = build_two_generators(gf);
      const Environment env = tg.env();
      for (const auto& [i, u] : src) {
        const RowFiniteMap got = word_eval(tg.word_for_u(i), env, r);
        CHECK(testing::to_dense(got, 24, 24) == testing::to_dense(u, 24, 24));
        for (Index a = 25; a <= 32; ++a) CHECK(got.row(a).empty());
      }
    }
  }
}

TEST_CASE("tampered f3 is caught") {
  const Ring r = Ring::prime_field(3);
  SourceFamily src;
  src.emplace(1, rf_matrix_unit(r, 1, 2));
  const GFamily gf = build_g_family(r, src);
  TwoGenWitness tg = build_two_generators(gf);
  tg.f3 = rf_add(tg.f3, rf_matrix_unit(r, 2, 1));
  CHECK(testing::any_failure(verify_two_generators(tg, gf, Window(20))));
}

TEST_CASE("embedding a finite commutative ring") {
  MaltsevOptions opt;
  opt.window = Window(16);
  const MaltsevReport rep = maltsev_embed(Ring::integers_mod(6), 6, opt);
  testing::require_pass(rep.checks);
  CHECK(rep.elements.size() == 6);
  for (bool c : rep.central) CHECK(c);
  for (std::size_t e = 0; e < 6; ++e) CHECK(rep.family_index[e] == zunfold(e + 1));
}

TEST_CASE("center of 2x2 matrices over GF(2)") {
  const Ring m = Ring::parse("Mat:2:GF:2");
  std::vector<Element> all;
  for (std::uint64_t i = 0; i < 16; ++i) all.push_back(m.element_at(i));
  const auto flags = central_flags(m, all);
  // Independent census with plain bit arithmetic.
  using M2 = std::array<int, 4>;
  auto mul = [](const M2& a, const M2& b) {
    return M2{(a[0] * b[0] + a[1] * b[2]) % 2, (a[0] * b[1] + a[1] * b[3]) % 2, (a[2] * b[0] + a[3] * b[2]) % 2,
              (a[2] * b[1] + a[3] * b[3]) % 2};
  };
  auto entries = [&](const Element& e) {
    const std::string s = m.format(e);
    M2 out{};
    int k = 0;
    for (char c : s) {
      if (c == '0' || c == '1') out[k++] = c - '0';
    }
    return out;
  };
  int central = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    bool z = true;
    for (std::size_t j = 0; j < 16; ++j) z = z && mul(entries(all[i]), entries(all[j])) == mul(entries(all[j]), entries(all[i]));
    CHECK(flags[i] == z);
    central += z;
  }
  CHECK(central == 2);
}

TEST_CASE("embedding a noncommutative ring") {
  MaltsevOptions opt;
  opt.window = Window(12);
  opt.commute_samples = 5;
  const MaltsevReport rep = maltsev_embed(Ring::parse("Mat:2:GF:2"), 16, opt);
  testing::require_pass(rep.checks);
  opt.tamper = [](TwoGenWitness& tg) { tg.f3 = rf_add(tg.f3, rf_matrix_unit(tg.ring, 2, 1)); };
  CHECK(testing::any_failure(maltsev_embed(Ring::integers_mod(6), 6, opt).checks));
}
