#include <gtest/gtest.h>

#include <unordered_map>

#include "vnlab/adversarial.hpp"
#include "vnlab/schemes.hpp"

using namespace vnlab;

namespace {

const VertexLabel kV{Namespace::V1, 1};

struct Instance {
  LabeledGraph g1 = asymmetric_graph(6);
  LabeledGraph g2 = asymmetric_graph(6, Namespace::V2);
  Obfuscation o = positional_obfuscation(g2);
};

}  // namespace

TEST(EpsilonSequence, StandardAndValidation) {
  const auto e = EpsilonSequence::standard(6);
  EXPECT_EQ(e.eps(1), Rational(1, 12));
  EXPECT_EQ(e.xi(6), Rational(7, 12));
  Rational sum = 0;
  for (std::size_t k = 1; k <= 6; ++k) sum += e.xi(k);
  EXPECT_EQ(sum, 1);
  EXPECT_THROW(EpsilonSequence(3, {Rational(1, 3), Rational(1, 2)}), InvalidInput);
  EXPECT_THROW(EpsilonSequence(3, {Rational(1, 4), Rational(1, 5)}), InvalidInput);
  EXPECT_THROW(EpsilonSequence(3, {Rational(1, 4)}), InvalidInput);
  const auto t = EpsilonSequence::with_target(8, 1, Rational(1, 10));
  EXPECT_EQ(t.eps(7), Rational(1, 10));
  EXPECT_LE(t.eps(1), Rational(1, 100));
  EXPECT_THROW(EpsilonSequence::with_target(6, 1, Rational(9, 10)), InvalidInput);
}

TEST(BuildAdversarial, FibersHaveFactorialSizeAndExactMasses) {
  Instance s;
  const auto eps = EpsilonSequence::standard(6);
  for (const auto& scheme : {random_baseline_scheme(0), gm_scheme({GmMode::Exact})}) {
    const auto adv = build_adversarial(scheme, s.g1, s.g2, s.o, kV, eps);
    EXPECT_EQ(adv.dist.atoms().size(), 720u);
    for (std::size_t k = 1; k <= 6; ++k) EXPECT_EQ(adv.fiber_size[k], 120u) << scheme.name();
    for (std::size_t i = 0; i < adv.fiber.size(); ++i)
      EXPECT_EQ(adv.dist.atoms()[i].mass, adv.fiber[i] < 6 ? Rational(1, 1440) : Rational(7, 1440));
  }
}

TEST(BuildAdversarial, SandwichHoldsExactly) {
  Instance s;
  const auto eps = EpsilonSequence::standard(6);
  const auto scheme = random_baseline_scheme(4);
  const auto adv = build_adversarial(scheme, s.g1, s.g2, s.o, kV, eps);
  auto obf = [&](const Atom&) { return s.o; };
  const auto err = exact_errors(scheme, adv.dist, obf);
  const auto rev = exact_errors(reversal_scheme(scheme), adv.dist, obf);
  const auto bayes = bayes_errors(adv.dist);
  for (std::size_t k = 1; k < 6; ++k) {
    EXPECT_EQ(err[k], 1 - eps.eps(k));
    EXPECT_EQ(rev[k], eps.eps(6 - k));
    EXPECT_LE(bayes[k], eps.eps(6 - k));
    EXPECT_LT(eps.eps(6 - k), chance_line(6, k));
    EXPECT_LT(chance_line(6, k), err[k]);
  }
}

TEST(BuildAdversarial, RejectsSymmetricInputs) {
  Instance s;
  auto sym = with_labels(make_graph(6, {{1, 2}}), sequential_labels(6, Namespace::V2));
  EXPECT_THROW(build_adversarial(random_baseline_scheme(), s.g1, sym, positional_obfuscation(sym), kV,
                                 EpsilonSequence::standard(6)),
               InvalidInput);
  EXPECT_THROW(build_adversarial(random_baseline_scheme(), s.g1, s.g2, s.o, kV, EpsilonSequence::standard(7)),
               InvalidInput);
}

TEST(UniversalSequence, GapAtSmallSizes) {
  const auto rows = universal_inconsistency_sequence([](std::size_t) { return random_baseline_scheme(1); }, {6, 7},
                                                     Rational(1, 10), KRule::fixed(1));
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_GE(r.scheme_error, Rational(99, 100));
    EXPECT_LE(r.reversal_error, Rational(1, 10));
    EXPECT_EQ(r.reversal_error, r.eps_bound);
    EXPECT_LE(r.bayes_error, r.eps_bound);
  }
}

TEST(SampleFiber, UniformOverEnumeratedFiber) {
  Instance s;
  const auto scheme = random_baseline_scheme(2);
  const auto adv = build_adversarial(scheme, s.g1, s.g2, s.o, kV, EpsilonSequence::standard(6));
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < adv.dist.atoms().size(); ++i)
    if (adv.fiber[i] == 3) index.emplace(structure_key(adv.dist.atoms()[i].pair.g2), index.size());
  ASSERT_EQ(index.size(), 120u);
  std::vector<std::size_t> counts(121, 0);
  Rng rng({61, 0});
  const std::size_t draws = 6000;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto f = sample_fiber(scheme, s.g1, s.g2, s.o, kV, 3, rng);
    const auto it = index.find(structure_key(f.pair.g2));
    ASSERT_NE(it, index.end());
    ++counts[it->second + 1];
  }
  EXPECT_GT(chi_square_uniform(counts, 120).second, 0.001);
}
