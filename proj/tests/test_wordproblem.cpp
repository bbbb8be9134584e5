#include <doctest.h>

#include <atomic>

#include "oracles.hpp"
#include "rgroups/wordproblem.hpp"

using namespace rgroups;

namespace {

Word W(std::string_view s) { return Word::parse(s); }

std::shared_ptr<const Presentation> genus2() {
  static auto p = std::make_shared<const Presentation>(surface_presentation(2));
  return p;
}

std::shared_ptr<const Presentation> pres(int m, std::initializer_list<const char*> rs) {
  std::vector<CyclicWord> out;
  for (const char* r : rs) out.emplace_back(W(r));
  return std::make_shared<const Presentation>(m, std::move(out));
}

}  // namespace

TEST_CASE("dehn_reduce examples") {
  CHECK(dehn_reduce(W("abABcdCD"), *genus2()).str() == "");
  CHECK(dehn_reduce(W("abABcdC"), *genus2()).str() == "d");
  CHECK(dehn_reduce(W("a"), *genus2()).str() == "a");
  CHECK(dehn_reduce(W("aA"), *genus2()).str() == "");
}

TEST_CASE("is_trivial and are_equal examples") {
  const auto free2 = Backend::free(2);
  CHECK(free2.is_trivial(W("aA")) == Verdict::yes);
  CHECK(free2.are_equal(W("a"), W("b")) == Verdict::no);
  CHECK(free2.are_equal(W("ab"), W("ab")) == Verdict::yes);

  const auto dehn = Backend::dehn(genus2());
  CHECK(dehn.is_trivial(W("abAB")) == Verdict::no);
  CHECK(dehn.is_trivial(W("dcDCbaBA")) == Verdict::yes);
  CHECK(dehn.are_equal(W("abAB"), W("dcDC")) == Verdict::yes);
  CHECK(dehn.are_equal(W("abABcdC"), W("d")) == Verdict::yes);
}

TEST_CASE("the dehn backend refuses presentations without C'(1/6)") {
  CHECK_THROWS_AS(Backend::dehn(std::make_shared<const Presentation>(z2_presentation())),
                  NotSmallCancellation);
  CHECK(Backend::automatic(std::make_shared<const Presentation>(z2_presentation())).kind() ==
        BackendKind::budgeted);
  CHECK(Backend::automatic(genus2()).kind() == BackendKind::dehn);
  CHECK(Backend::automatic(std::make_shared<const Presentation>(free_presentation(3))).kind() ==
        BackendKind::free);
}

TEST_CASE("budget defaults") {
  const Budget b = Budget::defaults(*genus2());
  CHECK(b.max_word_length == 32);
  CHECK(b.max_states == 1000000);
}

TEST_CASE("the relator index finds the longest applicable match") {
  const RelatorIndex index(*genus2());
  CHECK(index.rotations().size() == 16);
  CHECK(index.key_length() == 5);
  const Word w = W("abABcdC");
  const auto m = index.longest_match(w.letters(), 0);
  CHECK(m.length == 7);
  CHECK(index.longest_match(W("abAB").letters(), 0).length == 0);
}

TEST_CASE("dehn reduction shortens strictly and never changes the element") {
  const auto dehn = Backend::dehn(genus2());
  const RelatorIndex index(*genus2());
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    Word w = random_reduced_word(4, 1 + rng.below(30), rng);
    // Splice in most of a relator to force rewrites.
    const Word r = genus2()->relators()[0].rotation(rng.below(8));
    const std::size_t keep = 5 + rng.below(3);
    const std::size_t at = rng.below(w.size() + 1);
    Word spliced(std::vector<Letter>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(at)));
    spliced.append(r.subword(0, keep).letters());
    spliced.append(std::span<const Letter>(w.letters()).subspan(at));
    const Word out = dehn.reduce(spliced);
    REQUIRE(out.size() <= free_reduce(spliced).size());
    REQUIRE(out.is_reduced());
    REQUIRE(dehn.are_equal(out, spliced) == Verdict::yes);
    // No subword longer than half a relator survives.
    for (std::size_t pos = 0; pos < out.size(); ++pos) {
      REQUIRE(index.longest_match(out.letters(), pos).length == 0);
    }
  }
}

TEST_CASE("dehn agrees with budgeted search on all genus-2 words of length <= 8") {
  const auto dehn = Backend::dehn(genus2());
  Budget budget;
  budget.max_word_length = 0;  // non-length-increasing search
  budget.max_states = 100000;
  const auto search = Backend::budgeted(genus2(), budget);
  std::size_t total = 0, trivial = 0, definite = 0;
  for (int n = 0; n <= 8; ++n) {
    const auto words = oracle::reduced_words(4, n);
    std::atomic<std::size_t> bad{0}, triv{0}, def{0};
    const auto count = static_cast<std::ptrdiff_t>(words.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Word w = W(words[static_cast<std::size_t>(i)]);
      const Verdict a = dehn.is_trivial(w);
      const Verdict b = search.is_trivial(w);
      if (a == Verdict::unknown) ++bad;
      if (b != Verdict::unknown) {
        ++def;
        if (a != b) ++bad;
      }
      if (a == Verdict::yes) ++triv;
    }
    REQUIRE(bad == 0);
    total += words.size();
    trivial += triv;
    definite += def;
  }
  // Nontrivial identity words of length <= 8 are the 16 cyclic conjugates
  // of r and r^-1.
  CHECK(trivial == 1 + 16);
  CHECK(definite == total);
}

TEST_CASE("test-side search oracle agrees with dehn on trivial and nontrivial samples") {
  const auto dehn = Backend::dehn(genus2());
  const std::vector<std::string> rels{"abABcdCD"};
  Rng rng(8);
  for (int i = 0; i < 150; ++i) {
    const Word w = random_reduced_word(4, 2 + rng.below(7), rng);
    const int o = oracle::trivial_by_search(w.str(), rels, w.size());
    REQUIRE(o != -1);
    CHECK((o == 1) == (dehn.is_trivial(w) == Verdict::yes));
  }
  for (const char* w : {"abABcdCD", "BcdCDabA", "dcDCbaBA"}) {
    CHECK(oracle::trivial_by_search(w, rels, 8) == 1);
    CHECK(dehn.is_trivial(W(w)) == Verdict::yes);
  }
}

TEST_CASE("budgeted search on Z^2") {
  const auto z2 = std::make_shared<const Presentation>(z2_presentation());
  const auto b = Backend::budgeted(z2, Budget::defaults(*z2));
  CHECK(b.is_trivial(W("abAB")) == Verdict::yes);
  CHECK(b.are_equal(W("ab"), W("ba")) == Verdict::yes);
  CHECK(b.are_equal(W("aabb"), W("baba")) == Verdict::yes);
  CHECK(b.is_trivial(W("a")) != Verdict::yes);
  Budget tiny;
  tiny.max_states = 3;
  tiny.max_word_length = 20;
  CHECK(Backend::budgeted(z2, tiny).is_trivial(W("abaBAAbB")) != Verdict::no);
}

TEST_CASE("are_equal is an equivalence relation on definite samples") {
  const auto dehn = Backend::dehn(genus2());
  Rng rng(21);
  std::vector<Word> sample;
  for (int i = 0; i < 40; ++i) sample.push_back(random_reduced_word(4, rng.below(5), rng));
  // Add equal pairs via relator conjugates.
  sample.push_back(W("abAB"));
  sample.push_back(W("dcDC"));
  sample.push_back(W("abABcdC"));
  sample.push_back(W("d"));
  for (const auto& x : sample) {
    CHECK(dehn.are_equal(x, x) == Verdict::yes);
    for (const auto& y : sample) {
      const Verdict xy = dehn.are_equal(x, y);
      REQUIRE(xy == dehn.are_equal(y, x));
      if (xy != Verdict::yes) continue;
      for (const auto& z : sample) {
        if (dehn.are_equal(y, z) == Verdict::yes) REQUIRE(dehn.are_equal(x, z) == Verdict::yes);
      }
    }
  }
}

TEST_CASE("collapse detection") {
  CHECK(detect_collapse(*pres(2, {"a", "b"})).verdict == CollapseVerdict::trivial);
  const auto two = detect_collapse(*pres(2, {"aa", "bb", "ab"}));
  CHECK(two.verdict == CollapseVerdict::order_two);
  CHECK(two.order == std::optional<std::size_t>(2));
  const auto z3 = detect_collapse(*pres(2, {"aaa", "b"}));
  CHECK(z3.verdict == CollapseVerdict::infinite_or_unknown);
  CHECK(z3.order == std::optional<std::size_t>(3));
  // S_3 = <a, b | a^2, b^3, (ab)^2>.
  CHECK(detect_collapse(*pres(2, {"aa", "bbb", "abab"})).order == std::optional<std::size_t>(6));
  // Z/2 x Z/2 and the quaternion group.
  CHECK(detect_collapse(*pres(2, {"aa", "bb", "abAB"})).order == std::optional<std::size_t>(4));
  CHECK(detect_collapse(*pres(2, {"aaaa", "aaBB", "abaB"})).order ==
        std::optional<std::size_t>(8));
  const auto surface = detect_collapse(*genus2(), CollapseBudget{20000});
  CHECK(surface.verdict == CollapseVerdict::infinite_or_unknown);
  CHECK(!surface.order);
  CHECK(detect_collapse(free_presentation(2), CollapseBudget{1000}).verdict ==
        CollapseVerdict::infinite_or_unknown);
}

TEST_CASE("collapse orders agree with a brute-force quotient of a finite group") {
  // Dihedral groups D_n = <a, b | a^n, b^2, (ab)^2> have order 2n.
  for (int n = 2; n <= 12; ++n) {
    std::string an(static_cast<std::size_t>(n), 'a');
    const auto p = pres(2, {an.c_str(), "bb", "abab"});
    CHECK(detect_collapse(*p).order == std::optional<std::size_t>(2 * n));
  }
  // Z/n with a redundant generator relation: cyclic of order gcd-driven size.
  for (int n = 1; n <= 9; ++n) {
    std::string an(static_cast<std::size_t>(n), 'a');
    const auto p = pres(2, {an.c_str(), "aB"});
    const auto r = detect_collapse(*p);
    CHECK(r.order == std::optional<std::size_t>(n));
    CHECK((r.verdict == CollapseVerdict::trivial) == (n == 1));
    CHECK((r.verdict == CollapseVerdict::order_two) == (n == 2));
  }
}
