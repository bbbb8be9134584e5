#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "oracles.hpp"
#include "rgroups/error.hpp"
#include "rgroups/presentation.hpp"

using namespace rgroups;

namespace {

DensityParams params(int m, Rational d, int length, Support support = {}) {
  DensityParams p;
  p.m = m;
  p.d = d;
  p.length = length;
  p.support = support;
  return p;
}

// Two-sample chi-square statistic over the union of categories.
template <class K>
double two_sample_chi2(const std::map<K, int>& a, const std::map<K, int>& b, int* dof) {
  std::set<K> keys;
  for (const auto& [k, _] : a) keys.insert(k);
  for (const auto& [k, _] : b) keys.insert(k);
  double na = 0, nb = 0;
  for (const auto& [_, c] : a) na += c;
  for (const auto& [_, c] : b) nb += c;
  double stat = 0;
  for (const auto& k : keys) {
    const double x = a.count(k) ? a.at(k) : 0, y = b.count(k) ? b.at(k) : 0;
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
    stat += (ka * x - kb * y) * (ka * x - kb * y) / (x + y);
  }
  *dof = static_cast<int>(keys.size()) - 1;
  return stat;
}

}  // namespace

TEST_CASE("relator_count examples") {
  CHECK(relator_count(params(2, Rational(1, 2), 10)) == 243);
  CHECK(relator_count(params(2, Rational(0), 40)) == 1);
  CHECK(relator_count(params(2, Rational(1, 12), 12)) == 3);
  CHECK(relator_count_exact(params(2, Rational(1, 12), 12)) == doctest::Approx(3.0));
  CHECK(relator_count(params(2, Rational(1, 6), 120)) == 3486784401ULL);
  CHECK_THROWS_AS(relator_count(params(2, Rational(1), 100)), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params(1, Rational(0), 5).validate(), Error);
  CHECK_THROWS_AS(params(2, Rational(3, 2), 5).validate(), Error);
  CHECK_THROWS_AS(params(2, Rational(-1, 2), 5).validate(), Error);
  CHECK_THROWS_AS(params(2, Rational(0), 0).validate(), Error);
  CHECK_THROWS_AS(Support::parse("annulus:0"), Error);
  CHECK_THROWS_AS(Support::parse("disc"), Error);
  CHECK(Support::parse("annulus:3").width == 3);
  CHECK(Support::parse("annulus:3").str() == "annulus:3");
}

TEST_CASE("word-variant sphere sampling") {
  const auto p = sample_density_presentation(params(2, Rational(1, 12), 12), 7);
  REQUIRE(p.relators().size() == 3);
  for (const auto& r : p.relators()) {
    CHECK(r.size() == 12);
    CHECK(r.representative().is_cyclically_reduced());
  }
  CHECK(p.origin().sampled);
  CHECK(p.origin().model == "word");
  CHECK(p.origin().relator_count == 3);

  const auto single = sample_density_presentation(params(2, Rational(0), 5), 1);
  REQUIRE(single.relators().size() == 1);
  CHECK(single.relators()[0].size() == 5);
}

TEST_CASE("sampling is deterministic per seed") {
  const auto p = params(3, Rational(1, 4), 16);
  CHECK(sample_density_presentation(p, 11).dump() == sample_density_presentation(p, 11).dump());
  CHECK(sample_density_presentation(p, 11).digest() ==
        sample_density_presentation(p, 11).digest());
  CHECK(sample_density_presentation(p, 11).dump() != sample_density_presentation(p, 12).dump());
}

TEST_CASE("multiset size equals relator_count for every support") {
  for (const char* s : {"sphere", "ball", "annulus:2"}) {
    for (int len : {4, 9, 13}) {
      const auto p = params(2, Rational(1, 3), len, Support::parse(s));
      const auto pres = sample_density_presentation(p, 5);
      CHECK(pres.relators().size() == relator_count(p));
    }
  }
}

TEST_CASE("annulus support draws lengths in [l, l + C]") {
  const auto p = params(2, Rational(1, 2), 12, Support::parse("annulus:3"));
  const auto pres = sample_density_presentation(p, 3);
  std::set<std::size_t> seen;
  for (const auto& r : pres.relators()) {
    CHECK(r.size() >= 12);
    CHECK(r.size() <= 15);
    seen.insert(r.size());
  }
  CHECK(seen.size() >= 2);
}

TEST_CASE("ball support is uniform over the 161 elements of B_4 in F_2") {
  SupportSampler sampler(params(2, Rational(0), 4, Support::parse("ball")));
  std::map<std::string, int> counts;
  for (int L = 0; L <= 4; ++L) {
    for (const auto& w : oracle::reduced_words(2, L)) counts[w] = 0;
  }
  REQUIRE(counts.size() == 161);
  Rng rng(31337);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto w = sampler.draw(rng).str();
    REQUIRE(counts.count(w) == 1);
    ++counts[w];
  }
  const double expected = static_cast<double>(n) / 161.0;
  double chi2 = 0;
  for (const auto& [w, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 160 degrees of freedom; 0.999 quantile 221.0.
  CHECK(chi2 < 221.0);
}

TEST_CASE("geodesic variant over a free base matches the word variant") {
  auto base = std::make_shared<const Presentation>(free_presentation(2));
  auto word_p = params(2, Rational(0), 6, Support::parse("ball"));
  auto geo_p = word_p;
  geo_p.base = base;
  SupportSampler word(word_p), geo(geo_p);
  Rng r1(1), r2(2);
  std::map<std::size_t, int> len_w, len_g;
  std::map<char, int> first_w, first_g;
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto a = word.draw(r1).str(), b = geo.draw(r2).str();
    ++len_w[a.size()];
    ++len_g[b.size()];
    if (!a.empty()) ++first_w[a[0]];
    if (!b.empty()) ++first_g[b[0]];
  }
  int dof = 0;
  // 0.999 quantiles: 6 dof 22.46, 3 dof 16.27.
  CHECK(two_sample_chi2(len_w, len_g, &dof) < 22.46);
  CHECK(dof == 6);
  CHECK(two_sample_chi2(first_w, first_g, &dof) < 16.27);
  CHECK(dof == 3);
}

TEST_CASE("geodesic variant over the genus-2 surface group") {
  auto base = std::make_shared<const Presentation>(surface_presentation(2));
  auto p = params(4, Rational(1, 2), 3, Support::parse("sphere"));
  p.base = base;
  const auto pres = sample_density_presentation(p, 9);
  REQUIRE(pres.relators().size() == base->relators().size() + relator_count(p));
  CHECK(pres.relators()[0] == base->relators()[0]);
  CHECK(pres.origin().model == "geodesic");
  CHECK(pres.origin().base_relators == 1);
  for (std::size_t i = 1; i < pres.relators().size(); ++i) {
    CHECK(pres.relators()[i].size() == 3);
  }
}

TEST_CASE("geodesic variant reports the radius reached when the base ball is too big") {
  auto base = std::make_shared<const Presentation>(surface_presentation(2));
  auto p = params(4, Rational(1, 4), 6);
  p.base = base;
  p.max_base_elements = 1000;
  try {
    (void)sample_density_presentation(p, 1);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    // |B_2| = 65 <= 1000 < |B_3| = 457 + next level.
    CHECK(e.reached() >= 2);
    CHECK(e.reached() < 6);
  }
}

TEST_CASE("letter budget guards very large relator sets") {
  auto p = params(2, Rational(1, 6), 120);
  CHECK_THROWS_AS(sample_density_presentation(p, 1), BudgetExceeded);
}

TEST_CASE("dedupe keeps one relator per rotation class") {
  auto p = params(2, Rational(1, 2), 4);
  p.dedupe = true;
  const auto pres = sample_density_presentation(p, 4);
  for (std::size_t i = 0; i < pres.relators().size(); ++i) {
    for (std::size_t j = i + 1; j < pres.relators().size(); ++j) {
      CHECK(!(pres.relators()[i] == pres.relators()[j]));
    }
  }
  p.dedupe = false;
  CHECK(sample_density_presentation(p, 4).relators().size() == relator_count(p));
}

TEST_CASE("built-in presentations and shorthands") {
  CHECK(surface_presentation(2).relators()[0].str() == "abABcdCD");
  CHECK(surface_presentation(2).generators() == 4);
  CHECK(z2_presentation().relators()[0].str() == "abAB");
  CHECK(resolve_presentation("free:m=3").generators() == 3);
  CHECK(resolve_presentation("free:m=3").is_free());
  CHECK(resolve_presentation("surface:genus=2").dump() == surface_presentation(2).dump());
  CHECK(resolve_presentation("z2").dump() == z2_presentation().dump());
  CHECK_THROWS_AS(resolve_presentation("free:m=x"), Error);
  CHECK_THROWS_AS(resolve_presentation("/nonexistent/file.json"), Error);
}

TEST_CASE("JSON round trip and validation") {
  const auto p = sample_density_presentation(params(3, Rational(1, 3), 9), 17);
  const auto q = Presentation::from_json(nlohmann::json::parse(p.dump()));
  CHECK(q.dump() == p.dump());
  CHECK(q.digest() == p.digest());

  const auto path = std::filesystem::temp_directory_path() / "rgroups_pres_test.json";
  p.save(path.string());
  CHECK(Presentation::load(path.string()).dump() == p.dump());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(Presentation::from_json(nlohmann::json::parse(R"({"m": 2, "relators": ["abA"]})")),
                  Error);
  CHECK_THROWS_AS(Presentation::from_json(nlohmann::json::parse(R"({"m": 2, "relators": ["abc"]})")),
                  Error);
  CHECK_THROWS_AS(Presentation::from_json(nlohmann::json::parse(R"({"m": 2, "relators": ["a1"]})")),
                  Error);
  CHECK_THROWS_AS(Presentation::from_json(nlohmann::json::parse(R"({"m": 1, "relators": []})")),
                  Error);
  CHECK_THROWS_AS(Presentation::from_json(nlohmann::json::parse(R"({"relators": []})")), Error);
  const auto ok = Presentation::from_json(nlohmann::json::parse(R"({"m": 2, "relators": ["abAB"]})"));
  CHECK(ok.relators().size() == 1);
  CHECK(!ok.origin().sampled);
}
