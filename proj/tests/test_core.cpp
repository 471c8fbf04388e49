#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "regioncreep/core.hpp"

using namespace regioncreep;

TEST_CASE("region_grid counts and order") {
  CHECK(region_grid(8, 8, 3).size() == 36);
  CHECK(region_grid(32, 32, 5).size() == 784);

  auto one = region_grid(5, 5, 5);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == RegionId{0, 0});

  auto g = region_grid(4, 3, 2);
  REQUIRE(g.size() == 6);
  CHECK(g[0] == RegionId{0, 0});
  CHECK(g[1] == RegionId{1, 0});
  CHECK(g[2] == RegionId{2, 0});
  CHECK(g[3] == RegionId{0, 1});
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("region_grid count law over random geometry") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(1, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const int a = std::uniform_int_distribution<int>(1, std::min(w, h))(rng);
    const auto g = region_grid(w, h, a);
    CHECK(g.size() == static_cast<std::size_t>((w - a + 1) * (h - a + 1)));
    for (auto r : g) CHECK(region_valid(r, w, h, a));
  }
}

TEST_CASE("region_grid rejects bad geometry") {
  CHECK_THROWS_AS(region_grid(4, 8, 5), GeometryError);
  CHECK_THROWS_AS(region_grid(8, 4, 5), GeometryError);
  CHECK_THROWS_AS(region_grid(8, 8, 0), GeometryError);
  CHECK_THROWS_AS(region_grid(8, 8, -1), std::invalid_argument);
}

TEST_CASE("BinaryImage construction") {
  BinaryImage blank(3, 2);
  CHECK(blank.popcount() == 0);
  CHECK(blank.size() == 6);
  CHECK_THROWS_AS(BinaryImage(2, 2, {0, 1, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BinaryImage(2, 2, {0, 1, 0}), std::invalid_argument);
  BinaryImage img(2, 2, {0, 1, 1, 0});
  CHECK(img.at(1, 0) == 1);
  CHECK(img.at(Coord{0, 1}) == 1);
  CHECK(img.at(0, 0) == 0);
  img.set(0, 0, true);
  CHECK(img.popcount() == 3);
  CHECK(img.contains({1, 1}));
  CHECK_FALSE(img.contains({2, 0}));
  CHECK_FALSE(img.contains({0, -1}));
}

TEST_CASE("extract_area") {
  SUBCASE("all-zero image gives all-zero pattern") {
    BinaryImage img(8, 8);
    for (auto r : region_grid(8, 8, 3)) CHECK(extract_area(img, r, 3) == AreaPattern::zeros(3));
  }
  SUBCASE("identity image") {
    BinaryImage img(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    CHECK(extract_area(img, {0, 0}, 3) == AreaPattern::from_string("100/010/001"));
  }
  SUBCASE("single pixel lands on the local coordinate") {
    BinaryImage img(8, 8);
    img.set(4, 4, true);
    const auto p = extract_area(img, {3, 3}, 3);
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) CHECK(p.at(i, j) == ((3 + i == 4 && 3 + j == 4) ? 1 : 0));
    }
    CHECK(p.popcount() == 1);
  }
  SUBCASE("matches coordinate arithmetic on random images") {
    std::mt19937 rng(11);
    auto img = fixtures::random_image(rng, 9, 7);
    for (auto r : region_grid(9, 7, 4)) {
      const auto p = extract_area(img, r, 4);
      for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) CHECK(p.bits()[static_cast<std::size_t>(j * 4 + i)] == img.at(r.x + i, r.y + j));
      }
    }
  }
  SUBCASE("out of range region") {
    BinaryImage img(8, 8);
    CHECK_THROWS_AS(extract_area(img, {6, 0}, 3), GeometryError);
    CHECK_THROWS_AS(extract_area(img, {0, -1}, 3), GeometryError);
  }
}

TEST_CASE("AreaPattern value semantics") {
  const auto p = AreaPattern::from_string("100/010/001");
  CHECK(p.size() == 3);
  CHECK(p.bit_string() == "100010001");
  CHECK(p.popcount() == 3);
  CHECK(p == AreaPattern(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(p != AreaPattern::zeros(3));
  CHECK(AreaPattern::zeros(3) < p);
  CHECK(p < AreaPattern::ones(3));
  CHECK(AreaPattern::ones(2) != AreaPattern::ones(3));
  CHECK_THROWS(AreaPattern::from_string("10/011"));
  CHECK_THROWS(AreaPattern::from_string("12/01"));
  CHECK_THROWS(AreaPattern(2, {1, 0, 1}));
}

TEST_CASE("AreaPattern ordering is lexicographic on the bit string") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = fixtures::random_pattern(rng, 5);
    const auto q = fixtures::random_pattern(rng, 5);
    CHECK((p < q) == (p.bit_string() < q.bit_string()));
    CHECK((p == q) == (p.bit_string() == q.bit_string()));
  }
}

TEST_CASE("CategoryId") {
  CHECK_THROWS_AS(CategoryId(""), std::invalid_argument);
  CHECK(CategoryId("1") < CategoryId("2"));
  CHECK(CategoryId("I") < CategoryId("O"));
  CHECK(CategoryId("T").label() == "T");
}

TEST_CASE("agreement_score examples") {
  std::mt19937 rng(5);
  const auto q = fixtures::random_pattern(rng, 5);
  CHECK(agreement_score(q, q) == 25);

  const auto p3 = AreaPattern::from_string("101/010/110");
  const auto c3 = AreaPattern::from_string("010/101/001");
  CHECK(agreement_score(p3, c3) == 0);

  CHECK(agreement_score(AreaPattern::from_string("110/000/000"), AreaPattern::from_string("100/000/001")) == 7);
  CHECK_THROWS_AS(agreement_score(AreaPattern::zeros(3), AreaPattern::zeros(5)), std::invalid_argument);
}

TEST_CASE("agreement_score equals a^2 minus Hamming distance") {
  std::mt19937 rng(9);
  for (int a : {1, 3, 5, 8, 9}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = fixtures::random_pattern(rng, a);
      const auto q = fixtures::random_pattern(rng, a);
      const auto r = fixtures::random_pattern(rng, a);
      int hamming_pq = 0;
      int hamming_qr = 0;
      int hamming_pr = 0;
      for (std::size_t k = 0; k < p.cell_count(); ++k) {
        hamming_pq += p.bits()[k] != q.bits()[k];
        hamming_qr += q.bits()[k] != r.bits()[k];
        hamming_pr += p.bits()[k] != r.bits()[k];
      }
      CHECK(agreement_score(p, q) == a * a - hamming_pq);
      CHECK(agreement_score(p, q) == agreement_score(q, p));
      CHECK(hamming_pr <= hamming_pq + hamming_qr);
    }
  }
}

TEST_CASE("windows of an unmodified image agree on every pixel") {
  std::mt19937 rng(21);
  const auto img = fixtures::random_image(rng, 10, 9);
  const int a = 4;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (auto r : region_grid(10, 9, a)) {
        if (x < r.x || y < r.y || x >= r.x + a || y >= r.y + a) continue;
        CHECK(extract_area(img, r, a).at(x - r.x, y - r.y) == img.at(x, y));
      }
    }
  }
}
