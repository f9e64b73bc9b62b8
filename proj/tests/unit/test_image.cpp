#include "skesim/image.hpp"

#include <sstream>

#include "doctest.h"
#include "skesim/errors.hpp"

using namespace skesim;

TEST_CASE("read p1 with comments and tight digits") {
  std::istringstream in(
      "P1\n"
      "# a comment\n"
      "4 2\n"
      "1010\n"
      "0 1 0 1\n");
  const BinaryImage img = read_pgm_stream(in);
  REQUIRE(img.width == 4);
  REQUIRE(img.height == 2);
  CHECK(img.at(0, 0));
  CHECK_FALSE(img.at(1, 0));
  CHECK(img.at(2, 0));
  CHECK_FALSE(img.at(0, 1));
  CHECK(img.at(1, 1));
  CHECK(img.at(3, 1));
}

TEST_CASE("read p2 dark is foreground") {
  std::istringstream in(
      "P2\n"
      "3 1\n"
      "255\n"
      "0 127 128\n");
  const BinaryImage img = read_pgm_stream(in);
  CHECK(img.at(0, 0));
  CHECK(img.at(1, 0));
  CHECK_FALSE(img.at(2, 0));
}

TEST_CASE("read p2 scales against maxval") {
  // maxval 100: threshold sits at value*255 < 128*100, so 50 is foreground.
  std::istringstream in(
      "P2\n"
      "2 1\n"
      "100\n"
      "50 51\n");
  const BinaryImage img = read_pgm_stream(in);
  CHECK(img.at(0, 0));
  CHECK_FALSE(img.at(1, 0));
}

TEST_CASE("read p5 binary raster") {
  std::string data =
      "P5\n"
      "3 2\n"
      "255\n";
  const unsigned char raw[] = {0, 200, 10, 255, 5, 130};
  data.append(reinterpret_cast<const char*>(raw), sizeof(raw));
  std::istringstream in(data);
  const BinaryImage img = read_pgm_stream(in);
  CHECK(img.at(0, 0));
  CHECK_FALSE(img.at(1, 0));
  CHECK(img.at(2, 0));
  CHECK_FALSE(img.at(0, 1));
  CHECK(img.at(1, 1));
  CHECK_FALSE(img.at(2, 1));
}

TEST_CASE("read p5 two byte samples") {
  std::string data =
      "P5\n"
      "2 1\n"
      "65535\n";
  const unsigned char raw[] = {0x00, 0x01, 0xff, 0xff};
  data.append(reinterpret_cast<const char*>(raw), sizeof(raw));
  std::istringstream in(data);
  const BinaryImage img = read_pgm_stream(in);
  CHECK(img.at(0, 0));
  CHECK_FALSE(img.at(1, 0));
}

TEST_CASE("invert flag flips the convention") {
  std::istringstream in(
      "P2\n"
      "2 1\n"
      "255\n"
      "0 255\n");
  const BinaryImage img = read_pgm_stream(in, true);
  CHECK_FALSE(img.at(0, 0));
  CHECK(img.at(1, 0));
}

TEST_CASE("read rejects garbage") {
  {
    std::istringstream in("P4\n2 2\n");
    CHECK_THROWS_AS(read_pgm_stream(in), IoError);
  }
  {
    std::istringstream in("P2\n2 1\n255\n12\n");  // missing sample
    CHECK_THROWS_AS(read_pgm_stream(in), IoError);
  }
  {
    std::istringstream in("P1\n0 4\n");
    CHECK_THROWS_AS(read_pgm_stream(in), IoError);
  }
  {
    std::istringstream in("P5\n2 1\n70000\n");
    CHECK_THROWS_AS(read_pgm_stream(in), IoError);
  }
}

TEST_CASE("p1 write read round trip") {
  BinaryImage img(70, 3);  // wide enough to exercise line wrapping
  for (int x = 0; x < 70; x += 2) {
    img.set(x, 1, true);
  }
  std::ostringstream out;
  write_pbm_stream(img, out);
  std::istringstream in(out.str());
  const BinaryImage back = read_pgm_stream(in);
  CHECK(back == img);
}

TEST_CASE("component_count separates diagonal touch from gap") {
  BinaryImage img(4, 4);
  img.set(0, 0, true);
  img.set(1, 1, true);  // diagonal neighbor, same 8-component
  img.set(3, 3, true);  // separated
  CHECK(img.component_count() == 2);
  CHECK(img.foreground_count() == 3);
}

TEST_CASE("draw_line connects endpoints") {
  BinaryImage img(10, 10);
  draw_line(img, {1, 1}, {8, 5});
  CHECK(img.at(1, 1));
  CHECK(img.at(8, 5));
  CHECK(img.component_count() == 1);
}
