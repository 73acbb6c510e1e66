#include <doctest.h>

#include <sstream>

#include "a2nlf/errors.hpp"
#include "a2nlf/model_io.hpp"
#include "oracle.hpp"

using namespace a2nlf;

namespace {

ModelArtifact sample_model() {
  Rng rng(6);
  const HdiMatrix m = oracle::random_matrix(rng, 5, 4, 0.6);
  ModelArtifact model;
  model.state = init_state(5, 4, 3, 2);
  for (int it = 0; it < 5; ++it) train_iteration(model.state, m, HyperParams(0.3, 1.2));
  model.row_ids = {"u1", "u2", "u3", "u4", "u5"};
  model.col_ids = {"i1", "i2", "i3", "i4"};
  model.split_seed = 0xDEADBEEFULL;
  model.fold = 7;
  model.clip = ClipRange{1.0, 5.0};
  return model;
}

}  // namespace

TEST_CASE("model artifacts round-trip exactly") {
  const ModelArtifact model = sample_model();
  std::stringstream buf;
  write_model(buf, model);
  const ModelArtifact back = read_model(buf);
  CHECK(back.state == model.state);
  CHECK(back.row_ids == model.row_ids);
  CHECK(back.col_ids == model.col_ids);
  CHECK(back.split_seed == model.split_seed);
  CHECK(back.fold == 7);
  REQUIRE(back.clip.has_value());
  CHECK(back.clip->hi == 5.0);
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t i = 0; i < 4; ++i) CHECK(predict(back.state, u, i) == predict(model.state, u, i));
}

TEST_CASE("model artifact header is little-endian") {
  std::stringstream buf;
  write_model(buf, sample_model());
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 8) == "A2NLFMDL");
  CHECK(bytes[8] == 1);
  CHECK(bytes[9] == 0);
  CHECK(bytes[12] == 5);  // num_rows, low byte first
}

TEST_CASE("corrupt model artifacts are rejected") {
  std::stringstream buf;
  write_model(buf, sample_model());
  const std::string bytes = buf.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  CHECK_THROWS_AS(read_model(in1), DomainError);

  std::string bad_version = bytes;
  bad_version[8] = 2;
  std::istringstream in2(bad_version);
  CHECK_THROWS_WITH_AS(read_model(in2), doctest::Contains("version"), DomainError);

  std::istringstream in3(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_model(in3), DomainError);
}
