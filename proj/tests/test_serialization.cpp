#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace wigner;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wigner_test_" + name)).string();
}

void expect_bitwise_equal(const Matrix& a, const Matrix& b) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_TRUE((a.array() == b.array()).all());
}

}  // namespace

TEST(MatrixText, IdentityRoundTrip) {
  const std::string path = temp_path("id2.json");
  save_matrix(path, identity(2));
  expect_bitwise_equal(load_matrix(path), identity(2));
  std::filesystem::remove(path);
}

TEST(MatrixText, RandomRoundTripIsLossless) {
  SeededRandomSource rng(1);
  for (int t = 0; t < 10; ++t) {
    Matrix a = gaussian_matrix(8, 8, rng);
    a(0, 0) = Complex(1e-300, -3.0e300);
    a(1, 2) = Complex(0.1, 1.0 / 3.0);
    expect_bitwise_equal(matrix_from_text(matrix_to_text(a)), a);
  }
}

TEST(MatrixText, HeaderAndLayout) {
  const std::string text = matrix_to_text(identity(2));
  const Json j = Json::parse(text);
  EXPECT_EQ(j.at("format"), "wigner-matrix");
  EXPECT_EQ(j.at("version"), 1);
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("data").size(), 2u);
  EXPECT_EQ(j.at("data")[0][1][0].get<double>(), 0.0);
}

TEST(MatrixText, TruncatedFileNamesElement) {
  SeededRandomSource rng(2);
  const std::string text = matrix_to_text(gaussian_matrix(3, 3, rng));
  const std::string truncated = text.substr(0, text.size() / 2);
  try {
    matrix_from_text(truncated, "cut.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    const std::string what = e.what();
    EXPECT_NE(what.find("cut.json:"), std::string::npos) << what;
    EXPECT_NE(what.find("data["), std::string::npos) << what;
  }
}

TEST(MatrixText, MalformedEntriesAreParseFailures) {
  const std::string bad_entry =
      R"({"format":"wigner-matrix","version":1,"n":2,"cols":2,"data":[[[1,0],[0,0]],[[0,0],[1]]]})";
  try {
    matrix_from_text(bad_entry);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    EXPECT_NE(std::string(e.what()).find("data[1][1]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(matrix_from_text(R"({"format":"other","version":1})"), Error);
}

TEST(MatrixText, DimensionMismatchOnLoad) {
  const std::string path = temp_path("id3.json");
  save_matrix(path, identity(3));
  try {
    load_matrix(path, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  std::filesystem::remove(path);
}

TEST(MatrixText, MissingFileIsIoFailure) {
  try {
    load_matrix(temp_path("does_not_exist.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}

TEST(MatrixText, ProjectionRoundTrip) {
  SeededRandomSource rng(3);
  const Projection p = sample_projection(6, 2, rng);
  const Projection back = Projection::from_matrix(matrix_from_text(matrix_to_text(p.matrix())));
  expect_bitwise_equal(back.matrix(), p.matrix());
  EXPECT_EQ(back.rank(), 2);
}

TEST(SpecText, ConstructiveKindsRoundTrip) {
  SeededRandomSource rng(4);
  const GrassmannIndex g(AlgebraContext(4), 2);
  std::vector<SymmetryMapSpec> specs{make_unitary_map(g, haar_unitary(4, rng)),
                                     make_antiunitary_map(g, haar_unitary(4, rng)),
                                     make_jordan_block_map(g, 9, rng), make_complement_map(g)};
  specs.push_back(perturb_map(specs[0], 0.1, rng));
  specs.push_back(make_complement_conjugated(std::make_shared<const SymmetryMapSpec>(specs[1])));
  for (const auto& spec : specs) {
    const SymmetryMapSpec back = spec_from_text(spec_to_text(spec));
    EXPECT_EQ(back.kind_name(), spec.kind_name());
    EXPECT_EQ(back.source().n(), spec.source().n());
    EXPECT_EQ(back.source().k(), spec.source().k());
    EXPECT_EQ(back.target_ctx(), spec.target_ctx());
    for (int t = 0; t < 10; ++t) {
      const Projection p = sample_projection(spec.source(), rng);
      expect_bitwise_equal(apply_map(back, p).matrix(), apply_map(spec, p).matrix());
    }
  }
}

TEST(SpecText, OracleTableRoundTrip) {
  SeededRandomSource rng(5);
  const GrassmannIndex g(AlgebraContext(3), 1);
  std::vector<Projection> inputs;
  for (int t = 0; t < 5; ++t) inputs.push_back(sample_projection(g, rng));
  const auto table = tabulate(make_unitary_map(g, haar_unitary(3, rng)), inputs);
  const std::string path = temp_path("table.json");
  save_spec(path, table);
  const SymmetryMapSpec back = load_spec(path);
  for (const auto& p : inputs) expect_bitwise_equal(apply_map(back, p).matrix(), apply_map(table, p).matrix());
  std::filesystem::remove(path);
}

TEST(SpecText, UnknownKindIsParseFailure) {
  const std::string text = R"({"format":"wigner-spec","version":1,"kind":"mystery","n":3,"k":1,"target_n":3})";
  try {
    spec_from_text(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    EXPECT_NE(std::string(e.what()).find("mystery"), std::string::npos);
  }
}
