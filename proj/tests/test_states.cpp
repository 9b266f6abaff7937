#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace qgeom {
namespace {

void expect_spectrum(const DensityMatrix& rho, std::vector<double> expected, double tol = 1e-12) {
  const auto v = eigenvalues(rho.matrix());
  ASSERT_EQ(v.size(), expected.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], expected[i], tol) << "index " << i;
}

void expect_diag(const DensityMatrix& rho, double d0, double d1, double tol = 1e-12) {
  EXPECT_LT(max_abs_diff(rho.matrix(), ComplexMatrix::diagonal({d0, d1})), tol);
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix::identity(3) * (1.0 / 3)), ValidationError);
  EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix::diagonal({0.6, 0.6})), ValidationError);
  EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix::diagonal({1.2, -0.2})), ValidationError);
  EXPECT_THROW(DensityMatrix::from_matrix(ComplexMatrix{{0.5, 0.1}, {0.2, 0.5}}), ValidationError);
  EXPECT_NO_THROW(DensityMatrix::from_matrix(ComplexMatrix::diagonal({1.0 + 1e-11, -1e-11})));
}

TEST(PureSchmidt, Examples) {
  const auto bell = pure_schmidt(1.0 / std::sqrt(2.0));
  EXPECT_LT(max_abs_diff(bell.matrix(), basis::phi_plus()), 1e-12);
  expect_spectrum(bell, {1, 0, 0, 0});

  expect_diag(reduce(pure_schmidt(0.6), Subsystem::First), 0.36, 0.64);

  for (double a : {0.05, 0.3, 0.6, 0.95}) EXPECT_NEAR(pure_schmidt(a).purity(), 1.0, 1e-12);
}

TEST(PureSchmidt, DomainErrors) {
  EXPECT_THROW(pure_schmidt(0.0), ValidationError);
  EXPECT_THROW(pure_schmidt(1.0), ValidationError);
  EXPECT_THROW(pure_schmidt(-0.1), ValidationError);
  EXPECT_NO_THROW(pure_schmidt(1.0, /*allow_product=*/true));
  EXPECT_NO_THROW(pure_schmidt(0.0, /*allow_product=*/true));
}

TEST(MemsRank4, Examples) {
  const auto w = mems_rank4_weights(0.2, 0.05);
  EXPECT_NEAR(w.p3, 0.15, 1e-15);
  EXPECT_NEAR(w.p1, 0.6, 1e-15);
  const auto rho = mems_rank4(0.2, 0.05);
  // Oracle: numeric partial trace against the closed form ((p1+p3)/2 + p2, (p1+p3)/2 + p4).
  expect_diag(reduce(rho, Subsystem::First), 0.575, 0.425);
  expect_spectrum(rho, {0.6, 0.2, 0.15, 0.05});

  expect_diag(reduce(mems_rank4(0.1, 0.1), Subsystem::First), 0.5, 0.5);
}

TEST(MemsRank4, ReportsViolatedConstraint) {
  auto message = [](double p2, double p4) {
    try {
      mems_rank4(p2, p4);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(0.05, 0.2).find("p2 >= p4"), std::string::npos);
  EXPECT_NE(message(0.2, 0.0).find("p4 > 0"), std::string::npos);
  EXPECT_NE(message(0.4, 0.2).find("p1 >= p2"), std::string::npos);
}

TEST(MemsRank4, SpectrumEqualsWeightsOnGrid) {
  for (const auto& p : family_grid(Family::MemsRank4, 20)) {
    const double p2 = param_value(p, "p2"), p4 = param_value(p, "p4");
    const auto w = mems_rank4_weights(p2, p4);
    expect_spectrum(mems_rank4(p2, p4), {w.p1, w.p2, w.p3, w.p4});
  }
}

TEST(MemsRank3, Examples) {
  const auto rho = mems_rank3(0.2);
  expect_spectrum(rho, {0.6, 0.2, 0.2, 0.0});
  // (p1 + p3)/2 + p2, (p1 + p3)/2 with p1 = 0.6, p3 = 0.2
  expect_diag(reduce(rho, Subsystem::First), 0.6, 0.4);
  EXPECT_THROW(mems_rank3(0.0), ValidationError);
  EXPECT_THROW(mems_rank3(0.4), ValidationError);
}

TEST(MemsRank2, Examples) {
  expect_spectrum(mems_rank2(0.75), {0.75, 0.25, 0.0, 0.0});
  EXPECT_THROW(mems_rank2(1.0), ValidationError);
  EXPECT_THROW(mems_rank2(0.0), ValidationError);
  for (double p1 : {0.1, 0.5, 0.75, 0.9}) {
    expect_diag(reduce(mems_rank2(p1), Subsystem::First), p1 / 2 + (1 - p1), p1 / 2);
  }
}

TEST(MjwMems, Examples) {
  EXPECT_LT(max_abs_diff(mjw_mems(1.0).matrix(), basis::phi_plus()), 1e-12);
  EXPECT_LT(max_abs_diff(mjw_mems(0.0).matrix(), ComplexMatrix::diagonal({1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3})), 1e-15);
  for (double r : {0.0, 0.25, 0.5, 0.9}) {
    const double s = std::sqrt(3 * r * r + 1);
    expect_diag(reduce(mjw_mems(r), Subsystem::First), (5 - s) / 6, (1 + s) / 6);
  }
  EXPECT_THROW(mjw_mems(1.1), ValidationError);
  EXPECT_THROW(mjw_mems(-0.1), ValidationError);
}

TEST(Nmems, Examples) {
  EXPECT_LT(max_abs_diff(nmems(1.0, 0.6).matrix(), pure_schmidt(0.6).matrix()), 1e-15);
  expect_spectrum(nmems(0.5, 1.0 / std::sqrt(2.0)), {0.5, 0.5, 0.0, 0.0});
  for (double p : {0.2, 0.7}) {
    const double a = 0.6, b2 = 0.64;
    expect_diag(reduce(nmems(p, a), Subsystem::First), p * a * a + (1 - p), p * b2);
  }
  EXPECT_THROW(nmems(0.0, 0.5), ValidationError);
  EXPECT_THROW(nmems(0.5, 1.0), ValidationError);
}

TEST(Reduce, SubsystemsOfIshizakaHiroshimaStatesHaveEqualSpectra) {
  auto check = [](const DensityMatrix& rho) {
    const auto a = eigenvalues(reduce(rho, Subsystem::First).matrix());
    const auto b = eigenvalues(reduce(rho, Subsystem::Second).matrix());
    EXPECT_NEAR(a[0], b[0], 1e-12);
    EXPECT_NEAR(a[1], b[1], 1e-12);
  };
  for (const auto& p : family_grid(Family::MemsRank4, 10)) check(generate(descriptor(Family::MemsRank4, p)));
  for (const auto& p : family_grid(Family::MemsRank3, 10)) check(generate(descriptor(Family::MemsRank3, p)));
  for (const auto& p : family_grid(Family::MemsRank2, 10)) check(generate(descriptor(Family::MemsRank2, p)));
}

TEST(Reduce, RejectsQubitInput) {
  EXPECT_THROW(reduce(maximally_mixed(2), Subsystem::First), ValidationError);
}

TEST(Generators, AllFamilyGridsProduceValidStates) {
  for (const auto& info : family_table()) {
    for (const auto& p : family_grid(info.family, 15)) {
      const auto rho = generate(descriptor(info.family, p));
      EXPECT_EQ(rho.dim(), 4u);
      EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_GE(eigenvalues(rho.matrix()).back(), -1e-10);
    }
  }
}

TEST(FamilyDescriptor, MissingParameterIsReported) {
  FamilyDescriptor d{Family::MemsRank4, {{"p2", 0.2}}};
  try {
    generate(d);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("--p4"), std::string::npos);
  }
  EXPECT_EQ(family_from_name("mjw"), Family::MjwMems);
  EXPECT_FALSE(family_from_name("werner").has_value());
}

TEST(StateIo, RoundTripIsExact) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto rho = testing::random_density(rng, t % 2 ? 4 : 2);
    const auto back = state_from_json(state_to_json(rho));
    ASSERT_EQ(max_abs_diff(rho.matrix(), back.matrix()), 0.0);
  }
}

TEST(StateIo, Format) {
  const std::string text = state_to_json(pure_schmidt(0.6));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["dims"], nlohmann::json::array({2, 2}));
  EXPECT_EQ(j["re"].size(), 4u);
  EXPECT_EQ(j["im"][0].size(), 4u);
  EXPECT_NE(text.find("0.35999999999999999"), std::string::npos);  // 17 significant digits
  EXPECT_EQ(nlohmann::json::parse(state_to_json(maximally_mixed(2)))["dims"], nlohmann::json::array({2}));
}

TEST(StateIo, ReaderValidates) {
  EXPECT_THROW(state_from_json(R"({"dims":[2],"re":[[0.7,0],[0,0.7]],"im":[[0,0],[0,0]]})"), ValidationError);
  EXPECT_THROW(state_from_json(R"({"dims":[2],"re":[[1,0]]})"), ValidationError);
  EXPECT_THROW(state_from_json("not json"), ValidationError);
  const auto rho = state_from_json(R"({"dims":[2],"re":[[0.5,0],[0,0.5]]})");
  EXPECT_EQ(rho.dim(), 2u);
}

}  // namespace
}  // namespace qgeom
