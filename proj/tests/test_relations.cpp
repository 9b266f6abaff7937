#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "test_support.hpp"

namespace qgeom {
namespace {

const Relation& rel(const std::vector<Relation>& all, const std::string& id) {
  for (const auto& r : all)
    if (r.id == id) return r;
  throw std::runtime_error("missing " + id);
}

TEST(Registry, HasSevenRelations) {
  const auto all = registry();
  ASSERT_EQ(all.size(), 7u);
  std::set<std::string> ids;
  for (const auto& r : all) ids.insert(r.id);
  EXPECT_EQ(ids, (std::set<std::string>{"R1", "R2", "R3", "R4", "R5", "R6", "R7"}));
  EXPECT_TRUE(rel(all, "R6").corrected.has_value());
  EXPECT_TRUE(rel(all, "R7").corrected.has_value());
  EXPECT_FALSE(rel(all, "R3").corrected.has_value());
}

TEST(Registry, SpotValues) {
  const auto all = registry();
  const Params pure{{"alpha", 0.6}};
  const auto e = evaluate_point(Family::PureSchmidt, pure, Generator::SigmaX);
  EXPECT_NEAR(e.k, 0.3136, 1e-14);
  for (const auto& f : rel(all, "R1").published) EXPECT_NEAR(f.eval(pure, e), 0.3136, 1e-14) << f.text;

  // Rank 2: C = p1, so sqrt K = 2(1 - p1).
  const Params r2{{"p1", 0.75}};
  const auto e2 = evaluate_point(Family::MemsRank2, r2, Generator::SigmaX);
  EXPECT_NEAR(e2.sqrt_k, 0.5, 1e-14);
  EXPECT_NEAR(rel(all, "R5").published.front().eval(r2, e2), 0.5, 1e-14);
}

TEST(Audit, RankFourSpotPoint) {
  const Params p{{"p2", 0.2}, {"p4", 0.05}};
  const auto e = evaluate_point(Family::MemsRank4, p, Generator::SigmaX);
  EXPECT_NEAR(e.concurrence, 0.25, 1e-13);
  EXPECT_NEAR(e.sqrt_k, 0.3, 1e-14);
  EXPECT_NEAR(rel(registry(), "R3").published.front().eval(p, e), 0.3, 1e-13);
}

TEST(Audit, PublishedIdentitiesConfirmed) {
  for (const auto& r : registry()) {
    if (r.id == "R6" || r.id == "R7") continue;
    const auto res = audit(r);
    EXPECT_EQ(res.verdict, Verdict::Confirmed) << r.id;
    EXPECT_LT(res.max_residual_paper, 1e-10) << r.id;
    EXPECT_TRUE(res.skipped.empty()) << r.id;
    EXPECT_GE(res.rows.size(), 50u) << r.id;
  }
  EXPECT_EQ(audit(rel(registry(), "R3")).rows.size(), 2500u);
}

TEST(Audit, SigmaXAndSigmaYPureRelationsAgreePointwise) {
  const auto all = registry();
  const auto a = audit(rel(all, "R1")), b = audit(rel(all, "R2"));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_NEAR(a.rows[i].lhs, b.rows[i].lhs, 1e-12);
}

TEST(Audit, MjwRelationDeviatesAndCorrectedFormHolds) {
  const auto res = audit(rel(registry(), "R6"));
  EXPECT_EQ(res.verdict, Verdict::Deviation);
  ASSERT_FALSE(res.rows.empty());
  const auto& first = res.rows.front();  // r = 0
  EXPECT_EQ(param_value(first.params, "r"), 0.0);
  EXPECT_NEAR(first.lhs, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(first.eval.negativity, 0.0, 1e-14);
  EXPECT_NEAR(first.rhs_paper, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(*first.rhs_corrected, 2.0 / 3.0, 1e-14);
  ASSERT_TRUE(res.max_residual_corrected.has_value());
  EXPECT_LT(*res.max_residual_corrected, 1e-10);
}

TEST(Audit, MjwAgainstClosedFormNegativity) {
  // Independent route: N from the 2x2 block [[y, r/2], [r/2, 0]] with y = (2 - s)/3.
  for (int k = 0; k < 100; ++k) {
    const double r = 0.99 * k / 99;
    const double s = std::sqrt(3 * r * r + 1), y = (2 - s) / 3;
    const double n_block = (std::sqrt(y * y + r * r) - y) / 2;
    const auto e = evaluate_point(Family::MjwMems, {{"r", r}}, Generator::SigmaX);
    EXPECT_NEAR(e.negativity, n_block, 1e-12);
    EXPECT_NEAR(e.sqrt_k, 2 * (2 - s) / 3, 1e-12);
  }
}

TEST(Audit, NmemsRelationDeviatesAndCorrectedFormHolds) {
  const auto res = audit(rel(registry(), "R7"));
  EXPECT_EQ(res.verdict, Verdict::Deviation);
  EXPECT_GT(res.max_residual_paper, 1.0);
  ASSERT_TRUE(res.max_residual_corrected.has_value());
  EXPECT_LT(*res.max_residual_corrected, 1e-10);
  // p = 0.9, alpha = 2/3 gives 2 p beta^2 = 1: maximally mixed, excluded.
  ASSERT_EQ(res.excluded.size(), 1u);
  EXPECT_NEAR(param_value(res.excluded.front(), "p"), 0.9, 1e-15);
  EXPECT_NEAR(param_value(res.excluded.front(), "alpha"), 2.0 / 3.0, 1e-15);
  for (const auto& row : res.rows) {
    const double a = param_value(row.params, "alpha"), p = param_value(row.params, "p");
    ASSERT_NEAR(row.eval.concurrence, 2 * p * a * std::sqrt(1 - a * a), 1e-10);
  }
}

TEST(Audit, IsDeterministic) {
  const auto r = rel(registry(), "R7");
  std::ostringstream a, b;
  write_audit_csv(a, {audit(r)});
  write_audit_csv(b, {audit(r)});
  EXPECT_EQ(a.str(), b.str());
}

TEST(Audit, SecondSubsystemGivesSameVerdictsForIshizakaHiroshimaStates) {
  AuditOptions opt;
  opt.grid_density = 20;
  opt.eval.subsystem = Subsystem::Second;
  for (const char* id : {"R3", "R4", "R5"}) {
    EXPECT_EQ(audit(rel(registry(), id), opt).verdict, Verdict::Confirmed) << id;
  }
}

TEST(AuditCsv, HeaderAndRows) {
  const auto all = registry();
  AuditOptions opt;
  opt.grid_density = 3;
  std::ostringstream os;
  write_audit_csv(os, {audit(rel(all, "R1"), opt), audit(rel(all, "R6"), opt)});
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "relation_id,alpha,r,lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8) << line;
  }
  EXPECT_EQ(rows, 6);
  EXPECT_NE(os.str().find("R6,,0,0.66666666666666663,1.3333333333333333,"), std::string::npos) << os.str();
}

TEST(ExpectedStatus, Parse) {
  const auto m = parse_expected_status("relation_id,status\nR1,CONFIRMED\r\nR6,DEVIATION\n\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at("R1"), "CONFIRMED");
  EXPECT_EQ(m.at("R6"), "DEVIATION");
  EXPECT_THROW(parse_expected_status("R1 CONFIRMED\n"), ValidationError);
}

TEST(Sweep, PureFamilyMatchesIdentity) {
  const auto t = sweep(Family::PureSchmidt, 19);
  ASSERT_EQ(t.rows.size(), 19u);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r.k_sx, 4 * (1 - r.concurrence * r.concurrence), 1e-10);
    EXPECT_NEAR(r.k_sx, r.k_sy, 1e-12);
  }
}

TEST(Sweep, MjwAtUnitCoherenceHasZeroMetric) {
  const auto t = sweep(Family::MjwMems, 11);
  const auto& last = t.rows.back();
  EXPECT_EQ(param_value(last.params, "r"), 1.0);
  EXPECT_NEAR(last.k_sx, 0.0, 1e-14);
  EXPECT_NEAR(last.negativity, 0.5, 1e-12);
}

TEST(Sweep, RankTwoColumnsAgree) {
  for (const auto& r : sweep(Family::MemsRank2, 50).rows) EXPECT_NEAR(r.sqrt_k_sx, 2 * (1 - r.concurrence), 1e-10);
}

TEST(Sweep, RowsAreLexicographic) {
  const auto t = sweep(Family::Nmems, 7);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& a = t.rows[i - 1].params;
    const auto& b = t.rows[i].params;
    EXPECT_TRUE(a[0].second < b[0].second || (a[0].second == b[0].second && a[1].second < b[1].second));
  }
  std::ostringstream os;
  write_sweep_csv(os, t);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "p,alpha,negativity,concurrence,K_sx,K_sy,sqrtK_sx");
}

TEST(Sweep, BellFamilyHasOneRow) {
  const auto t = sweep(Family::Bell, 10);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(t.rows[0].negativity, 0.5, 1e-12);
  EXPECT_NEAR(t.rows[0].concurrence, 1.0, 1e-12);
  EXPECT_NEAR(t.rows[0].k_sx, 0.0, 1e-12);
}

}  // namespace
}  // namespace qgeom
