#include <gtest/gtest.h>

#include "test_support.hpp"

namespace slicefl {
namespace {

using testing::mid;

TEST(Spectra, MiddleFixtureHasOneFailingAndFivePassingTests) {
	const auto s = testing::middle_spectrum();
	EXPECT_EQ(s.size(), 12u);
	EXPECT_EQ(s.failing_count(), 1);
	EXPECT_EQ(s.passing_count(), 5);
	EXPECT_FALSE(s.contains(mid(2)));
	EXPECT_FALSE(s.contains(mid(14)));
	EXPECT_EQ(s.statements().front(), mid(3));
	EXPECT_EQ(s.statements().back(), mid(15));
}

TEST(Spectra, MinimalDocument) {
	const auto s = parse_spectrum_text("statements a.c:1\ntest only FAIL a.c:1\n");
	EXPECT_EQ(s.size(), 1u);
	EXPECT_EQ(s.failing_count(), 1);
	EXPECT_EQ(stats(s, {"a.c", 1}), (StatementStats{1, 0, 0, 0}));
}

TEST(Spectra, RejectsInvalidDocuments) {
	EXPECT_THROW(parse_spectrum_text("statements a.c:1\ntest t FAIL a.c:2\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:1\ntest t FAIL\ntest t PASS\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("test t FAIL a.c:1\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:1\ntest t SKIP a.c:1\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:1,a.c:1\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:0\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:x\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("statements a.c:1\nfrobnicate\n"), InputError);
	EXPECT_THROW(parse_spectrum_text("# nothing\n"), InputError);
}

TEST(Spectra, CommentsAndBlankLinesAreIgnored) {
	const auto s = parse_spectrum_text("# header\n\nstatements a.c:1, a.c:2 # two\n  test t PASS   # covers nothing\n");
	EXPECT_EQ(s.size(), 2u);
	ASSERT_EQ(s.tests().size(), 1u);
	EXPECT_TRUE(s.tests()[0].covered.empty());
}

TEST(Spectra, StatsForFixtureLines) {
	const auto s = testing::middle_spectrum();
	EXPECT_EQ(stats(s, mid(8)), (StatementStats{1, 1, 0, 4}));
	EXPECT_EQ(stats(s, mid(13)), (StatementStats{0, 0, 1, 5}));
	EXPECT_EQ(stats(s, mid(9)), (StatementStats{0, 2, 1, 3}));
	EXPECT_THROW(stats(s, mid(2)), InputError);
}

TEST(Spectra, ZeroTestsGiveZeroCounts) {
	const auto s = parse_spectrum_text("statements a.c:1,a.c:2\n");
	for (const auto &st : all_stats(s))
		EXPECT_EQ(st, (StatementStats{0, 0, 0, 0}));
	EXPECT_THROW(s.require_failing(), InputError);
}

TEST(Spectra, JsonMirror) {
	const auto s = parse_spectrum_json(R"({"statements": ["a.c:1", "a.c:2"],
		"tests": [{"id": "x", "verdict": "FAIL", "covered": ["a.c:2"]}]})");
	EXPECT_EQ(stats(s, {"a.c", 2}), (StatementStats{1, 0, 0, 0}));
	EXPECT_THROW(parse_spectrum_json(R"({"statements": ["a.c:1"], "tests": [{"id": "x", "verdict": "OK"}]})"),
	             InputError);
	EXPECT_THROW(parse_spectrum_json("{"), InputError);
}

TEST(SpectraProperty, CountsAgreeWithRawRows) {
	std::mt19937_64 rng(11);
	for (int iter = 0; iter < 300; ++iter) {
		const auto s = testing::random_spectrum(rng, 12, 10, false);
		const auto all = all_stats(s);
		long total_ef = 0;
		for (std::size_t i = 0; i < s.size(); ++i) {
			const auto &st = all[i];
			EXPECT_EQ(st.ef + st.nf, s.failing_count());
			EXPECT_EQ(st.ep + st.np, s.passing_count());
			EXPECT_EQ(st, stats(s, s.statements()[i]));
			total_ef += st.ef;
		}
		long incidences = 0;
		for (const auto &t : s.tests())
			if (t.verdict == Verdict::Fail)
				incidences += static_cast<long>(t.covered.size());
		EXPECT_EQ(total_ef, incidences);
	}
}

TEST(SpectraProperty, SerializationRoundTrips) {
	std::mt19937_64 rng(12);
	for (int iter = 0; iter < 100; ++iter) {
		const auto s = testing::random_spectrum(rng);
		for (const auto &back : {parse_spectrum_text(to_text(s)), parse_spectrum_json(to_json(s).dump())}) {
			EXPECT_EQ(back.statements(), s.statements());
			ASSERT_EQ(back.tests().size(), s.tests().size());
			for (std::size_t i = 0; i < s.tests().size(); ++i) {
				EXPECT_EQ(back.tests()[i].id, s.tests()[i].id);
				EXPECT_EQ(back.tests()[i].verdict, s.tests()[i].verdict);
				EXPECT_EQ(back.tests()[i].covered, s.tests()[i].covered);
			}
		}
	}
}

} // namespace
} // namespace slicefl
