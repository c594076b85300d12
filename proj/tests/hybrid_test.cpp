#include <gtest/gtest.h>

#include "test_support.hpp"

namespace slicefl {
namespace {

using testing::mid;

TEST(Hybrid, MiddleWithTwoTarantulaStatements) {
	const auto spectrum = testing::middle_spectrum();
	const auto r = hybrid_ranking({2, Formula::Tarantula}, spectrum, testing::middle_graph(), testing::middle_request());
	EXPECT_EQ(top_n(r, 2), (std::vector<StatementId>{mid(8), mid(7)}));
	EXPECT_EQ(r.rank_of(mid(8)), 1);
	EXPECT_TRUE(testing::is_permutation_of(r, spectrum.statements()));
	// Phase two: criterion (free), line 3 at distance 1 (8 already reported), 5, 4, then the rest.
	EXPECT_EQ(r.order[2], mid(15));
	EXPECT_EQ(r.rank_of(mid(15)), 3);
	EXPECT_EQ(r.rank_of(mid(3)), 3);
	EXPECT_EQ(r.rank_of(mid(5)), 4);
	EXPECT_EQ(r.rank_of(mid(4)), 5);
}

TEST(Hybrid, Degenerates) {
	const auto spectrum = testing::middle_spectrum();
	const auto g = testing::middle_graph();
	const auto req = testing::middle_request();
	const auto slice = approx_dynamic_slice(g, req);
	EXPECT_EQ(hybrid_ranking({0, Formula::Tarantula}, spectrum, g, req), slice_ranking(slice, spectrum.statements()));
	EXPECT_EQ(hybrid_ranking({12, Formula::Ochiai}, spectrum, g, req), rank(compute_scores(Formula::Ochiai, spectrum)));
	EXPECT_THROW(hybrid_ranking({2, Formula::M9185}, spectrum, g, req), FormulaUnavailable);
}

TEST(HybridProperty, PhasesNeverOverlapAndPrefixIsTopN) {
	std::mt19937_64 rng(51);
	for (int iter = 0; iter < 300; ++iter) {
		const auto s = testing::random_spectrum(rng);
		const auto g = testing::random_graph(rng, s.statements());
		const auto &criterion = s.statements()[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
		SliceRequest req{criterion, {criterion}, {}};
		std::bernoulli_distribution coin(0.5);
		for (const auto &n : s.statements())
			if (coin(rng))
				req.executed.insert(n);
		const auto statistical = rank(compute_scores(Formula::Kulczynski2, s));
		const auto slice = approx_dynamic_slice(g, req);
		std::optional<Ranking> previous;
		for (std::size_t n = 0; n <= s.size() + 1; ++n) {
			const auto r = hybrid_ranking(n, statistical, slice, s.statements());
			ASSERT_TRUE(testing::is_permutation_of(r, s.statements()));
			EXPECT_EQ(top_n(r, n), top_n(statistical, n));
			if (previous) {
				// Growing n only moves the boundary: everything after the new phase-one item keeps its relative order.
				const auto moved = statistical.order[std::min(n, s.size()) - 1];
				std::vector<StatementId> before, after;
				for (std::size_t i = std::min(n - 1, s.size()); i < previous->size(); ++i)
					if (previous->order[i] != moved)
						before.push_back(previous->order[i]);
				for (std::size_t i = std::min(n, s.size()); i < r.size(); ++i)
					after.push_back(r.order[i]);
				EXPECT_EQ(before, after);
			}
			previous = r;
		}
	}
}

} // namespace
} // namespace slicefl
