#ifndef SLICEFL_RANKING_HPP
#define SLICEFL_RANKING_HPP

#include <algorithm>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "formulas.hpp"

namespace slicefl {

enum class RankPolicy { Ordinal, ModifiedCompetition };

inline std::string_view to_string(RankPolicy p) {
	return p == RankPolicy::Ordinal ? "ordinal" : "modified-competition";
}

/**
 * Inspection order over a statement universe.
 *
 * `ranks[i]` belongs to `order[i]` and is the number of statements a developer
 * has to examine up to and including `order[i]`. Under ORDINAL this is simply
 * the position; tiered rankings let a whole tier share the optimistic rank.
 */
struct Ranking {
	std::vector<StatementId> order;
	std::vector<int> ranks;
	RankPolicy policy = RankPolicy::Ordinal;

	std::size_t size() const { return order.size(); }

	/// Rank of `s`, or 0 if `s` is not ranked.
	int rank_of(const StatementId &s) const {
		for (std::size_t i = 0; i < order.size(); ++i)
			if (order[i] == s)
				return ranks[i];
		return 0;
	}

	friend bool operator==(const Ranking &, const Ranking &) = default;
};

/**
 * Assembles tiered rankings. Each statement's rank is one more than the
 * number of charged statements placed strictly before its tier.
 */
class RankingBuilder {
public:
	/// A statement inspected on its own.
	void add_sequential(const StatementId &s) {
		m_ranking.order.push_back(s);
		m_ranking.ranks.push_back(m_charged + 1);
		++m_charged;
	}

	/// Statements sharing one rank; ordered by line within the tier.
	void add_tier(std::vector<StatementId> members) {
		std::sort(members.begin(), members.end());
		const int r = m_charged + 1;
		for (auto &m : members) {
			m_ranking.order.push_back(std::move(m));
			m_ranking.ranks.push_back(r);
		}
		m_charged += static_cast<int>(members.size());
	}

	/// A statement that is listed but costs nothing to inspect (the failure site).
	void add_free(const StatementId &s) {
		m_ranking.order.push_back(s);
		m_ranking.ranks.push_back(m_charged + 1);
	}

	std::size_t placed() const { return m_ranking.order.size(); }

	Ranking finish(RankPolicy policy) && {
		m_ranking.policy = policy;
		return std::move(m_ranking);
	}

private:
	Ranking m_ranking;
	int m_charged = 0;
};

/// Descending by score, ties by ascending line number. Works for any totally ordered key.
template <typename Key>
Ranking ordinal_ranking(std::span<const StatementId> statements, std::span<const Key> scores) {
	if (statements.size() != scores.size())
		throw std::invalid_argument("ordinal_ranking: statements and scores differ in size");
	std::vector<std::size_t> idx(statements.size());
	std::iota(idx.begin(), idx.end(), std::size_t{0});
	std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
		if (scores[a] > scores[b])
			return true;
		if (scores[b] > scores[a])
			return false;
		return statements[a] < statements[b];
	});
	RankingBuilder builder;
	for (auto i : idx)
		builder.add_sequential(statements[i]);
	return std::move(builder).finish(RankPolicy::Ordinal);
}

inline Ranking rank(const SuspiciousnessVector &v) {
	return ordinal_ranking<Score>(v.statements, v.scores);
}

inline std::vector<StatementId> top_n(const Ranking &ranking, std::size_t n) {
	const auto k = std::min(n, ranking.order.size());
	return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k)};
}

} // namespace slicefl

#endif // SLICEFL_RANKING_HPP
