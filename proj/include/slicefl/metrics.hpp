#ifndef SLICEFL_METRICS_HPP
#define SLICEFL_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <vector>

#include "ranking.hpp"

namespace slicefl {

/// score = 1 - inspected / universe.
struct EffectivenessScore {
	double value = 0.0;
	int inspected = 0;
	int universe = 0;
};

namespace detail {

inline int best_rank(const Ranking &ranking, const std::set<StatementId> &faulty) {
	int best = 0;
	for (std::size_t i = 0; i < ranking.order.size(); ++i)
		if (faulty.count(ranking.order[i]) && (best == 0 || ranking.ranks[i] < best))
			best = ranking.ranks[i];
	return best;
}

} // namespace detail

inline EffectivenessScore score_from_ranking(const Ranking &ranking, const std::set<StatementId> &faulty,
                                             std::span<const StatementId> universe) {
	if (universe.empty())
		throw InputError("empty statement universe");
	const int inspected = detail::best_rank(ranking, faulty);
	if (inspected == 0)
		throw InputError("no faulty statement is part of the ranked universe");
	const int size = static_cast<int>(universe.size());
	return {1.0 - static_cast<double>(inspected) / size, inspected, size};
}

struct ExpenseScore {
	double expense = 0.0; ///< percent of the universe examined
	double score_mult = 0.0;
	int inspected = 0;
	int universe = 0;
};

/// Cost to reach the first faulty statement of whichever fault is localized first.
inline ExpenseScore expense_and_mult_score(const Ranking &ranking, const std::vector<std::set<StatementId>> &faults,
                                           std::span<const StatementId> universe) {
	std::set<StatementId> all;
	for (const auto &g : faults)
		all.insert(g.begin(), g.end());
	const auto s = score_from_ranking(ranking, all, universe);
	const double expense = static_cast<double>(s.inspected) / s.universe * 100.0;
	return {expense, 1.0 - expense / 100.0, s.inspected, s.universe};
}

/// Odds ratio with a pseudo-count `rho` for a successes of A and b successes of B.
inline double odds_ratio(int a, int b, double rho = 0.5) {
	if (a < 0 || b < 0)
		throw std::invalid_argument("odds_ratio: negative success count");
	if (!(rho > 0.0))
		throw std::invalid_argument("odds_ratio: rho must be positive");
	const double n = a + b;
	return ((a + rho) / (n + rho - a)) / ((b + rho) / (n + rho - b));
}

struct MannWhitney {
	double u = 0.0;       ///< U statistic of the first sample
	double p_value = 1.0; ///< two-sided, normal approximation
};

/**
 * Mann-Whitney U via mid-ranks. The p-value uses the normal approximation
 * with tie-corrected variance and a 0.5 continuity correction.
 */
inline MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b) {
	if (a.empty() || b.empty())
		throw InputError("mann_whitney_u: both samples must be non-empty");
	const std::size_t na = a.size(), nb = b.size(), total = na + nb;
	std::vector<std::pair<double, bool>> pooled;
	pooled.reserve(total);
	for (double x : a)
		pooled.emplace_back(x, true);
	for (double x : b)
		pooled.emplace_back(x, false);
	std::sort(pooled.begin(), pooled.end(), [](const auto &l, const auto &r) { return l.first < r.first; });

	double rank_sum_a = 0.0, tie_term = 0.0;
	for (std::size_t i = 0; i < total;) {
		std::size_t j = i;
		while (j < total && pooled[j].first == pooled[i].first)
			++j;
		const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
		const double t = static_cast<double>(j - i);
		tie_term += t * t * t - t;
		for (std::size_t k = i; k < j; ++k)
			if (pooled[k].second)
				rank_sum_a += mid;
		i = j;
	}
	const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), n = static_cast<double>(total);
	const double u = rank_sum_a - dna * (dna + 1.0) / 2.0;
	const double mean = dna * dnb / 2.0;
	double var = dna * dnb / 12.0 * (n + 1.0);
	if (total > 1)
		var -= dna * dnb / 12.0 * tie_term / (n * (n - 1.0));
	if (var <= 0.0)
		return {u, 1.0};
	const double z = std::max(0.0, std::fabs(u - mean) - 0.5) / std::sqrt(var);
	return {u, std::min(1.0, std::erfc(z / std::sqrt(2.0)))};
}

struct CurvePoint {
	int threshold = 0;
	double percent = 0.0;

	friend bool operator==(const CurvePoint &, const CurvePoint &) = default;
};

/// Percentage of bugs localized within each distinct inspected-count.
inline std::vector<CurvePoint> cumulative_frequency(std::span<const int> inspected) {
	if (inspected.empty())
		throw InputError("cumulative_frequency: no bugs");
	std::map<int, int> freq;
	for (int c : inspected) {
		if (c < 1)
			throw InputError("cumulative_frequency: inspected counts must be >= 1");
		++freq[c];
	}
	std::vector<CurvePoint> out;
	int running = 0;
	for (const auto &[count, f] : freq) {
		running += f;
		out.push_back({count, 100.0 * running / static_cast<double>(inspected.size())});
	}
	return out;
}

/// Round half to even at `digits` decimals.
inline double round_half_even(double x, int digits = 2) {
	const double scale = std::pow(10.0, digits);
	const double scaled = x * scale;
	double r = std::floor(scaled);
	const double diff = scaled - r;
	if (diff > 0.5 || (diff == 0.5 && std::fmod(r, 2.0) != 0.0))
		r += 1.0;
	return r / scale;
}

/// Head-to-head comparison of two techniques over the same bugs.
struct ComparisonStats {
	int wins_a = 0;
	int wins_b = 0;
	int ties = 0;
	double odds_ratio = 1.0;
	double u = 0.0;
	double p_value = 1.0;
};

/// A "win" is a strictly smaller inspected count; U is computed on the score samples.
inline ComparisonStats compare_techniques(std::span<const int> inspected_a, std::span<const int> inspected_b,
                                          std::span<const double> score_a, std::span<const double> score_b,
                                          double rho = 0.5) {
	if (inspected_a.size() != inspected_b.size())
		throw InputError("compare: techniques cover different bug sets");
	ComparisonStats out;
	for (std::size_t i = 0; i < inspected_a.size(); ++i) {
		if (inspected_a[i] < inspected_b[i])
			++out.wins_a;
		else if (inspected_b[i] < inspected_a[i])
			++out.wins_b;
		else
			++out.ties;
	}
	out.odds_ratio = odds_ratio(out.wins_a, out.wins_b, rho);
	const auto mw = mann_whitney_u(score_a, score_b);
	out.u = mw.u;
	out.p_value = mw.p_value;
	return out;
}

} // namespace slicefl

#endif // SLICEFL_METRICS_HPP
