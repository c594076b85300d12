#ifndef SLICEFL_HYBRID_HPP
#define SLICEFL_HYBRID_HPP

#include <set>

#include "formulas.hpp"
#include "ranking.hpp"
#include "slicing.hpp"
#include "spectra.hpp"

namespace slicefl {

struct HybridConfig {
	std::size_t n = 2;
	Formula formula = Formula::Kulczynski2;
};

/**
 * Top-n statements of a statistical ranking, then the slice ranking with
 * those statements removed, then whatever is left in line order.
 */
inline Ranking hybrid_ranking(std::size_t n, const Ranking &statistical, const Slice &slice,
                              std::span<const StatementId> universe) {
	RankingBuilder builder;
	std::set<StatementId> reported;
	for (const auto &s : top_n(statistical, n)) {
		builder.add_sequential(s);
		reported.insert(s);
	}
	if (builder.placed() == universe.size())
		return std::move(builder).finish(RankPolicy::Ordinal);
	detail::append_slice_phase(builder, slice, universe, reported);
	return std::move(builder).finish(RankPolicy::ModifiedCompetition);
}

inline Ranking hybrid_ranking(const HybridConfig &cfg, const CoverageSpectrum &spectrum, const DependenceGraph &g,
                              const SliceRequest &req) {
	const auto statistical = rank(compute_scores(cfg.formula, spectrum));
	const auto slice = approx_dynamic_slice(g, req);
	return hybrid_ranking(cfg.n, statistical, slice, spectrum.statements());
}

} // namespace slicefl

#endif // SLICEFL_HYBRID_HPP
