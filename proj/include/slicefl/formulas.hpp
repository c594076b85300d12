#ifndef SLICEFL_FORMULAS_HPP
#define SLICEFL_FORMULAS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectra.hpp"

namespace slicefl {

enum class Formula {
	Tarantula,
	Ochiai,
	Jaccard,
	Naish1,
	Naish2,
	RusselRao,
	Binary,
	Wong1,
	DStar2,
	DStar3,
	GP02,
	GP03,
	GP13,
	GP19,
	PattSim2,
	LexOchiai,
	M9185,
	Kulczynski2,
};

enum class Family { Popular, HumanGenerated, GpEvolved, SingleBugOptimal };

inline constexpr std::array<Formula, 18> kAllFormulas = {
	Formula::Tarantula, Formula::Ochiai, Formula::Jaccard,  Formula::Naish1,    Formula::Naish2,
	Formula::RusselRao, Formula::Binary, Formula::Wong1,    Formula::DStar2,    Formula::DStar3,
	Formula::GP02,      Formula::GP03,   Formula::GP13,     Formula::GP19,      Formula::PattSim2,
	Formula::LexOchiai, Formula::M9185,  Formula::Kulczynski2,
};

inline std::string_view name(Formula f) {
	switch (f) {
	case Formula::Tarantula: return "Tarantula";
	case Formula::Ochiai: return "Ochiai";
	case Formula::Jaccard: return "Jaccard";
	case Formula::Naish1: return "Naish1";
	case Formula::Naish2: return "Naish2";
	case Formula::RusselRao: return "RusselRao";
	case Formula::Binary: return "Binary";
	case Formula::Wong1: return "Wong1";
	case Formula::DStar2: return "DStar2";
	case Formula::DStar3: return "DStar3";
	case Formula::GP02: return "GP02";
	case Formula::GP03: return "GP03";
	case Formula::GP13: return "GP13";
	case Formula::GP19: return "GP19";
	case Formula::PattSim2: return "PattSim2";
	case Formula::LexOchiai: return "LexOchiai";
	case Formula::M9185: return "M9185";
	case Formula::Kulczynski2: return "Kulczynski2";
	}
	return "?";
}

inline Family family(Formula f) {
	switch (f) {
	case Formula::Tarantula:
	case Formula::Ochiai:
	case Formula::Jaccard:
		return Family::Popular;
	case Formula::GP02:
	case Formula::GP03:
	case Formula::GP13:
	case Formula::GP19:
		return Family::GpEvolved;
	case Formula::PattSim2:
	case Formula::LexOchiai:
	case Formula::M9185:
	case Formula::Kulczynski2:
		return Family::SingleBugOptimal;
	default:
		return Family::HumanGenerated;
	}
}

inline std::string_view to_string(Family f) {
	switch (f) {
	case Family::Popular: return "popular";
	case Family::HumanGenerated: return "human-generated";
	case Family::GpEvolved: return "gp-evolved";
	case Family::SingleBugOptimal: return "single-bug-optimal";
	}
	return "?";
}

/// PattSim2 and M9185 are registered but have no definition to evaluate.
inline bool available(Formula f) { return f != Formula::PattSim2 && f != Formula::M9185; }

/// Case-insensitive lookup; '_' and '-' are ignored ("russel_rao", "dstar-2").
inline std::optional<Formula> formula_from_name(std::string_view text) {
	auto fold = [](std::string_view s) {
		std::string out;
		for (unsigned char c : s)
			if (c != '_' && c != '-' && c != ' ')
				out += static_cast<char>(std::tolower(c));
		return out;
	};
	const auto key = fold(text);
	for (auto f : kAllFormulas)
		if (fold(name(f)) == key)
			return f;
	if (key == "patternsimilarity" || key == "pattsim")
		return Formula::PattSim2;
	if (key == "russellrao")
		return Formula::RusselRao;
	return std::nullopt;
}

/// Total failing (F) and passing (Pp) test counts of a spectrum.
struct Totals {
	int failing = 0;
	int passing = 0;
};

/**
 * A suspiciousness value. Scalar formulas use only `value`; LexOchiai stores
 * the pair (ef, Ochiai) and compares lexicographically.
 */
struct Score {
	double value = 0.0;
	double secondary = 0.0;
	bool pair = false;

	friend bool operator==(const Score &a, const Score &b) {
		return a.value == b.value && a.secondary == b.secondary;
	}
	friend std::partial_ordering operator<=>(const Score &a, const Score &b) {
		if (auto c = a.value <=> b.value; c != 0)
			return c;
		return a.secondary <=> b.secondary;
	}
};

inline std::string format_score(const Score &s) {
	char buf[96];
	if (s.pair)
		std::snprintf(buf, sizeof buf, "(%.0f,%.6f)", s.value, s.secondary);
	else
		std::snprintf(buf, sizeof buf, "%.6f", s.value);
	return buf;
}

namespace detail {

inline constexpr double kDivisionEpsilon = 1e-9;

// 0/0 -> 0; x/0 -> x/eps so "perfect" statements stay finite and on top.
inline double guarded_div(double num, double den) {
	if (den != 0.0)
		return num / den;
	if (num == 0.0)
		return 0.0;
	return num / (den + kDivisionEpsilon);
}

inline double ochiai(double ef, double ep, double failing) {
	return guarded_div(ef, std::sqrt(failing * (ef + ep)));
}

} // namespace detail

inline Score suspiciousness(Formula f, const StatementStats &st, Totals totals) {
	using detail::guarded_div;
	const double ef = st.ef, ep = st.ep, nf = st.nf, np = st.np;
	const double F = totals.failing, Pp = totals.passing;
	switch (f) {
	case Formula::Tarantula: {
		// One division over integer-valued terms keeps equal ratios bit-identical.
		if (totals.failing > 0 && totals.passing > 0)
			return {guarded_div(ef * Pp, ef * Pp + ep * F)};
		const double fr = guarded_div(ef, F);
		const double pr = guarded_div(ep, Pp);
		return {guarded_div(fr, fr + pr)};
	}
	case Formula::Ochiai: return {detail::ochiai(ef, ep, F)};
	case Formula::Jaccard: return {guarded_div(ef, F + ep)};
	case Formula::Naish1: return {st.nf == 0 ? np : -1.0};
	case Formula::Naish2: return {ef - guarded_div(ep, ep + np + 1)};
	case Formula::RusselRao: return {guarded_div(ef, ef + nf + ep + np)};
	case Formula::Binary: return {st.nf == 0 ? 1.0 : 0.0};
	case Formula::Wong1: return {ef};
	case Formula::DStar2: return {guarded_div(ef * ef, ep + nf)};
	case Formula::DStar3: return {guarded_div(ef * ef * ef, ep + nf)};
	case Formula::GP02: return {2.0 * (ef + std::sqrt(np)) + std::sqrt(ep)};
	case Formula::GP03: return {std::sqrt(std::fabs(ef * ef - std::sqrt(ep)))};
	case Formula::GP13: return {ef * (1.0 + guarded_div(1.0, 2.0 * ep + ef))};
	case Formula::GP19: return {ef * std::sqrt(std::fabs(ep - ef + nf - np))};
	case Formula::LexOchiai: return {ef, detail::ochiai(ef, ep, F), true};
	case Formula::Kulczynski2:
		// 1/2 (ef/(ef+nf) + ef/(ef+ep)) over a common denominator; both are positive when ef > 0.
		if (st.ef == 0)
			return {0.0};
		return {ef * ((ef + ep) + (ef + nf)) / (2.0 * (ef + nf) * (ef + ep))};
	case Formula::PattSim2:
	case Formula::M9185:
		break;
	}
	throw FormulaUnavailable("formula unavailable: " + std::string(name(f)));
}

/// Scores for every statement of a spectrum under one formula.
struct SuspiciousnessVector {
	Formula formula = Formula::Tarantula;
	std::vector<StatementId> statements;
	std::vector<Score> scores;

	const Score &score_of(const StatementId &s) const {
		for (std::size_t i = 0; i < statements.size(); ++i)
			if (statements[i] == s)
				return scores[i];
		throw InputError("unknown statement " + s.str());
	}
};

inline SuspiciousnessVector compute_scores(Formula f, const CoverageSpectrum &spectrum) {
	if (!available(f))
		throw FormulaUnavailable("formula unavailable: " + std::string(name(f)));
	const Totals totals{spectrum.failing_count(), spectrum.passing_count()};
	SuspiciousnessVector out{f, spectrum.statements(), {}};
	out.scores.reserve(spectrum.size());
	for (const auto &st : all_stats(spectrum))
		out.scores.push_back(suspiciousness(f, st, totals));
	return out;
}

} // namespace slicefl

#endif // SLICEFL_FORMULAS_HPP
