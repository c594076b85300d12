#ifndef SLICEFL_EVALUATION_HPP
#define SLICEFL_EVALUATION_HPP

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "formulas.hpp"
#include "hybrid.hpp"
#include "metrics.hpp"
#include "ranking.hpp"
#include "slicing.hpp"
#include "spectra.hpp"

namespace slicefl {

using ordered_json = nlohmann::ordered_json;

enum class TechniqueKind { Statistical, Slice, Hybrid };

struct Technique {
	TechniqueKind kind = TechniqueKind::Statistical;
	Formula formula = Formula::Kulczynski2;
	std::size_t n = 2;
	std::string label;
};

/// Built-in defaults; lower precedence than manifest fields and command-line flags.
struct TechniqueDefaults {
	Formula formula = Formula::Kulczynski2;
	std::size_t n = 2;
};

inline Formula require_formula(std::string_view text) {
	auto f = formula_from_name(text);
	if (!f)
		throw InputError("unknown formula '" + std::string(text) + "'");
	return *f;
}

/**
 * Technique labels: a formula name, `formula`, `slice`, `hybrid`,
 * `hybrid-<n>` or `hybrid-<n>-<formula>`.
 */
inline Technique parse_technique(std::string_view label, const TechniqueDefaults &defaults) {
	Technique t{TechniqueKind::Statistical, defaults.formula, defaults.n, std::string(label)};
	if (label == "slice") {
		t.kind = TechniqueKind::Slice;
		return t;
	}
	if (label == "formula")
		return t;
	if (label == "hybrid" || label.starts_with("hybrid-")) {
		t.kind = TechniqueKind::Hybrid;
		if (label == "hybrid")
			return t;
		auto rest = label.substr(7);
		const auto dash = rest.find('-');
		if (!detail::parse_int(rest.substr(0, dash), t.n))
			throw InputError("malformed hybrid technique '" + std::string(label) + "'");
		if (dash != std::string_view::npos)
			t.formula = require_formula(rest.substr(dash + 1));
		return t;
	}
	t.formula = require_formula(label);
	return t;
}

/// A ranking plus the text shown in the report's score column.
struct Localization {
	Ranking ranking;
	std::vector<std::string> score_column;
};

/// Inputs for one localization run.
struct LocalizeInput {
	const CoverageSpectrum *spectrum = nullptr;
	const DependenceGraph *graph = nullptr;
	std::optional<StatementId> criterion;
	std::optional<std::string> failing_test; ///< defaults to the first failing test
};

inline SliceRequest make_slice_request(const LocalizeInput &in) {
	if (!in.graph)
		throw InputError("slicing requires a dependence graph");
	if (!in.criterion)
		throw InputError("slicing requires a criterion");
	const TestRun *run = nullptr;
	if (in.failing_test) {
		run = in.spectrum->find_test(*in.failing_test);
		if (!run)
			throw InputError("unknown failing test '" + *in.failing_test + "'");
		if (run->verdict != Verdict::Fail)
			throw InputError("test '" + *in.failing_test + "' did not fail");
	} else {
		for (const auto &t : in.spectrum->tests())
			if (t.verdict == Verdict::Fail) {
				run = &t;
				break;
			}
		if (!run)
			throw InputError("spectrum has no failing test");
	}
	SliceRequest req{*in.criterion, {}, {}};
	for (const auto &s : in.spectrum->covered_by(*run))
		if (in.graph->contains(s))
			req.executed.insert(s);
	return req;
}

inline Localization localize(const Technique &tech, const LocalizeInput &in) {
	const auto &universe = in.spectrum->statements();
	std::optional<SuspiciousnessVector> scores;
	std::optional<Slice> slice;
	if (tech.kind != TechniqueKind::Slice) {
		in.spectrum->require_failing();
		scores = compute_scores(tech.formula, *in.spectrum);
	}
	if (tech.kind != TechniqueKind::Statistical)
		slice = approx_dynamic_slice(*in.graph, make_slice_request(in));

	Localization out;
	switch (tech.kind) {
	case TechniqueKind::Statistical: out.ranking = rank(*scores); break;
	case TechniqueKind::Slice: out.ranking = slice_ranking(*slice, universe); break;
	case TechniqueKind::Hybrid: out.ranking = hybrid_ranking(tech.n, rank(*scores), *slice, universe); break;
	}
	const std::size_t phase_one = tech.kind == TechniqueKind::Hybrid ? std::min(tech.n, universe.size()) : 0;
	for (std::size_t i = 0; i < out.ranking.order.size(); ++i) {
		const auto &s = out.ranking.order[i];
		if (tech.kind == TechniqueKind::Statistical || i < phase_one) {
			out.score_column.push_back(format_score(scores->score_of(s)));
		} else {
			auto it = slice->distance.find(s);
			out.score_column.push_back(it == slice->distance.end() ? "-" : "d=" + std::to_string(it->second));
		}
	}
	return out;
}

inline std::string ranking_tsv(const Localization &loc) {
	std::string out = "rank\tunit\tline\tscore\n";
	for (std::size_t i = 0; i < loc.ranking.order.size(); ++i) {
		const auto &s = loc.ranking.order[i];
		out += std::to_string(loc.ranking.ranks[i]) + '\t' + s.unit + '\t' + std::to_string(s.line) + '\t' +
		       loc.score_column[i] + '\n';
	}
	return out;
}

inline ordered_json ranking_json(const Localization &loc) {
	ordered_json rows = ordered_json::array();
	for (std::size_t i = 0; i < loc.ranking.order.size(); ++i) {
		const auto &s = loc.ranking.order[i];
		rows.push_back({{"rank", loc.ranking.ranks[i]}, {"unit", s.unit}, {"line", s.line}, {"score", loc.score_column[i]}});
	}
	return rows;
}

inline std::string format_fixed(double x, int digits) {
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*f", digits, round_half_even(x, digits));
	return buf;
}

// ---------------------------------------------------------------------------
// corpus evaluation

enum class ErrorType { Real, Artificial };

inline std::string_view to_string(ErrorType e) { return e == ErrorType::Real ? "REAL" : "ARTIFICIAL"; }

struct BugCase {
	std::string id;
	std::filesystem::path spectrum;
	std::optional<std::filesystem::path> graph;
	std::optional<StatementId> criterion;
	std::vector<std::set<StatementId>> fault_groups;
	std::optional<std::string> failing_test;
	ErrorType error_type = ErrorType::Real;

	std::set<StatementId> faulty() const {
		std::set<StatementId> all;
		for (const auto &g : fault_groups)
			all.insert(g.begin(), g.end());
		return all;
	}
	bool multiple_faults() const { return fault_groups.size() > 1; }
};

struct CorpusManifest {
	std::vector<BugCase> cases;
	std::vector<std::string> techniques;
	std::optional<Formula> formula;
	std::optional<std::size_t> n;
};

/**
 * Manifest JSON:
 *   {"techniques": [...], "formula": "...", "n": 2,
 *    "cases": [{"id", "spectrum", "graph", "criterion", "faulty" | "fault_groups",
 *               "error_type", "failing_test"}]}
 * Relative paths resolve against the manifest's directory.
 */
inline CorpusManifest parse_manifest(std::string_view doc, const std::filesystem::path &base_dir) {
	CorpusManifest m;
	try {
		const auto j = nlohmann::json::parse(doc);
		for (const auto &t : j.at("techniques"))
			m.techniques.push_back(t.get<std::string>());
		if (j.contains("formula"))
			m.formula = require_formula(j.at("formula").get<std::string>());
		if (j.contains("n"))
			m.n = j.at("n").get<std::size_t>();
		std::set<std::string> ids;
		for (const auto &c : j.at("cases")) {
			BugCase bug;
			bug.id = c.at("id").get<std::string>();
			if (!ids.insert(bug.id).second)
				throw InputError("duplicate case id '" + bug.id + "'");
			bug.spectrum = base_dir / c.at("spectrum").get<std::string>();
			if (c.contains("graph"))
				bug.graph = base_dir / c.at("graph").get<std::string>();
			if (c.contains("criterion"))
				bug.criterion = parse_statement_id(c.at("criterion").get<std::string>());
			if (c.contains("fault_groups")) {
				for (const auto &g : c.at("fault_groups")) {
					std::set<StatementId> group;
					for (const auto &s : g)
						group.insert(parse_statement_id(s.get<std::string>()));
					bug.fault_groups.push_back(std::move(group));
				}
			} else {
				std::set<StatementId> group;
				for (const auto &s : c.at("faulty"))
					group.insert(parse_statement_id(s.get<std::string>()));
				bug.fault_groups.push_back(std::move(group));
			}
			if (bug.faulty().empty())
				throw InputError("case '" + bug.id + "' lists no faulty statement");
			if (c.contains("error_type")) {
				const auto et = c.at("error_type").get<std::string>();
				if (et == "REAL")
					bug.error_type = ErrorType::Real;
				else if (et == "ARTIFICIAL")
					bug.error_type = ErrorType::Artificial;
				else
					throw InputError("case '" + bug.id + "': error_type must be REAL or ARTIFICIAL");
			}
			if (c.contains("failing_test"))
				bug.failing_test = c.at("failing_test").get<std::string>();
			m.cases.push_back(std::move(bug));
		}
	} catch (const nlohmann::json::exception &e) {
		throw InputError(std::string("manifest: ") + e.what());
	}
	if (m.cases.empty())
		throw InputError("manifest has no cases");
	return m;
}

inline CorpusManifest load_manifest(const std::filesystem::path &path) {
	return parse_manifest(detail::read_file(path), path.parent_path());
}

/// One (bug, technique) outcome: a score or the reason it could not be computed.
struct CaseResult {
	std::string bug_id;
	std::string technique;
	std::optional<EffectivenessScore> score;
	std::optional<ExpenseScore> expense;
	std::string error;
};

inline std::vector<CaseResult> evaluate_case(const BugCase &bug, std::span<const Technique> techniques) {
	std::vector<CaseResult> out;
	std::optional<CoverageSpectrum> spectrum;
	std::optional<DependenceGraph> graph;
	std::string load_error;
	try {
		spectrum = load_spectrum(bug.spectrum);
		if (bug.graph)
			graph = load_graph(*bug.graph);
		bool any = false;
		for (const auto &s : bug.faulty())
			any = any || spectrum->contains(s);
		if (!any)
			throw InputError("no faulty statement is in the statement universe");
	} catch (const std::exception &e) {
		load_error = e.what();
	}
	for (const auto &tech : techniques) {
		CaseResult r{bug.id, tech.label, std::nullopt, std::nullopt, load_error};
		if (load_error.empty()) {
			try {
				LocalizeInput in{&*spectrum, graph ? &*graph : nullptr, bug.criterion, bug.failing_test};
				const auto loc = localize(tech, in);
				r.score = score_from_ranking(loc.ranking, bug.faulty(), spectrum->statements());
				if (bug.multiple_faults())
					r.expense = expense_and_mult_score(loc.ranking, bug.fault_groups, spectrum->statements());
			} catch (const std::exception &e) {
				r.error = e.what();
			}
		}
		out.push_back(std::move(r));
	}
	return out;
}

struct EvaluationOptions {
	std::optional<std::vector<std::string>> techniques; ///< overrides the manifest list
	std::optional<Formula> formula;
	std::optional<std::size_t> n;
	unsigned jobs = 1;
};

struct EvaluationReport {
	std::vector<std::string> techniques;
	std::vector<BugCase> cases;
	std::vector<CaseResult> results; ///< manifest order, then technique order
};

inline EvaluationReport evaluate(const CorpusManifest &manifest, const EvaluationOptions &opts = {}) {
	TechniqueDefaults defaults;
	if (manifest.formula)
		defaults.formula = *manifest.formula;
	if (manifest.n)
		defaults.n = *manifest.n;
	if (opts.formula)
		defaults.formula = *opts.formula;
	if (opts.n)
		defaults.n = *opts.n;

	EvaluationReport report;
	report.techniques = opts.techniques ? *opts.techniques : manifest.techniques;
	report.cases = manifest.cases;
	if (report.techniques.empty())
		throw InputError("no techniques requested");
	std::vector<Technique> techniques;
	std::set<std::string> labels;
	for (const auto &label : report.techniques) {
		if (!labels.insert(label).second)
			throw InputError("duplicate technique '" + label + "'");
		techniques.push_back(parse_technique(label, defaults));
	}

	std::vector<std::vector<CaseResult>> per_case(manifest.cases.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i; (i = next.fetch_add(1)) < manifest.cases.size();)
			per_case[i] = evaluate_case(manifest.cases[i], techniques);
	};
	const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(manifest.cases.size())));
	{
		std::vector<std::jthread> pool;
		for (unsigned j = 1; j < jobs; ++j)
			pool.emplace_back(worker);
		worker();
	}
	for (auto &rs : per_case)
		for (auto &r : rs)
			report.results.push_back(std::move(r));
	return report;
}

namespace detail {

struct TechniqueSamples {
	std::vector<std::string> bugs;
	std::vector<int> inspected;
	std::vector<double> scores;
};

inline TechniqueSamples samples_for(const EvaluationReport &report, const std::string &technique) {
	TechniqueSamples s;
	for (const auto &r : report.results)
		if (r.technique == technique && r.score) {
			s.bugs.push_back(r.bug_id);
			s.inspected.push_back(r.score->inspected);
			s.scores.push_back(r.score->value);
		}
	return s;
}

inline double mean(std::span<const double> xs) {
	if (xs.empty())
		return 0.0;
	return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

} // namespace detail

/// Compares two techniques over the bugs both localized. Throws for unknown labels.
inline ComparisonStats compare(const EvaluationReport &report, const std::string &a, const std::string &b) {
	for (const auto &label : {a, b})
		if (std::find(report.techniques.begin(), report.techniques.end(), label) == report.techniques.end())
			throw InputError("technique '" + label + "' is not in the report");
	const auto sa = detail::samples_for(report, a);
	const auto sb = detail::samples_for(report, b);
	std::vector<int> ia, ib;
	std::vector<double> xa, xb;
	for (std::size_t i = 0; i < sa.bugs.size(); ++i) {
		auto it = std::find(sb.bugs.begin(), sb.bugs.end(), sa.bugs[i]);
		if (it == sb.bugs.end())
			continue;
		const auto j = static_cast<std::size_t>(it - sb.bugs.begin());
		ia.push_back(sa.inspected[i]);
		ib.push_back(sb.inspected[j]);
		xa.push_back(sa.scores[i]);
		xb.push_back(sb.scores[j]);
	}
	if (ia.empty())
		throw InputError("techniques '" + a + "' and '" + b + "' share no localized bug");
	return compare_techniques(ia, ib, xa, xb);
}

inline ordered_json comparison_json(const std::string &a, const std::string &b, const ComparisonStats &c) {
	return {{"a", a},           {"b", b},           {"wins_a", c.wins_a}, {"wins_b", c.wins_b},
	        {"ties", c.ties},   {"odds_ratio", c.odds_ratio}, {"u", c.u},   {"p_value", c.p_value}};
}

inline ordered_json report_json(const EvaluationReport &report) {
	ordered_json j;
	j["techniques"] = report.techniques;
	ordered_json records = ordered_json::array();
	for (const auto &r : report.results) {
		ordered_json rec{{"bug-id", r.bug_id}, {"technique", r.technique}};
		if (r.score) {
			rec["inspected"] = r.score->inspected;
			rec["universe"] = r.score->universe;
			rec["score"] = r.score->value;
			if (r.expense) {
				rec["expense"] = r.expense->expense;
				rec["score_mult"] = r.expense->score_mult;
			}
		} else {
			rec["error"] = r.error;
		}
		records.push_back(std::move(rec));
	}
	j["records"] = std::move(records);

	std::map<std::string, const BugCase *> case_by_id;
	for (const auto &c : report.cases)
		case_by_id[c.id] = &c;

	ordered_json aggregate;
	for (const auto &tech : report.techniques) {
		std::vector<double> all, real, artificial, single, multiple;
		std::vector<int> inspected;
		int failures = 0;
		for (const auto &r : report.results) {
			if (r.technique != tech)
				continue;
			if (!r.score) {
				++failures;
				continue;
			}
			const auto *bug = case_by_id.at(r.bug_id);
			all.push_back(r.score->value);
			inspected.push_back(r.score->inspected);
			(bug->error_type == ErrorType::Real ? real : artificial).push_back(r.score->value);
			(bug->multiple_faults() ? multiple : single).push_back(
				bug->multiple_faults() && r.expense ? r.expense->score_mult : r.score->value);
		}
		ordered_json curve = ordered_json::array();
		if (!inspected.empty())
			for (const auto &p : cumulative_frequency(inspected))
				curve.push_back({{"inspected", p.threshold}, {"percent", p.percent}});
		auto stratum = [&](const std::vector<double> &xs) {
			return ordered_json{{"bugs", xs.size()}, {"mean_score", detail::mean(xs)}};
		};
		aggregate[tech] = {
			{"bugs", all.size()},
			{"failures", failures},
			{"mean_score", detail::mean(all)},
			{"error_type", {{"REAL", stratum(real)}, {"ARTIFICIAL", stratum(artificial)}}},
			{"fault_count", {{"single", stratum(single)}, {"multiple", stratum(multiple)}}},
			{"cumulative", std::move(curve)},
		};
	}
	j["aggregate"] = std::move(aggregate);

	ordered_json comparisons = ordered_json::array();
	for (std::size_t x = 0; x < report.techniques.size(); ++x)
		for (std::size_t y = x + 1; y < report.techniques.size(); ++y) {
			const auto &a = report.techniques[x];
			const auto &b = report.techniques[y];
			try {
				comparisons.push_back(comparison_json(a, b, compare(report, a, b)));
			} catch (const InputError &) {
				// nothing in common to compare
			}
		}
	j["comparisons"] = std::move(comparisons);
	return j;
}

/// Table mirror of the report; scores and percentages rounded half-to-even at 2 decimals.
inline std::string report_tsv(const EvaluationReport &report) {
	std::string out = "bug-id\ttechnique\tinspected\tuniverse\tscore\texpense\tscore_mult\terror\n";
	for (const auto &r : report.results) {
		out += r.bug_id + '\t' + r.technique + '\t';
		if (r.score) {
			out += std::to_string(r.score->inspected) + '\t' + std::to_string(r.score->universe) + '\t' +
			       format_fixed(r.score->value, 2) + '\t';
			out += r.expense ? format_fixed(r.expense->expense, 2) + '\t' + format_fixed(r.expense->score_mult, 2) : "-\t-";
			out += "\t-\n";
		} else {
			out += "-\t-\t-\t-\t-\t" + r.error + '\n';
		}
	}
	return out;
}

/// Rebuilds the comparable parts of a report from its JSON form.
inline EvaluationReport report_from_json(std::string_view doc) {
	EvaluationReport report;
	try {
		const auto j = nlohmann::json::parse(doc);
		for (const auto &t : j.at("techniques"))
			report.techniques.push_back(t.get<std::string>());
		for (const auto &rec : j.at("records")) {
			CaseResult r;
			r.bug_id = rec.at("bug-id").get<std::string>();
			r.technique = rec.at("technique").get<std::string>();
			if (rec.contains("score"))
				r.score = EffectivenessScore{rec.at("score").get<double>(), rec.at("inspected").get<int>(),
				                             rec.at("universe").get<int>()};
			else
				r.error = rec.value("error", std::string{});
			report.results.push_back(std::move(r));
		}
	} catch (const nlohmann::json::exception &e) {
		throw InputError(std::string("report JSON: ") + e.what());
	}
	return report;
}

inline constexpr std::string_view kFormatsHelp = R"(Statement ids
  <unit>:<line>, line >= 1. Statements order by line, then unit.

Spectrum (text, '#' starts a comment)
  statements <unit>:<line>[,<unit>:<line>...]
  test <id> <PASS|FAIL> [<unit>:<line>[,...]]
  JSON (.json): {"statements": [...], "tests": [{"id", "verdict", "covered": [...]}]}

Dependence graph (DOT subset)
  digraph <name> {
    "<unit>:<line>";                                   // every node declared
    "<unit>:<line>" -> "<unit>:<line>" [kind="data"];  // from depends on to
  }
  kind is "data" or "control"; `edge [kind=...]` sets a default.
  JSON (.json): {"nodes": [...], "edges": [{"from", "to", "kind"}]}

Manifest (JSON)
  {"techniques": ["tarantula", "slice", "hybrid-2"], "formula": "Kulczynski2", "n": 2,
   "cases": [{"id", "spectrum", "graph", "criterion", "faulty": [...] | "fault_groups": [[...]],
              "error_type": "REAL" | "ARTIFICIAL", "failing_test"}]}
  Technique labels: <formula>, slice, hybrid, hybrid-<n>, hybrid-<n>-<formula>.

Ranking report (TSV)
  rank  unit  line  score
  score is the suspiciousness for statistical entries, d=<k> for slice
  entries at backward distance k, and - for statements outside the slice.
)";

} // namespace slicefl

#endif // SLICEFL_EVALUATION_HPP
