// Command-line front end for the fault localization toolkit.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <slicefl/slicefl.hpp>

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kFormulaUnavailable = 3;

void emit(const std::string &text, const std::string &out_path) {
	if (out_path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream out(out_path, std::ios::binary);
	if (!out)
		throw slicefl::InputError("cannot write " + out_path);
	out << text;
}

std::vector<std::set<slicefl::StatementId>> fault_groups(const std::vector<std::string> &faulty,
                                                         const std::vector<std::string> &groups) {
	std::vector<std::set<slicefl::StatementId>> out;
	std::set<slicefl::StatementId> merged;
	for (const auto &f : faulty)
		for (auto &s : slicefl::parse_statement_list(f))
			merged.insert(std::move(s));
	if (!merged.empty())
		out.push_back(std::move(merged));
	for (const auto &g : groups) {
		auto ids = slicefl::parse_statement_list(g);
		out.emplace_back(ids.begin(), ids.end());
	}
	return out;
}

} // namespace

int main(int argc, char **argv) {
	using namespace slicefl;

	CLI::App app{"Statistical debugging, dynamic slicing and hybrid fault localization"};
	app.require_subcommand(1);

	std::string spectrum_path, graph_path, criterion, technique = "formula", formula_name, failing_test, out_path;
	std::string format = "tsv";
	std::optional<std::size_t> n;
	std::vector<std::string> faulty, groups;

	auto *loc = app.add_subcommand("localize", "Rank the statements of one failing program");
	loc->add_option("--spectrum", spectrum_path, "Coverage spectrum file")->required();
	loc->add_option("--graph", graph_path, "Dependence graph file (slice, hybrid)");
	loc->add_option("--criterion", criterion, "Slicing criterion <unit>:<line>");
	loc->add_option("--technique", technique, "formula | slice | hybrid | <formula name>");
	loc->add_option("--formula", formula_name, "Suspiciousness formula (default Kulczynski2)");
	loc->add_option("--n", n, "Hybrid phase-one budget (default 2)");
	loc->add_option("--faulty", faulty, "Faulty statements <unit>:<line>[,...]");
	loc->add_option("--fault-group", groups, "One fault of a multi-fault bug; repeatable");
	loc->add_option("--failing-test", failing_test, "Failing run used for slicing (default: first failing test)");
	loc->add_option("--out", out_path, "Write the report here instead of stdout");
	loc->add_option("--format", format, "tsv | json")->check(CLI::IsMember({"tsv", "json"}));

	std::string manifest_path, techniques_csv;
	unsigned jobs = 1;
	std::string eval_format = "json";
	auto *eval = app.add_subcommand("evaluate", "Score techniques over a corpus manifest");
	eval->add_option("manifest", manifest_path, "Corpus manifest (JSON)")->required();
	eval->add_option("--techniques", techniques_csv, "Comma-separated technique labels (overrides manifest)");
	eval->add_option("--formula", formula_name, "Formula for hybrid/formula labels without one");
	eval->add_option("--n", n, "Default hybrid budget");
	eval->add_option("--jobs", jobs, "Worker threads");
	eval->add_option("--out", out_path, "Write the report here instead of stdout");
	eval->add_option("--format", eval_format, "json | tsv")->check(CLI::IsMember({"tsv", "json"}));

	std::string report_path, tech_a, tech_b;
	auto *cmp = app.add_subcommand("compare", "Odds ratio and Mann-Whitney U between two techniques");
	cmp->add_option("report", report_path, "Evaluation report (JSON)")->required();
	cmp->add_option("a", tech_a, "First technique label")->required();
	cmp->add_option("b", tech_b, "Second technique label")->required();
	cmp->add_option("--out", out_path, "Write the result here instead of stdout");

	auto *fmt = app.add_subcommand("formats", "Describe the input and report formats");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int rc = app.exit(e);
		return rc == 0 ? kOk : kInputError;
	}

	try {
		if (*fmt) {
			std::cout << kFormatsHelp;
			return kOk;
		}

		if (*loc) {
			TechniqueDefaults defaults;
			if (!formula_name.empty())
				defaults.formula = require_formula(formula_name);
			if (n)
				defaults.n = *n;
			const auto tech = parse_technique(technique, defaults);
			const auto spectrum = load_spectrum(spectrum_path);
			std::optional<DependenceGraph> graph;
			if (!graph_path.empty())
				graph = load_graph(graph_path);
			LocalizeInput in{&spectrum, graph ? &*graph : nullptr, std::nullopt, std::nullopt};
			if (!criterion.empty())
				in.criterion = parse_statement_id(criterion);
			if (!failing_test.empty())
				in.failing_test = failing_test;

			const auto result = localize(tech, in);
			const auto faults = fault_groups(faulty, groups);
			std::optional<EffectivenessScore> score;
			std::optional<ExpenseScore> expense;
			if (!faults.empty()) {
				std::set<StatementId> all;
				for (const auto &g : faults)
					all.insert(g.begin(), g.end());
				score = score_from_ranking(result.ranking, all, spectrum.statements());
				if (faults.size() > 1)
					expense = expense_and_mult_score(result.ranking, faults, spectrum.statements());
			}

			if (format == "json") {
				ordered_json j{{"technique", tech.label}, {"policy", to_string(result.ranking.policy)},
				               {"universe", spectrum.size()}, {"ranking", ranking_json(result)}};
				if (score)
					j["result"] = {{"inspected", score->inspected}, {"universe", score->universe}, {"score", score->value}};
				if (expense) {
					j["result"]["expense"] = expense->expense;
					j["result"]["score_mult"] = expense->score_mult;
				}
				emit(j.dump(2) + "\n", out_path);
			} else {
				std::string text = ranking_tsv(result);
				if (score) {
					text += "# inspected\t" + std::to_string(score->inspected) + "\n";
					text += "# universe\t" + std::to_string(score->universe) + "\n";
					text += "# score\t" + format_fixed(score->value, 2) + "\n";
				}
				if (expense) {
					text += "# expense\t" + format_fixed(expense->expense, 2) + "\n";
					text += "# score_mult\t" + format_fixed(expense->score_mult, 2) + "\n";
				}
				emit(text, out_path);
			}
			return kOk;
		}

		if (*eval) {
			EvaluationOptions opts;
			if (!techniques_csv.empty()) {
				std::vector<std::string> labels;
				for (auto part : detail::split(techniques_csv, ','))
					if (!part.empty())
						labels.emplace_back(part);
				opts.techniques = std::move(labels);
			}
			if (!formula_name.empty())
				opts.formula = require_formula(formula_name);
			opts.n = n;
			opts.jobs = jobs;
			const auto report = evaluate(load_manifest(manifest_path), opts);
			emit(eval_format == "json" ? report_json(report).dump(2) + "\n" : report_tsv(report), out_path);
			return kOk;
		}

		if (*cmp) {
			const auto report = report_from_json(detail::read_file(report_path));
			const auto stats = compare(report, tech_a, tech_b);
			emit(comparison_json(tech_a, tech_b, stats).dump(2) + "\n", out_path);
			return kOk;
		}
	} catch (const FormulaUnavailable &e) {
		std::cerr << "error: " << e.what() << '\n';
		return kFormulaUnavailable;
	} catch (const InputError &e) {
		std::cerr << "error: " << e.what() << '\n';
		return kInputError;
	}
	return kOk;
}
