#ifndef SLICEFL_SPECTRA_HPP
#define SLICEFL_SPECTRA_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "statement.hpp"

namespace slicefl {

enum class Verdict { Pass, Fail };

inline std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "PASS" : "FAIL"; }

inline Verdict parse_verdict(std::string_view s) {
	if (s == "PASS")
		return Verdict::Pass;
	if (s == "FAIL")
		return Verdict::Fail;
	throw InputError("test verdict must be PASS or FAIL, got '" + std::string(s) + "'");
}

/// One test as written in a spectrum document.
struct TestRecord {
	std::string id;
	Verdict verdict = Verdict::Pass;
	std::vector<StatementId> covered;
};

/// One test after validation; coverage is a sorted, duplicate-free list of universe indices.
struct TestRun {
	std::string id;
	Verdict verdict = Verdict::Pass;
	std::vector<std::size_t> covered;
};

/// Counts of failing/passing tests that do (ef, ep) or do not (nf, np) execute a statement.
struct StatementStats {
	int ef = 0;
	int ep = 0;
	int nf = 0;
	int np = 0;

	friend bool operator==(const StatementStats &, const StatementStats &) = default;
};

/**
 * Per-test statement coverage plus verdicts over a fixed statement universe.
 *
 * The universe keeps document order. Instances are immutable once built and
 * may be shared freely between threads.
 */
class CoverageSpectrum {
public:
	CoverageSpectrum(std::vector<StatementId> statements, std::vector<TestRecord> tests)
		: m_statements(std::move(statements)) {
		if (m_statements.empty())
			throw InputError("spectrum declares zero statements");
		for (std::size_t i = 0; i < m_statements.size(); ++i) {
			if (!m_index.emplace(m_statements[i], i).second)
				throw InputError("duplicate statement " + m_statements[i].str());
		}
		std::unordered_set<std::string> seen;
		for (auto &t : tests) {
			if (t.id.empty())
				throw InputError("test with empty id");
			if (!seen.insert(t.id).second)
				throw InputError("duplicate test id '" + t.id + "'");
			TestRun run{t.id, t.verdict, {}};
			for (const auto &s : t.covered) {
				auto idx = index_of(s);
				if (!idx)
					throw InputError("test '" + t.id + "' covers unknown statement " + s.str());
				run.covered.push_back(*idx);
			}
			std::sort(run.covered.begin(), run.covered.end());
			run.covered.erase(std::unique(run.covered.begin(), run.covered.end()), run.covered.end());
			(run.verdict == Verdict::Fail ? m_failing : m_passing) += 1;
			m_tests.push_back(std::move(run));
		}
	}

	const std::vector<StatementId> &statements() const { return m_statements; }
	std::span<const TestRun> tests() const { return m_tests; }
	std::size_t size() const { return m_statements.size(); }

	int failing_count() const { return m_failing; }
	int passing_count() const { return m_passing; }

	std::optional<std::size_t> index_of(const StatementId &s) const {
		auto it = m_index.find(s);
		if (it == m_index.end())
			return std::nullopt;
		return it->second;
	}
	bool contains(const StatementId &s) const { return m_index.count(s) != 0; }

	const TestRun *find_test(std::string_view id) const {
		for (const auto &t : m_tests)
			if (t.id == id)
				return &t;
		return nullptr;
	}

	std::vector<StatementId> covered_by(const TestRun &t) const {
		std::vector<StatementId> out;
		out.reserve(t.covered.size());
		for (auto i : t.covered)
			out.push_back(m_statements[i]);
		return out;
	}

	/// Throws unless at least one failing test exists.
	void require_failing() const {
		if (m_failing == 0)
			throw InputError("spectrum has no failing test; nothing to localize");
	}

private:
	std::vector<StatementId> m_statements;
	std::unordered_map<StatementId, std::size_t, StatementIdHash> m_index;
	std::vector<TestRun> m_tests;
	int m_failing = 0;
	int m_passing = 0;
};

/// Spectrum counts for every statement, aligned with `spectrum.statements()`.
inline std::vector<StatementStats> all_stats(const CoverageSpectrum &spectrum) {
	std::vector<StatementStats> out(spectrum.size());
	for (const auto &t : spectrum.tests()) {
		for (auto i : t.covered)
			(t.verdict == Verdict::Fail ? out[i].ef : out[i].ep) += 1;
	}
	for (auto &s : out) {
		s.nf = spectrum.failing_count() - s.ef;
		s.np = spectrum.passing_count() - s.ep;
	}
	return out;
}

inline StatementStats stats(const CoverageSpectrum &spectrum, const StatementId &s) {
	auto idx = spectrum.index_of(s);
	if (!idx)
		throw InputError("unknown statement " + s.str());
	StatementStats out;
	for (const auto &t : spectrum.tests()) {
		const bool hit = std::binary_search(t.covered.begin(), t.covered.end(), *idx);
		if (t.verdict == Verdict::Fail)
			(hit ? out.ef : out.nf) += 1;
		else
			(hit ? out.ep : out.np) += 1;
	}
	return out;
}

// Text format:
//   statements <unit>:<line>[,<unit>:<line>...]
//   test <id> <PASS|FAIL> [<unit>:<line>[,...]]
// '#' starts a comment.
inline CoverageSpectrum parse_spectrum_text(std::string_view doc) {
	std::optional<std::vector<StatementId>> statements;
	std::vector<TestRecord> tests;
	std::size_t lineno = 0;
	std::istringstream in{std::string(doc)};
	for (std::string raw; std::getline(in, raw);) {
		++lineno;
		std::string_view line = raw;
		if (auto hash = line.find('#'); hash != std::string_view::npos)
			line = line.substr(0, hash);
		line = detail::trim(line);
		if (line.empty())
			continue;
		const auto where = "spectrum line " + std::to_string(lineno) + ": ";
		std::istringstream fields{std::string(line)};
		std::string keyword;
		fields >> keyword;
		try {
			if (keyword == "statements") {
				if (statements)
					throw InputError("second 'statements' header");
				std::string rest;
				std::getline(fields, rest);
				statements = parse_statement_list(rest);
			} else if (keyword == "test") {
				if (!statements)
					throw InputError("'test' before 'statements' header");
				TestRecord rec;
				std::string verdict;
				if (!(fields >> rec.id >> verdict))
					throw InputError("expected 'test <id> <PASS|FAIL> <covered>'");
				rec.verdict = parse_verdict(verdict);
				std::string rest;
				std::getline(fields, rest);
				rec.covered = parse_statement_list(rest);
				tests.push_back(std::move(rec));
			} else {
				throw InputError("unknown keyword '" + keyword + "'");
			}
		} catch (const InputError &e) {
			throw InputError(where + e.what());
		}
	}
	if (!statements)
		throw InputError("spectrum has no 'statements' header");
	return CoverageSpectrum(std::move(*statements), std::move(tests));
}

// JSON mirror: {"statements": ["u:l", ...], "tests": [{"id": ..., "verdict": ..., "covered": [...]}]}
inline CoverageSpectrum parse_spectrum_json(std::string_view doc) {
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(doc);
	} catch (const nlohmann::json::exception &e) {
		throw InputError(std::string("spectrum JSON: ") + e.what());
	}
	try {
		std::vector<StatementId> statements;
		for (const auto &s : j.at("statements"))
			statements.push_back(parse_statement_id(s.get<std::string>()));
		std::vector<TestRecord> tests;
		if (j.contains("tests")) {
			for (const auto &t : j.at("tests")) {
				TestRecord rec;
				rec.id = t.at("id").get<std::string>();
				rec.verdict = parse_verdict(t.at("verdict").get<std::string>());
				if (t.contains("covered"))
					for (const auto &s : t.at("covered"))
						rec.covered.push_back(parse_statement_id(s.get<std::string>()));
				tests.push_back(std::move(rec));
			}
		}
		return CoverageSpectrum(std::move(statements), std::move(tests));
	} catch (const nlohmann::json::exception &e) {
		throw InputError(std::string("spectrum JSON: ") + e.what());
	}
}

inline std::string to_text(const CoverageSpectrum &spectrum) {
	std::string out = "statements ";
	for (std::size_t i = 0; i < spectrum.size(); ++i)
		out += (i ? "," : "") + spectrum.statements()[i].str();
	out += '\n';
	for (const auto &t : spectrum.tests()) {
		out += "test " + t.id + " " + std::string(to_string(t.verdict));
		for (std::size_t i = 0; i < t.covered.size(); ++i)
			out += (i ? "," : " ") + spectrum.statements()[t.covered[i]].str();
		out += '\n';
	}
	return out;
}

inline nlohmann::ordered_json to_json(const CoverageSpectrum &spectrum) {
	nlohmann::ordered_json j;
	j["statements"] = nlohmann::ordered_json::array();
	for (const auto &s : spectrum.statements())
		j["statements"].push_back(s.str());
	j["tests"] = nlohmann::ordered_json::array();
	for (const auto &t : spectrum.tests()) {
		nlohmann::ordered_json cov = nlohmann::ordered_json::array();
		for (const auto &s : spectrum.covered_by(t))
			cov.push_back(s.str());
		j["tests"].push_back({{"id", t.id}, {"verdict", to_string(t.verdict)}, {"covered", cov}});
	}
	return j;
}

namespace detail {

inline std::string read_file(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw InputError("cannot open " + path.string());
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

inline bool is_json_path(const std::filesystem::path &path) {
	auto ext = path.extension().string();
	std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
	return ext == ".json";
}

} // namespace detail

/// Loads a spectrum file; a `.json` extension selects the JSON mirror.
inline CoverageSpectrum load_spectrum(const std::filesystem::path &path) {
	const auto doc = detail::read_file(path);
	return detail::is_json_path(path) ? parse_spectrum_json(doc) : parse_spectrum_text(doc);
}

} // namespace slicefl

#endif // SLICEFL_SPECTRA_HPP
