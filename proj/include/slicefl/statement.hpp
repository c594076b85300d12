#ifndef SLICEFL_STATEMENT_HPP
#define SLICEFL_STATEMENT_HPP

#include <charconv>
#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slicefl {

/// Raised for malformed or inconsistent input documents.
class InputError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Raised when a registered formula has no usable definition.
class FormulaUnavailable : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/**
 * A source statement, identified by its file label and line.
 *
 * Statements order by line first and unit second, so ties between equally
 * suspicious statements always break towards the smaller line number.
 */
struct StatementId {
	std::string unit;
	int line = 0;

	std::string str() const { return unit + ":" + std::to_string(line); }

	friend bool operator==(const StatementId &, const StatementId &) = default;
	friend std::strong_ordering operator<=>(const StatementId &a, const StatementId &b) {
		if (auto c = a.line <=> b.line; c != 0)
			return c;
		return a.unit <=> b.unit;
	}
};

struct StatementIdHash {
	std::size_t operator()(const StatementId &s) const noexcept {
		return std::hash<std::string>{}(s.unit) * 31u + std::hash<int>{}(s.line);
	}
};

namespace detail {

inline std::string_view trim(std::string_view s) {
	const auto ws = " \t\r\n\f\v";
	const auto b = s.find_first_not_of(ws);
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(ws);
	return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
	std::vector<std::string_view> out;
	std::size_t start = 0;
	while (true) {
		const auto pos = s.find(sep, start);
		out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
		if (pos == std::string_view::npos)
			break;
		start = pos + 1;
	}
	return out;
}

template <typename Int>
bool parse_int(std::string_view s, Int &out) {
	const auto *end = s.data() + s.size();
	auto [ptr, ec] = std::from_chars(s.data(), end, out);
	return ec == std::errc{} && ptr == end && !s.empty();
}

} // namespace detail

/// Parses `<unit>:<line>`. The unit may itself contain colons; the last one separates the line.
inline StatementId parse_statement_id(std::string_view text) {
	const auto t = detail::trim(text);
	const auto colon = t.rfind(':');
	if (colon == std::string_view::npos || colon == 0)
		throw InputError("malformed statement id '" + std::string(t) + "', expected <unit>:<line>");
	StatementId id;
	id.unit = std::string(t.substr(0, colon));
	if (id.unit.find_first_of(" \t,") != std::string::npos)
		throw InputError("statement unit may not contain whitespace or commas: '" + std::string(t) + "'");
	if (!detail::parse_int(t.substr(colon + 1), id.line) || id.line < 1)
		throw InputError("statement line must be a positive integer: '" + std::string(t) + "'");
	return id;
}

/// Comma-separated list of statement ids; empty input yields an empty list.
inline std::vector<StatementId> parse_statement_list(std::string_view text) {
	std::vector<StatementId> out;
	if (detail::trim(text).empty())
		return out;
	for (auto part : detail::split(text, ','))
		out.push_back(parse_statement_id(part));
	return out;
}

} // namespace slicefl

#endif // SLICEFL_STATEMENT_HPP
