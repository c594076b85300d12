#ifndef SLICEFL_SLICING_HPP
#define SLICEFL_SLICING_HPP

#include <algorithm>
#include <cctype>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ranking.hpp"
#include "spectra.hpp"

namespace slicefl {

enum class DependenceKind { Data, Control };

inline std::string_view to_string(DependenceKind k) { return k == DependenceKind::Data ? "data" : "control"; }

inline DependenceKind parse_dependence_kind(std::string_view s) {
	if (s == "data")
		return DependenceKind::Data;
	if (s == "control")
		return DependenceKind::Control;
	throw InputError("unknown edge kind '" + std::string(s) + "', expected data or control");
}

/// `from` depends on `to` (backward-dependence orientation).
struct DependenceEdge {
	StatementId from;
	StatementId to;
	DependenceKind kind = DependenceKind::Data;

	friend bool operator==(const DependenceEdge &, const DependenceEdge &) = default;
};

/**
 * Program dependence graph over statements.
 *
 * An edge s -> s' records that s depends on s', so a backward slice is plain
 * forward reachability from the criterion.
 */
class DependenceGraph {
public:
	struct Dependence {
		std::size_t target;
		DependenceKind kind;
	};

	DependenceGraph(std::vector<StatementId> nodes, std::vector<DependenceEdge> edges)
		: m_nodes(std::move(nodes)), m_edges(std::move(edges)), m_adjacency(m_nodes.size()) {
		for (std::size_t i = 0; i < m_nodes.size(); ++i)
			if (!m_index.emplace(m_nodes[i], i).second)
				throw InputError("duplicate graph node " + m_nodes[i].str());
		for (const auto &e : m_edges) {
			auto from = index_of(e.from);
			auto to = index_of(e.to);
			if (!from || !to)
				throw InputError("edge " + e.from.str() + " -> " + e.to.str() + " references an undeclared node");
			if (*from == *to && e.kind == DependenceKind::Control)
				throw InputError("control self-loop on " + e.from.str());
			m_adjacency[*from].push_back({*to, e.kind});
		}
	}

	const std::vector<StatementId> &nodes() const { return m_nodes; }
	const std::vector<DependenceEdge> &edges() const { return m_edges; }
	std::span<const Dependence> dependencies(std::size_t node) const { return m_adjacency[node]; }

	std::optional<std::size_t> index_of(const StatementId &s) const {
		auto it = m_index.find(s);
		if (it == m_index.end())
			return std::nullopt;
		return it->second;
	}
	bool contains(const StatementId &s) const { return m_index.count(s) != 0; }

private:
	std::vector<StatementId> m_nodes;
	std::vector<DependenceEdge> m_edges;
	std::vector<std::vector<Dependence>> m_adjacency;
	std::unordered_map<StatementId, std::size_t, StatementIdHash> m_index;
};

namespace detail {

// Just enough of the DOT language for dependence graphs: node statements,
// directed edge chains, attribute lists, and node/edge/graph defaults.
class DotReader {
public:
	explicit DotReader(std::string_view text) : m_text(text) {}

	DependenceGraph read() {
		auto tok = next();
		if (tok.kind == Tok::Id && tok.text == "strict")
			tok = next();
		if (tok.kind != Tok::Id || tok.text != "digraph")
			fail("expected 'digraph'");
		tok = next();
		if (tok.kind == Tok::Id)
			tok = next();
		if (tok.kind != Tok::LBrace)
			fail("expected '{'");
		std::optional<DependenceKind> default_kind;
		std::vector<StatementId> nodes;
		std::set<StatementId> declared;
		std::vector<DependenceEdge> edges;
		while (true) {
			tok = next();
			if (tok.kind == Tok::RBrace)
				break;
			if (tok.kind == Tok::Semi)
				continue;
			if (tok.kind != Tok::Id)
				fail("expected a statement");
			if (tok.quoted == false && (tok.text == "node" || tok.text == "graph" || tok.text == "edge")) {
				const auto attrs = attr_list(next());
				if (tok.text == "edge")
					if (auto it = attrs.find("kind"); it != attrs.end())
						default_kind = parse_dependence_kind(it->second);
				continue;
			}
			auto following = next();
			if (following.kind == Tok::Equals) {
				if (next().kind != Tok::Id)
					fail("expected attribute value");
				continue;
			}
			std::vector<StatementId> chain{parse_statement_id(tok.text)};
			while (following.kind == Tok::Arrow) {
				auto target = next();
				if (target.kind != Tok::Id)
					fail("expected node id after '->'");
				chain.push_back(parse_statement_id(target.text));
				following = next();
			}
			m_pending = following;
			const auto attrs = attr_list(next());
			if (chain.size() == 1) {
				if (declared.insert(chain.front()).second)
					nodes.push_back(chain.front());
				continue;
			}
			std::optional<DependenceKind> kind = default_kind;
			if (auto it = attrs.find("kind"); it != attrs.end())
				kind = parse_dependence_kind(it->second);
			if (!kind)
				fail("edge without kind attribute");
			for (std::size_t i = 0; i + 1 < chain.size(); ++i)
				edges.push_back({chain[i], chain[i + 1], *kind});
		}
		if (next().kind != Tok::End)
			fail("trailing content after graph");
		return DependenceGraph(std::move(nodes), std::move(edges));
	}

private:
	enum class Tok { Id, Arrow, LBrace, RBrace, LBracket, RBracket, Equals, Semi, Comma, End };
	struct Token {
		Tok kind = Tok::End;
		std::string text;
		bool quoted = false;
	};

	[[noreturn]] void fail(const std::string &msg) const {
		throw InputError("graph line " + std::to_string(m_line) + ": " + msg);
	}

	std::map<std::string, std::string> attr_list(Token tok) {
		std::map<std::string, std::string> attrs;
		while (tok.kind == Tok::LBracket) {
			while (true) {
				auto key = next();
				if (key.kind == Tok::RBracket)
					break;
				if (key.kind == Tok::Comma || key.kind == Tok::Semi)
					continue;
				if (key.kind != Tok::Id || next().kind != Tok::Equals)
					fail("malformed attribute list");
				auto value = next();
				if (value.kind != Tok::Id)
					fail("malformed attribute value");
				attrs[key.text] = value.text;
			}
			tok = next();
		}
		m_pending = tok;
		return attrs;
	}

	Token next() {
		if (m_pending) {
			auto t = std::move(*m_pending);
			m_pending.reset();
			return t;
		}
		skip_space();
		if (m_pos >= m_text.size())
			return {Tok::End};
		const char c = m_text[m_pos];
		auto single = [&](Tok k) {
			++m_pos;
			return Token{k};
		};
		switch (c) {
		case '{': return single(Tok::LBrace);
		case '}': return single(Tok::RBrace);
		case '[': return single(Tok::LBracket);
		case ']': return single(Tok::RBracket);
		case '=': return single(Tok::Equals);
		case ';': return single(Tok::Semi);
		case ',': return single(Tok::Comma);
		default: break;
		}
		if (c == '-' && m_pos + 1 < m_text.size() && m_text[m_pos + 1] == '>') {
			m_pos += 2;
			return {Tok::Arrow};
		}
		if (c == '-' && m_pos + 1 < m_text.size() && m_text[m_pos + 1] == '-')
			fail("undirected edges are not supported");
		if (c == '"') {
			Token t{Tok::Id, {}, true};
			++m_pos;
			while (m_pos < m_text.size() && m_text[m_pos] != '"') {
				if (m_text[m_pos] == '\\' && m_pos + 1 < m_text.size())
					++m_pos;
				if (m_text[m_pos] == '\n')
					++m_line;
				t.text += m_text[m_pos++];
			}
			if (m_pos >= m_text.size())
				fail("unterminated string");
			++m_pos;
			return t;
		}
		auto bare = [](char ch) {
			return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == ':' || ch == '/';
		};
		if (!bare(c))
			fail(std::string("unexpected character '") + c + "'");
		Token t{Tok::Id};
		while (m_pos < m_text.size() && bare(m_text[m_pos]))
			t.text += m_text[m_pos++];
		return t;
	}

	void skip_space() {
		while (m_pos < m_text.size()) {
			const char c = m_text[m_pos];
			if (c == '\n') {
				++m_line;
				++m_pos;
			} else if (std::isspace(static_cast<unsigned char>(c))) {
				++m_pos;
			} else if (c == '#' || m_text.substr(m_pos, 2) == "//") {
				while (m_pos < m_text.size() && m_text[m_pos] != '\n')
					++m_pos;
			} else if (m_text.substr(m_pos, 2) == "/*") {
				const auto end = m_text.find("*/", m_pos + 2);
				if (end == std::string_view::npos)
					fail("unterminated comment");
				m_line += static_cast<std::size_t>(std::count(m_text.begin() + m_pos, m_text.begin() + end, '\n'));
				m_pos = end + 2;
			} else {
				break;
			}
		}
	}

	std::string_view m_text;
	std::size_t m_pos = 0;
	std::size_t m_line = 1;
	std::optional<Token> m_pending;
};

} // namespace detail

/// DOT subset: nodes are declared as `"<unit>:<line>";`, edges carry `kind="data"|"control"`.
inline DependenceGraph parse_graph_dot(std::string_view doc) { return detail::DotReader(doc).read(); }

// JSON mirror: {"nodes": ["u:l", ...], "edges": [{"from": ..., "to": ..., "kind": ...}]}
inline DependenceGraph parse_graph_json(std::string_view doc) {
	try {
		const auto j = nlohmann::json::parse(doc);
		std::vector<StatementId> nodes;
		for (const auto &n : j.at("nodes"))
			nodes.push_back(parse_statement_id(n.get<std::string>()));
		std::vector<DependenceEdge> edges;
		if (j.contains("edges"))
			for (const auto &e : j.at("edges"))
				edges.push_back({parse_statement_id(e.at("from").get<std::string>()),
				                 parse_statement_id(e.at("to").get<std::string>()),
				                 parse_dependence_kind(e.at("kind").get<std::string>())});
		return DependenceGraph(std::move(nodes), std::move(edges));
	} catch (const nlohmann::json::exception &e) {
		throw InputError(std::string("graph JSON: ") + e.what());
	}
}

inline DependenceGraph load_graph(const std::filesystem::path &path) {
	const auto doc = detail::read_file(path);
	return detail::is_json_path(path) ? parse_graph_json(doc) : parse_graph_dot(doc);
}

inline std::string to_dot(const DependenceGraph &g) {
	std::string out = "digraph pdg {\n";
	for (const auto &n : g.nodes())
		out += "  \"" + n.str() + "\";\n";
	for (const auto &e : g.edges())
		out += "  \"" + e.from.str() + "\" -> \"" + e.to.str() + "\" [kind=\"" + std::string(to_string(e.kind)) + "\"];\n";
	out += "}\n";
	return out;
}

enum class SliceKind { Static, ApproxDynamic };

/// Criterion, executed statements of the failing run, and the known faulty statements.
struct SliceRequest {
	StatementId criterion;
	std::set<StatementId> executed;
	std::set<StatementId> faulty;
};

/// Slice members with their minimal backward-dependence distance from the criterion.
struct Slice {
	StatementId criterion;
	std::map<StatementId, int> distance;
	SliceKind kind = SliceKind::Static;

	bool contains(const StatementId &s) const { return distance.count(s) != 0; }
	std::size_t size() const { return distance.size(); }
};

namespace detail {

// BFS over dependence edges, restricted to nodes where `allowed` holds.
template <typename Allowed>
std::map<StatementId, int> backward_distances(const DependenceGraph &g, std::size_t start, Allowed allowed) {
	std::vector<int> dist(g.nodes().size(), -1);
	std::deque<std::size_t> queue{start};
	dist[start] = 0;
	while (!queue.empty()) {
		const auto cur = queue.front();
		queue.pop_front();
		for (const auto &dep : g.dependencies(cur)) {
			if (dist[dep.target] >= 0 || !allowed(dep.target))
				continue;
			dist[dep.target] = dist[cur] + 1;
			queue.push_back(dep.target);
		}
	}
	std::map<StatementId, int> out;
	for (std::size_t i = 0; i < dist.size(); ++i)
		if (dist[i] >= 0)
			out.emplace(g.nodes()[i], dist[i]);
	return out;
}

} // namespace detail

inline Slice static_slice(const DependenceGraph &g, const StatementId &criterion) {
	auto start = g.index_of(criterion);
	if (!start)
		throw InputError("slicing criterion " + criterion.str() + " is not a graph node");
	return {criterion, detail::backward_distances(g, *start, [](std::size_t) { return true; }), SliceKind::Static};
}

/// Executed statements of the static slice, with distances measured inside the executed subgraph.
inline Slice approx_dynamic_slice(const DependenceGraph &g, const SliceRequest &req) {
	auto start = g.index_of(req.criterion);
	if (!start)
		throw InputError("slicing criterion " + req.criterion.str() + " is not a graph node");
	if (!req.executed.count(req.criterion))
		throw InputError("slicing criterion " + req.criterion.str() + " was not executed by the failing run");
	std::vector<bool> executed(g.nodes().size(), false);
	for (const auto &s : req.executed) {
		auto idx = g.index_of(s);
		if (!idx)
			throw InputError("executed statement " + s.str() + " is not a graph node");
		executed[*idx] = true;
	}
	return {req.criterion,
	        detail::backward_distances(g, *start, [&](std::size_t i) { return static_cast<bool>(executed[i]); }),
	        SliceKind::ApproxDynamic};
}

namespace detail {

// Appends slice tiers (criterion free, then one tier per distance) and the
// remaining universe in line order, skipping anything in `already`.
inline void append_slice_phase(RankingBuilder &builder, const Slice &slice, std::span<const StatementId> universe,
                               const std::set<StatementId> &already) {
	std::set<StatementId> in_universe(universe.begin(), universe.end());
	if (!in_universe.count(slice.criterion))
		throw InputError("slicing criterion " + slice.criterion.str() + " is not in the statement universe");
	std::map<int, std::vector<StatementId>> tiers;
	for (const auto &[s, d] : slice.distance) {
		if (!in_universe.count(s))
			throw InputError("slice member " + s.str() + " is not in the statement universe");
		if (d > 0 && !already.count(s))
			tiers[d].push_back(s);
	}
	if (!already.count(slice.criterion))
		builder.add_free(slice.criterion);
	for (auto &[d, members] : tiers)
		builder.add_tier(std::move(members));
	std::vector<StatementId> rest;
	for (const auto &s : universe)
		if (!slice.contains(s) && !already.count(s))
			rest.push_back(s);
	std::sort(rest.begin(), rest.end());
	for (const auto &s : rest)
		builder.add_sequential(s);
}

} // namespace detail

/**
 * Ranks the universe by backward-dependence distance from the criterion.
 *
 * The criterion comes first and is not charged: it is where the failure is
 * observed. Statements at distance d share rank (charged statements at
 * distances 1..d-1) + 1. Statements outside the slice follow in line order.
 */
inline Ranking slice_ranking(const Slice &slice, std::span<const StatementId> universe) {
	RankingBuilder builder;
	detail::append_slice_phase(builder, slice, universe, {});
	return std::move(builder).finish(RankPolicy::ModifiedCompetition);
}

} // namespace slicefl

#endif // SLICEFL_SLICING_HPP
