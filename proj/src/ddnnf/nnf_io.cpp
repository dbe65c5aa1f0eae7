#include <charconv>
#include <set>
#include <sstream>

#include "smtkc/ddnnf.hpp"

namespace smtkc {

NnfFiles export_nnf(const DdnnfGraph& g) {
  std::vector<NodeId> live = g.reachable();
  std::vector<NodeId> index(g.size(), 0);
  for (NodeId i = 0; i < live.size(); ++i) index[live[i]] = i;

  std::ostringstream body;
  std::ostringstream tags;
  std::size_t edges = 0;
  auto children = [&](const Node& n) {
    body << n.children.size();
    for (NodeId c : n.children) body << ' ' << index[c];
    edges += n.children.size();
  };
  for (NodeId i = 0; i < live.size(); ++i) {
    const Node& n = g.node(live[i]);
    switch (n.kind) {
      case NodeKind::True: body << "A 0"; break;
      case NodeKind::False: body << "O 0 0"; break;
      case NodeKind::Lit:
        body << "L " << n.lit.dimacs();
        if (n.implied) tags << "c implied " << i << '\n';
        break;
      case NodeKind::And:
        body << "A ";
        children(n);
        break;
      case NodeKind::Or:
        body << "O " << n.decision_var << ' ';
        children(n);
        break;
    }
    body << '\n';
  }

  NnfFiles out;
  out.nnf = "nnf " + std::to_string(live.size()) + ' ' + std::to_string(edges) + ' ' + std::to_string(g.num_vars()) +
            '\n' + body.str();
  std::ostringstream atoms;
  if (const auto& map = g.atom_map()) {
    for (const std::string& name : map->table().real_names()) atoms << "c real " << name << '\n';
    for (int v = 1; v <= map->num_atoms(); ++v) atoms << v << ' ' << map->serialize(v) << '\n';
  }
  out.atoms = atoms.str() + tags.str();
  return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long number(std::string_view tok, std::size_t line_no) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError("line " + std::to_string(line_no) + ": expected integer, got '" + std::string(tok) + "'");
  return v;
}

bool blank_or_comment(std::string_view line) {
  std::vector<std::string_view> t = tokens(line);
  return t.empty() || t.front() == "c";
}

}  // namespace

DdnnfGraph import_nnf(std::string_view nnf, std::string_view atoms) {
  // Sidecar first: atom lines and implied-literal tags.
  AtomTable table;
  std::set<long long> implied;
  int num_atoms = 0;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(atoms)) {
    ++line_no;
    std::vector<std::string_view> t = tokens(line);
    if (t.empty()) continue;
    if (t.front() == "c") {
      if (t.size() == 3 && t[1] == "implied") implied.insert(number(t[2], line_no));
      // Declaring reals up front keeps variable ids, and so equality atom signs, stable.
      if (t.size() >= 3 && t[1] == "real") table.declare_real(std::string(line.substr(line.find("real") + 5)));
      continue;
    }
    long long var = number(t.front(), line_no);
    if (var != num_atoms + 1) throw FormatError("atoms line " + std::to_string(line_no) + ": variables must be listed 1..n in order");
    std::string_view rest = line.substr(line.find(t.front()) + t.front().size());
    Atom a;
    try {
      a = table.parse_atom(rest);
    } catch (const std::exception& e) {
      throw FormatError("atoms line " + std::to_string(line_no) + ": " + e.what());
    }
    if (a.kind() == AtomKind::Truth || table.intern(a) != var)
      throw FormatError("atoms line " + std::to_string(line_no) + ": duplicate or constant atom");
    num_atoms = static_cast<int>(var);
  }

  std::vector<std::string_view> lines;
  for (std::string_view line : split_lines(nnf))
    if (!blank_or_comment(line)) lines.push_back(line);
  if (lines.empty()) throw FormatError("nnf: missing header");
  std::vector<std::string_view> head = tokens(lines.front());
  if (head.size() != 4 || head[0] != "nnf") throw FormatError("nnf: malformed header");
  long long num_nodes = number(head[1], 1);
  long long num_edges = number(head[2], 1);
  long long num_vars = number(head[3], 1);
  if (num_nodes < 1 || num_edges < 0 || num_vars < 0) throw FormatError("nnf: bad header counts");
  if (static_cast<long long>(lines.size()) - 1 != num_nodes)
    throw FormatError("nnf: header announces " + std::to_string(num_nodes) + " nodes, found " + std::to_string(lines.size() - 1));
  if (num_atoms > num_vars) throw FormatError("atoms: more atoms than nnf variables");
  for (long long i : implied)
    if (i < 0 || i >= num_nodes) throw FormatError("atoms: implied tag names unknown node " + std::to_string(i));

  int atom_vars = num_atoms > 0 ? num_atoms : static_cast<int>(num_vars);
  GraphBuilder b(static_cast<int>(num_vars), atom_vars);
  std::vector<NodeId> ids;
  ids.reserve(static_cast<std::size_t>(num_nodes));
  long long edges = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    std::vector<std::string_view> t = tokens(lines[k]);
    long long self = static_cast<long long>(k) - 1;
    auto kids_from = [&](std::size_t at) {
      if (t.size() <= at) throw FormatError("nnf node " + std::to_string(self) + ": missing child count");
      long long c = number(t[at], k + 1);
      if (c < 0 || static_cast<long long>(t.size()) != static_cast<long long>(at) + 1 + c)
        throw FormatError("nnf node " + std::to_string(self) + ": child count mismatch");
      std::vector<NodeId> kids;
      for (std::size_t i = at + 1; i < t.size(); ++i) {
        long long ch = number(t[i], k + 1);
        if (ch < 0 || ch >= self) throw FormatError("nnf node " + std::to_string(self) + ": child is not an earlier node");
        kids.push_back(ids[static_cast<std::size_t>(ch)]);
      }
      edges += c;
      return kids;
    };
    if (t.front() == "L") {
      if (t.size() != 2) throw FormatError("nnf node " + std::to_string(self) + ": malformed literal");
      long long d = number(t[1], k + 1);
      if (d == 0 || d > num_vars || -d > num_vars)
        throw FormatError("nnf node " + std::to_string(self) + ": literal out of range");
      ids.push_back(b.literal(Literal::from_dimacs(static_cast<int>(d)), implied.count(self) > 0));
    } else if (t.front() == "A") {
      std::vector<NodeId> kids = kids_from(1);
      ids.push_back(kids.empty() ? b.true_node() : b.raw_and(std::move(kids)));
    } else if (t.front() == "O") {
      if (t.size() < 2) throw FormatError("nnf node " + std::to_string(self) + ": malformed or-node");
      long long var = number(t[1], k + 1);
      if (var < 0 || var > num_vars) throw FormatError("nnf node " + std::to_string(self) + ": decision variable out of range");
      std::vector<NodeId> kids = kids_from(2);
      ids.push_back(kids.empty() ? b.false_node() : b.raw_or(static_cast<int>(var), std::move(kids)));
    } else {
      throw FormatError("nnf node " + std::to_string(self) + ": unknown node type '" + std::string(t.front()) + "'");
    }
  }
  if (edges != num_edges) throw FormatError("nnf: header announces " + std::to_string(num_edges) + " edges, found " + std::to_string(edges));

  std::shared_ptr<const AtomMap> map;
  if (num_atoms > 0) map = std::make_shared<const AtomMap>(std::move(table));
  return b.finish(ids.back(), std::move(map), !implied.empty());
}

}  // namespace smtkc
