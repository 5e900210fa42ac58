#include "treespace/newick.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace treespace {

namespace {

struct PNode {
  std::string label;
  double len = 0.0;
  bool has_len = false;
  std::vector<PNode> children;
  bool is_leaf() const { return children.empty(); }
};

class Parser {
 public:
  explicit Parser(const std::string& text) {
    // strip bracketed comments, keep everything else
    int depth = 0;
    for (char c : text) {
      if (c == '[') ++depth;
      else if (c == ']') {
        if (--depth < 0) fail(ErrorCategory::parse, "unbalanced ']' in newick");
      } else if (depth == 0)
        src_ += c;
    }
    if (depth != 0) fail(ErrorCategory::parse, "unterminated '[' comment in newick");
    pos_ = 0;
  }

  PNode parse() {
    PNode root = subtree();
    skip_ws();
    if (peek() == ':') {  // tolerated root length, ignored
      ++pos_;
      number();
    }
    skip_ws();
    if (peek() != ';') fail(ErrorCategory::parse, "expected ';' at end of newick");
    ++pos_;
    skip_ws();
    if (pos_ != src_.size())
      fail(ErrorCategory::parse, "trailing characters after ';'");
    return root;
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  PNode subtree() {
    skip_ws();
    PNode node;
    if (peek() == '(') {
      ++pos_;
      node.children.push_back(child());
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        node.children.push_back(child());
        skip_ws();
      }
      if (peek() != ')') fail(ErrorCategory::parse, "expected ')' in newick");
      ++pos_;
      // optional internal label, ignored
      label();
    } else {
      node.label = label();
      if (node.label.empty())
        fail(ErrorCategory::parse, "expected leaf label or '(' in newick");
    }
    return node;
  }

  PNode child() {
    PNode node = subtree();
    skip_ws();
    if (peek() != ':')
      fail(ErrorCategory::parse, "missing branch length" +
                                     (node.is_leaf() ? " on leaf '" + node.label + "'"
                                                     : std::string(" on internal edge")));
    ++pos_;
    node.len = number();
    node.has_len = true;
    return node;
  }

  std::string label() {
    skip_ws();
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      out += c;
      ++pos_;
    }
    return out;
  }

  double number() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
          c == '+' || c == 'e' || c == 'E')
        ++pos_;
      else
        break;
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_ || start == pos_)
      fail(ErrorCategory::parse, "malformed branch length in newick");
    return value;
  }

  std::string src_;
  size_t pos_;
};

void collect_leaves(const PNode& n, std::vector<std::string>& out) {
  if (n.is_leaf()) {
    out.push_back(n.label);
    return;
  }
  for (const PNode& c : n.children) collect_leaves(c, out);
}

// Returns the leaf mask below `n`; accumulates per-split lengths. Edges that
// map to the same bipartition (the two edges of a degree-2 root, unary
// chains) have their lengths summed, which de-roots rooted inputs.
uint64_t accumulate_splits(const PNode& n, const TaxonSet& taxa,
                           std::map<uint64_t, double>& acc) {
  if (n.is_leaf()) {
    int idx = taxa.index_of(n.label);
    return uint64_t{1} << idx;
  }
  uint64_t mask = 0;
  for (const PNode& c : n.children) {
    uint64_t sub = accumulate_splits(c, taxa, acc);
    if (c.len < 0.0)
      fail(ErrorCategory::validation, "negative branch length in newick");
    bool terminal = std::popcount(sub) == 1 ||
                    std::popcount(sub) == taxa.size() - 1;
    if (terminal && c.len == 0.0)
      fail(ErrorCategory::validation, "zero-length terminal edge in newick");
    uint64_t canon = (sub & 1) ? (~sub & taxa.full_mask()) : sub;
    acc[canon] += c.len;
    mask |= sub;
  }
  return mask;
}

}  // namespace

Tree parse_newick(const std::string& text, TaxonSetPtr taxa) {
  Parser parser(text);
  PNode root = parser.parse();
  if (root.is_leaf())
    fail(ErrorCategory::parse, "newick expression is a single leaf");

  std::vector<std::string> labels;
  collect_leaves(root, labels);
  {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCategory::validation, "duplicate leaf label in newick");
    if (!taxa) {
      taxa = std::make_shared<TaxonSet>(sorted);
    } else {
      if (static_cast<int>(labels.size()) != taxa->size())
        fail(ErrorCategory::validation, "leaf set does not match the taxon set");
      for (const std::string& l : labels)
        if (taxa->index_of(l) < 0)
          fail(ErrorCategory::validation, "leaf label '" + l + "' not in the taxon set");
    }
  }

  std::map<uint64_t, double> acc;
  accumulate_splits(root, *taxa, acc);

  const uint64_t full = taxa->full_mask();
  std::vector<std::pair<Split, double>> lengths;
  for (const auto& [mask, len] : acc) {
    Split p = Split::from_side(mask, full);
    if (len == 0.0 && !p.is_terminal(full)) continue;  // unresolved edge
    lengths.emplace_back(p, len);
  }
  return Tree(std::move(taxa), std::move(lengths));
}

namespace {

std::string format_length(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Writes the clade spanning `side` (a set of taxa on the far side of one
// edge from the root vertex). `sides` is the laminar family of internal
// split sides not containing the root-adjacent taxon.
void write_clade(uint64_t side, double len, const Tree& x,
                 const std::vector<std::pair<uint64_t, double>>& sides,
                 std::string& out) {
  if (std::popcount(side) == 1) {
    int idx = std::countr_zero(side);
    out += x.taxa()->name(idx);
  } else {
    uint64_t remaining = side;
    std::vector<std::pair<uint64_t, double>> children;
    for (const auto& [s, l] : sides) {
      if (s != side && (s & ~side) == 0 && (s & remaining) == s) {
        // maximal iff not nested in another proper subset of `side`
        bool maximal = true;
        for (const auto& [t, l2] : sides)
          if (t != s && t != side && (t & ~side) == 0 && (s & ~t) == 0) {
            maximal = false;
            break;
          }
        if (maximal) {
          children.emplace_back(s, l);
          remaining &= ~s;
        }
      }
    }
    for (int i = 0; i < 64; ++i) {
      uint64_t bit = uint64_t{1} << i;
      if (bit > remaining) break;
      if (remaining & bit) children.emplace_back(bit, 0.0);
    }
    std::sort(children.begin(), children.end(),
              [](const auto& a, const auto& b) {
                return std::countr_zero(a.first) < std::countr_zero(b.first);
              });
    out += '(';
    for (size_t i = 0; i < children.size(); ++i) {
      if (i) out += ',';
      auto [s, l] = children[i];
      double clen = std::popcount(s) == 1
                        ? x.length(terminal_split(std::countr_zero(s), x.full_mask()))
                        : l;
      write_clade(s, clen, x, sides, out);
    }
    out += ')';
  }
  if (len >= 0.0) {
    out += ':';
    out += format_length(len);
  }
}

}  // namespace

std::string write_newick(const Tree& x) {
  const uint64_t full = x.full_mask();
  const int m = x.num_taxa();
  const uint64_t root_taxon = uint64_t{1} << (m - 1);

  // Sides of internal splits oriented away from the highest-index taxon;
  // this family is laminar, giving the rooted clade decomposition.
  std::vector<std::pair<uint64_t, double>> sides;
  for (const SplitLen& e : x.entries()) {
    Split p = Split::from_side(e.mask, full);
    if (p.is_terminal(full)) continue;
    uint64_t s = (e.mask & root_taxon) ? (~e.mask & full) : e.mask;
    sides.emplace_back(s, e.len);
  }

  std::string out;
  write_clade(full, -1.0, x, sides, out);
  out += ';';
  return out;
}

std::vector<Tree> parse_trees_text(const std::string& text, TaxonSetPtr taxa) {
  std::vector<Tree> trees;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') continue;
    try {
      trees.push_back(parse_newick(line, taxa));
      if (!taxa) taxa = trees.front().taxa();
    } catch (const Error& e) {
      throw Error(e.category(),
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

std::vector<Tree> read_trees_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_trees_text(ss.str(), nullptr);
  } catch (const Error& e) {
    throw Error(e.category(), path + ": " + e.what());
  }
}

}  // namespace treespace
