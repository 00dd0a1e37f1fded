#include "epd/newick.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace epd {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_structural(char c) {
  return c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' ||
         c == ']' || c == '\'';
}

struct Parser {
  std::string_view s;
  size_t pos = 0;
  int line = 1, col = 1;

  std::vector<NodeId> parent;
  std::vector<double> length;
  std::vector<char> has_length;
  std::vector<char> leaf;
  std::vector<std::string> name;

  [[noreturn]] void err(const std::string& msg) const { throw ParseError(msg, line, col); }

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  void advance() {
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_trivia() {
    while (!eof()) {
      const char c = peek();
      if (is_space(c)) {
        advance();
      } else if (c == '[') {
        const int l = line, k = col;
        advance();
        while (!eof() && peek() != ']') advance();
        if (eof()) throw ParseError("unterminated '[' comment", l, k);
        advance();
      } else {
        break;
      }
    }
  }

  NodeId new_node(NodeId par, bool is_leaf) {
    parent.push_back(par);
    length.push_back(0.0);
    has_length.push_back(0);
    leaf.push_back(is_leaf ? 1 : 0);
    name.emplace_back();
    return static_cast<NodeId>(parent.size() - 1);
  }

  // Bare or quoted label; empty string when the next character starts no label.
  std::string read_label() {
    skip_trivia();
    if (eof()) return {};
    std::string out;
    if (peek() == '\'') {
      advance();
      while (true) {
        if (eof()) err("unterminated quoted label");
        const char c = peek();
        advance();
        if (c != '\'') {
          out.push_back(c);
        } else if (!eof() && peek() == '\'') {
          out.push_back('\'');
          advance();
        } else {
          return out;
        }
      }
    }
    while (!eof() && !is_space(peek()) && !is_structural(peek())) {
      out.push_back(peek());
      advance();
    }
    return out;
  }

  double read_length() {
    skip_trivia();
    const size_t start = pos;
    const int l = line, k = col;
    while (!eof()) {
      const char c = peek();
      if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' || c == 'e' ||
          c == 'E') {
        advance();
      } else {
        break;
      }
    }
    if (pos == start) err("expected a branch length after ':'");
    double v = 0.0;
    const auto res = std::from_chars(s.data() + start, s.data() + pos, v);
    if (res.ec != std::errc{} || res.ptr != s.data() + pos)
      throw ParseError("malformed branch length '" +
                           std::string(s.substr(start, pos - start)) + "'",
                       l, k);
    return v;
  }
};

}  // namespace

Phylogeny parse_newick(std::string_view text) {
  Parser p{text};
  std::vector<NodeId> open;   // '(' groups still awaiting their ')'
  NodeId last = kNoNode;      // most recently completed subtree
  bool expect_subtree = true;
  bool done = false;
  while (!done) {
    p.skip_trivia();
    if (p.eof()) p.err(p.parent.empty() ? "empty input" : "unexpected end of input, missing ';'");
    if (expect_subtree) {
      const NodeId par = open.empty() ? kNoNode : open.back();
      if (p.peek() == '(') {
        open.push_back(p.new_node(par, false));
        p.advance();
      } else {
        std::string label = p.read_label();
        if (label.empty()) p.err("expected '(' or a leaf label");
        last = p.new_node(par, true);
        p.name[static_cast<size_t>(last)] = std::move(label);
        expect_subtree = false;
      }
      continue;
    }
    switch (p.peek()) {
      case ':': {
        if (p.has_length[static_cast<size_t>(last)]) p.err("second ':' on one arc");
        p.advance();
        p.length[static_cast<size_t>(last)] = p.read_length();
        p.has_length[static_cast<size_t>(last)] = 1;
        break;
      }
      case ',': {
        if (open.empty()) p.err("',' outside parentheses");
        if (!p.has_length[static_cast<size_t>(last)])
          p.err("missing branch length before ','");
        p.advance();
        expect_subtree = true;
        break;
      }
      case ')': {
        if (open.empty()) p.err("unmatched ')'");
        if (!p.has_length[static_cast<size_t>(last)])
          p.err("missing branch length before ')'");
        p.advance();
        last = open.back();
        open.pop_back();
        p.name[static_cast<size_t>(last)] = p.read_label();
        break;
      }
      case ';': {
        if (!open.empty()) p.err("unmatched '('");
        if (p.has_length[static_cast<size_t>(last)] &&
            p.length[static_cast<size_t>(last)] != 0.0)
          p.err("the root has no incoming arc; only ':0' is accepted here");
        p.length[static_cast<size_t>(last)] = 0.0;
        p.advance();
        done = true;
        break;
      }
      default:
        p.err(std::string("unexpected character '") + p.peek() + "'");
    }
  }
  p.skip_trivia();
  if (!p.eof()) p.err("text continues after ';'");

  std::vector<std::string> leaf_labels;
  for (size_t v = 0; v < p.parent.size(); ++v)
    if (p.leaf[v]) leaf_labels.push_back(p.name[v]);
  return build_tree(p.parent, p.length, std::move(leaf_labels), std::move(p.name));
}

Phylogeny read_newick_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error while reading '" + path + "'");
  return parse_newick(buf.str());
}

namespace {

void check_writable(const std::string& text, const char* what) {
  for (const char c : text)
    if (is_space(c) || is_structural(c))
      throw std::invalid_argument(std::string(what) + " '" + text +
                                  "' contains a character reserved by the format");
}

void append_length(std::string& out, double len) {
  char buf[64];
  std::snprintf(buf, sizeof buf, ":%.17g", len);
  out += buf;
}

}  // namespace

std::string write_newick(const Phylogeny& tree) {
  const size_t n = static_cast<size_t>(tree.n_nodes());
  // Smallest leaf label below each node; fixes the canonical child order.
  std::vector<const std::string*> min_label(n, nullptr);
  for (const NodeId v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      const std::string& l = tree.label(tree.species_of(v));
      check_writable(l, "leaf label");
      min_label[static_cast<size_t>(v)] = &l;
    } else {
      if (!tree.node_name(v).empty()) check_writable(tree.node_name(v), "node name");
      for (const NodeId c : tree.children(v)) {
        const std::string* cand = min_label[static_cast<size_t>(c)];
        if (!min_label[static_cast<size_t>(v)] || *cand < *min_label[static_cast<size_t>(v)])
          min_label[static_cast<size_t>(v)] = cand;
      }
    }
  }

  const auto sorted_children = [&](NodeId v) {
    std::vector<NodeId> kids(tree.children(v).begin(), tree.children(v).end());
    std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
      return *min_label[static_cast<size_t>(a)] < *min_label[static_cast<size_t>(b)];
    });
    return kids;
  };

  struct Frame {
    NodeId v;
    std::vector<NodeId> kids;
    size_t next = 0;
  };
  std::string out;
  std::vector<Frame> stack;
  stack.push_back({tree.root(), sorted_children(tree.root())});
  out += '(';
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.kids.size()) {
      const NodeId c = f.kids[f.next++];
      if (f.next > 1) out += ',';
      if (tree.is_leaf(c)) {
        out += tree.label(tree.species_of(c));
        append_length(out, tree.branch_length(c));
      } else {
        out += '(';
        stack.push_back({c, sorted_children(c)});
      }
    } else {
      out += ')';
      out += tree.node_name(f.v);
      const NodeId v = f.v;
      stack.pop_back();
      if (v != tree.root()) append_length(out, tree.branch_length(v));
    }
  }
  out += ";\n";
  return out;
}

void write_newick_file(const Phylogeny& tree, const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot open '" + path + "' for writing");
  outf << write_newick(tree);
  if (!outf.flush()) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace epd
