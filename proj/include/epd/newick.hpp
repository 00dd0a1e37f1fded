#pragma once
// Newick tree interchange: parser and canonical writer.

#include <stdexcept>
#include <string>
#include <string_view>

#include "epd/phylogeny.hpp"

namespace epd {

// Syntax error with the 1-based line/column of the offending character;
// what() carries the position in readable form.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Parses one Newick tree: nested parentheses, `label:length` arcs, and a
// terminating semicolon. Whitespace and bracketed `[...]` comments are
// skipped between tokens. Labels are bare (no `(),:;[]'` or whitespace) or
// single-quoted with `''` escaping the quote. Internal node labels are
// optional and preserved as node names. Every non-root arc must carry a
// `:length`; a trailing length on the root itself is accepted only when it
// is 0 (the root has no incoming arc) and is dropped.
// Throws ParseError on syntax errors and std::invalid_argument when the
// described tree is structurally invalid (duplicate labels, unary nodes,
// negative lengths).
Phylogeny parse_newick(std::string_view text);

// Reads and parses a Newick file. Throws std::runtime_error when the file
// cannot be read.
Phylogeny read_newick_file(const std::string& path);

// Canonical Newick form: children ordered by their smallest contained leaf
// label (bytewise), lengths printed with up to 17 significant digits so a
// reparse restores every double bit-exactly, terminated by ";\n". Any two
// isomorphic trees with equal labels, names, and lengths print identically,
// regardless of the child order they were built with. Labels or node names
// containing structural characters `(),:;[]'` or whitespace are rejected
// with std::invalid_argument.
std::string write_newick(const Phylogeny& tree);

// write_newick straight to a file. Throws std::runtime_error on I/O failure.
void write_newick_file(const Phylogeny& tree, const std::string& path);

}  // namespace epd
