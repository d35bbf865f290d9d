#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dgen/udtree.hpp"

namespace dgen {

enum class GrctKind { gr, pos, lex };

// Grammatical Relation Centered Tree: every token becomes a GR node
// (its deprel) whose children are the GR nodes of its dependents plus its
// own POS node, in surface order; the POS node optionally carries the word
// form as a LEX leaf.
struct GrctNode {
  GrctKind kind = GrctKind::gr;
  std::string label;
  std::vector<GrctNode> children;

  // The default-constructed node stands for the empty tree.
  bool empty() const { return label.empty() && children.empty(); }
  std::size_t node_count() const;

  bool operator==(const GrctNode&) const = default;
};

GrctNode to_grct(const DepTree& tree, bool include_lexicals);

// Same transform restricted to a subtree. When `root_deprel` is non-empty
// the subtree root's GR label is replaced by it (e.g. "root", so that an
// extracted phrase is comparable with a standalone parse).
GrctNode to_grct(const DepSubtree& sub, bool include_lexicals, std::string_view root_deprel = {});

// `(root (nsubj (NOUN (hunden))) (VERB (springer)))`. Parentheses, spaces
// and backslashes inside labels are backslash-escaped.
std::string to_bracketed(const GrctNode& node);

// Inverse of to_bracketed. Node kinds are inferred from shape: with
// lexicals, leaves are LEX and their parents POS; without, leaves are POS.
// Everything else is GR. Throws ParseError on malformed input.
GrctNode parse_bracketed(std::string_view s, bool with_lexicals);

}  // namespace dgen
