#include "dgen/grct.hpp"

#include <algorithm>

#include "dgen/error.hpp"

namespace dgen {

std::size_t GrctNode::node_count() const {
  if (empty()) return 0;
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

namespace {

GrctNode build(const DepTree& tree, int index, bool lex, const std::vector<int>* allowed, std::string_view root_deprel,
               bool is_root) {
  const UdToken& t = tree.token(index);
  GrctNode gr{GrctKind::gr, is_root && !root_deprel.empty() ? std::string(root_deprel) : t.deprel, {}};
  GrctNode pos{GrctKind::pos, t.upos, {}};
  if (lex) pos.children.push_back(GrctNode{GrctKind::lex, t.form, {}});

  bool pos_placed = false;
  for (int c : tree.children(index)) {
    if (allowed && !std::binary_search(allowed->begin(), allowed->end(), c)) continue;
    if (!pos_placed && c > index) {
      gr.children.push_back(pos);
      pos_placed = true;
    }
    gr.children.push_back(build(tree, c, lex, allowed, root_deprel, false));
  }
  if (!pos_placed) gr.children.push_back(std::move(pos));
  return gr;
}

}  // namespace

GrctNode to_grct(const DepTree& tree, bool include_lexicals) {
  return build(tree, tree.root(), include_lexicals, nullptr, {}, true);
}

GrctNode to_grct(const DepSubtree& sub, bool include_lexicals, std::string_view root_deprel) {
  return build(*sub.tree, sub.root_index, include_lexicals, &sub.members, root_deprel, true);
}

namespace {

void escape_into(std::string& out, std::string_view label) {
  for (char c : label) {
    if (c == '(' || c == ')' || c == ' ' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
}

void bracket_into(std::string& out, const GrctNode& n) {
  out.push_back('(');
  escape_into(out, n.label);
  for (const auto& c : n.children) {
    out.push_back(' ');
    bracket_into(out, c);
  }
  out.push_back(')');
}

class BracketParser {
 public:
  explicit BracketParser(std::string_view s) : s_(s) {}

  GrctNode parse() {
    skip_ws();
    GrctNode n = node();
    skip_ws();
    if (i_ != s_.size()) fail("trailing input");
    return n;
  }

 private:
  GrctNode node() {
    if (i_ >= s_.size() || s_[i_] != '(') fail("expected '('");
    ++i_;
    GrctNode n;
    n.label = label();
    if (n.label.empty()) fail("empty label");
    while (true) {
      skip_ws();
      if (i_ >= s_.size()) fail("unbalanced parentheses");
      if (s_[i_] == ')') {
        ++i_;
        return n;
      }
      n.children.push_back(node());
    }
  }

  std::string label() {
    std::string out;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\\') {
        if (i_ + 1 >= s_.size()) fail("dangling escape");
        out.push_back(s_[i_ + 1]);
        i_ += 2;
        continue;
      }
      if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n') break;
      out.push_back(c);
      ++i_;
    }
    return out;
  }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("bracketed tree, offset " + std::to_string(i_) + ": " + what);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

void assign_kinds(GrctNode& n, bool with_lexicals) {
  if (n.children.empty()) {
    n.kind = with_lexicals ? GrctKind::lex : GrctKind::pos;
    return;
  }
  if (with_lexicals && n.children.size() == 1 && n.children.front().children.empty()) {
    n.kind = GrctKind::pos;
    n.children.front().kind = GrctKind::lex;
    return;
  }
  n.kind = GrctKind::gr;
  for (auto& c : n.children) assign_kinds(c, with_lexicals);
}

}  // namespace

std::string to_bracketed(const GrctNode& node) {
  if (node.empty()) return "()";
  std::string out;
  bracket_into(out, node);
  return out;
}

GrctNode parse_bracketed(std::string_view s, bool with_lexicals) {
  GrctNode n = BracketParser(s).parse();
  assign_kinds(n, with_lexicals);
  // the top node is a GR node even when it is a single leaf
  if (n.children.empty()) n.kind = GrctKind::gr;
  return n;
}

}  // namespace dgen
