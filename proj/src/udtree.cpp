#include "dgen/udtree.hpp"

#include <algorithm>
#include <map>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "dgen/error.hpp"

namespace dgen {

namespace {

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<std::size_t> misc_value(std::string_view misc, std::string_view key) {
  if (misc == "_") return std::nullopt;
  for (auto item : split_on(misc, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || item.substr(0, eq) != key) continue;
    if (auto v = to_int(item.substr(eq + 1)); v && *v >= 0) return static_cast<std::size_t>(*v);
  }
  return std::nullopt;
}

}  // namespace

FeatureSet parse_feats(std::string_view column) {
  FeatureSet feats;
  if (column.empty() || column == "_") return feats;
  for (auto item : split_on(column, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("malformed feature '" + std::string(item) + "'");
    feats.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  std::sort(feats.begin(), feats.end());
  for (std::size_t i = 1; i < feats.size(); ++i)
    if (feats[i].first == feats[i - 1].first) throw ParseError("duplicate feature '" + feats[i].first + "'");
  return feats;
}

std::string format_feats(const FeatureSet& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [k, v] : feats) {
    if (!out.empty()) out.push_back('|');
    out += k + "=" + v;
  }
  return out;
}

DepTree::DepTree(std::vector<UdToken> tokens) : tokens_(std::move(tokens)) {
  const auto n = static_cast<int>(tokens_.size());
  if (n == 0) throw ParseError("empty dependency tree");
  children_.assign(tokens_.size() + 1, {});
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const UdToken& t = tokens_[static_cast<std::size_t>(i - 1)];
    if (t.index != i) throw ParseError("token ids must run 1.." + std::to_string(n) + ", got " + std::to_string(t.index));
    if (t.head < 0 || t.head > n) throw ParseError("token " + std::to_string(i) + " has out-of-range head");
    if (t.head == i) throw ParseError("token " + std::to_string(i) + " is its own head");
    if (t.deprel.empty() || t.deprel == "_") throw ParseError("token " + std::to_string(i) + " has no deprel");
    if (t.head == 0) {
      ++roots;
      root_ = i;
    }
    children_[static_cast<std::size_t>(t.head)].push_back(i);
  }
  if (roots != 1) throw ParseError("tree must have exactly one root, found " + std::to_string(roots));
  // every token must reach the root; a cycle never does
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw ParseError("cyclic head links at token " + std::to_string(i));
      cur = tokens_[static_cast<std::size_t>(cur - 1)].head;
    }
  }
}

std::string DepTree::surface() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out.push_back(' ');
    out += t.form;
  }
  return out;
}

std::vector<DepTree> parse_conllu(std::istream& in, std::string_view source) {
  std::vector<DepTree> trees;
  std::optional<std::string> doc_id;

  struct Pending {
    std::vector<UdToken> tokens;
    std::optional<std::string> text, sent_id;
    std::optional<CharSpan> span;
    std::map<std::string, std::string> metadata;
    std::size_t first_line = 0;
  } cur;

  std::size_t sentence_no = 0;
  auto where = [&](std::size_t line) {
    std::string w = std::string(source) + ": sentence " + std::to_string(sentence_no + 1);
    if (cur.sent_id) w += " (" + *cur.sent_id + ")";
    return w + ", line " + std::to_string(line);
  };

  auto flush = [&]() {
    if (cur.tokens.empty()) {
      if (cur.text || cur.sent_id) throw ParseError(where(cur.first_line) + ": sentence has no tokens");
      cur = {};
      return;
    }
    try {
      DepTree tree(std::move(cur.tokens));
      tree.text = std::move(cur.text);
      tree.sent_id = std::move(cur.sent_id);
      tree.doc_id = doc_id;
      tree.span = cur.span;
      tree.metadata = std::move(cur.metadata);
      if (!tree.span) {
        const auto s = misc_value(tree.tokens().front().misc, "start_char");
        const auto e = misc_value(tree.tokens().back().misc, "end_char");
        if (s && e && *s <= *e) tree.span = CharSpan{*s, *e};
      }
      trees.push_back(std::move(tree));
    } catch (const ParseError& e) {
      throw ParseError(where(cur.first_line) + ": " + e.what());
    }
    ++sentence_no;
    cur = {};
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (cur.first_line == 0) cur.first_line = lineno;
    if (line[0] == '#') {
      std::string_view body = trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      const std::string_view key = trim(body.substr(0, eq));
      const std::string_view value = eq == std::string_view::npos ? std::string_view{} : trim(body.substr(eq + 1));
      if (eq != std::string_view::npos && !key.empty()) cur.metadata[std::string(key)] = std::string(value);
      if (key == "text") {
        cur.text = std::string(value);
      } else if (key == "sent_id") {
        cur.sent_id = std::string(value);
      } else if (key == "newdoc id" || key == "newdoc") {
        doc_id = value.empty() ? std::nullopt : std::optional<std::string>(value);
      } else if (key == "char_span") {
        std::istringstream ss{std::string(value)};
        CharSpan s;
        if (!(ss >> s.start >> s.end) || s.end < s.start) throw ParseError(where(lineno) + ": malformed char_span");
        cur.span = s;
      }
      continue;
    }
    const auto cols = split_on(line, '\t');
    if (cols.size() != 10)
      throw ParseError(where(lineno) + ": expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) continue;
    UdToken t;
    const auto id = to_int(cols[0]);
    if (!id) throw ParseError(where(lineno) + ": non-integer token id '" + std::string(cols[0]) + "'");
    const auto head = to_int(cols[6]);
    if (!head) throw ParseError(where(lineno) + ": non-integer head '" + std::string(cols[6]) + "'");
    t.index = static_cast<int>(*id);
    t.form = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    t.xpos = std::string(cols[4]);
    try {
      t.feats = parse_feats(cols[5]);
    } catch (const ParseError& e) {
      throw ParseError(where(lineno) + ": " + e.what());
    }
    t.head = static_cast<int>(*head);
    t.deprel = std::string(cols[7]);
    t.misc = std::string(cols[9]);
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return trees;
}

std::vector<DepTree> parse_conllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in);
}

void write_conllu(std::ostream& out, const DepTree& tree) {
  if (tree.sent_id) out << "# sent_id = " << *tree.sent_id << '\n';
  if (tree.text) out << "# text = " << *tree.text << '\n';
  if (tree.span) out << "# char_span = " << tree.span->start << ' ' << tree.span->end << '\n';
  for (const auto& t : tree.tokens()) {
    out << t.index << '\t' << t.form << '\t' << (t.lemma.empty() ? "_" : t.lemma) << '\t' << t.upos << '\t'
        << (t.xpos.empty() ? "_" : t.xpos) << '\t' << format_feats(t.feats) << '\t' << t.head << '\t' << t.deprel
        << "\t_\t" << (t.misc.empty() ? "_" : t.misc) << '\n';
  }
  out << '\n';
}

DepSubtree make_subtree(const DepTree& tree, int root_index) {
  DepSubtree sub{&tree, root_index, {}};
  std::vector<int> stack{root_index};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    sub.members.push_back(i);
    for (int c : tree.children(i)) stack.push_back(c);
  }
  std::sort(sub.members.begin(), sub.members.end());
  return sub;
}

namespace {

bool feats_match(const FeatureSet& have, const FeatureSet& query, FeatMatch mode) {
  if (mode == FeatMatch::exact) return have == query;
  return std::includes(have.begin(), have.end(), query.begin(), query.end());
}

}  // namespace

std::vector<DepSubtree> subtrees_matching(const DepTree& tree, std::string_view upos, const FeatureSet& feats,
                                          FeatMatch mode) {
  std::vector<DepSubtree> out;
  for (const auto& t : tree.tokens())
    if (t.upos == upos && feats_match(t.feats, feats, mode)) out.push_back(make_subtree(tree, t.index));
  return out;
}

std::string subtree_text(const DepSubtree& sub) {
  std::string out;
  for (int i : sub.members) {
    if (!out.empty()) out.push_back(' ');
    out += sub.tree->token(i).form;
  }
  return out;
}

}  // namespace dgen
