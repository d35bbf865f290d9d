#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgen {

// Sorted attribute=value pairs with unique attributes.
using FeatureSet = std::vector<std::pair<std::string, std::string>>;

FeatureSet parse_feats(std::string_view column);
std::string format_feats(const FeatureSet& feats);

struct UdToken {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  FeatureSet feats;
  int head = 0;  // 0 = root
  std::string deprel;
  std::string misc;
};

// Half-open code point span into the source document.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool overlaps(const CharSpan& o) const { return start < o.end && o.start < end; }
};

class DepTree {
 public:
  // Validates the tree (single root, acyclic, heads in range); throws
  // ParseError otherwise.
  explicit DepTree(std::vector<UdToken> tokens);

  const std::vector<UdToken>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  int root() const { return root_; }
  const UdToken& token(int index) const { return tokens_.at(static_cast<std::size_t>(index - 1)); }
  // Dependents of `index` in surface order; index 0 yields the root.
  const std::vector<int>& children(int index) const { return children_.at(static_cast<std::size_t>(index)); }

  // `# text`, `# sent_id` and the enclosing `# newdoc id`, when present.
  std::optional<std::string> text;
  std::optional<std::string> sent_id;
  std::optional<std::string> doc_id;
  // From `# char_span = <start> <end>` or the tokens' start_char/end_char MISC.
  std::optional<CharSpan> span;
  // Every `# key = value` comment of the sentence block.
  std::map<std::string, std::string> metadata;

  // Surface forms joined by single spaces.
  std::string surface() const;

 private:
  std::vector<UdToken> tokens_;
  std::vector<std::vector<int>> children_;
  int root_ = 0;
};

struct DepSubtree {
  const DepTree* tree = nullptr;
  int root_index = 0;
  std::vector<int> members;  // ascending
};

// Reads CoNLL-U. Multiword ranges and empty nodes are skipped; errors name
// the sentence and line.
std::vector<DepTree> parse_conllu(std::istream& in, std::string_view source = "<stream>");
std::vector<DepTree> parse_conllu(std::string_view text);

void write_conllu(std::ostream& out, const DepTree& tree);

DepSubtree make_subtree(const DepTree& tree, int root_index);

enum class FeatMatch { exact, subset };

// Subtrees whose root has the given UPOS and features, in surface order of
// their roots. `subset` accepts roots whose features include the query's.
std::vector<DepSubtree> subtrees_matching(const DepTree& tree, std::string_view upos, const FeatureSet& feats,
                                          FeatMatch mode = FeatMatch::exact);

std::string subtree_text(const DepSubtree& sub);

}  // namespace dgen
