#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dgen/udtree.hpp"

namespace dgen {

// Dependency parses supplied by an external parser.
//
// Layout of a parses directory:
//   texts.conllu    sentence blocks of every base text, grouped under
//                   `# newdoc id = <text id>`, each with a code point span
//                   (`# char_span = s e` or start_char/end_char in MISC)
//   phrases.conllu  one block per phrase (key, reference or generated
//                   distractor) tagged `# phrase = <exact surface>`; a
//                   phrase whose parse spans several blocks is kept as
//                   unparseable
class ParseBank {
 public:
  void add_text_sentences(std::istream& in, std::string_view source = "<texts>");
  void add_phrases(std::istream& in, std::string_view source = "<phrases>");

  static ParseBank load_dir(const std::filesystem::path& dir);

  // Empty when the text has no parses.
  const std::vector<DepTree>& sentences(std::string_view text_id) const;

  // nullptr when the phrase is missing or did not parse into one tree.
  const DepTree* phrase(std::string_view surface) const;
  bool has_phrase_entry(std::string_view surface) const;

  std::size_t text_count() const { return texts_.size(); }
  std::size_t phrase_count() const { return phrases_.size(); }

 private:
  struct PhraseEntry {
    std::vector<DepTree> blocks;
  };

  std::map<std::string, std::vector<DepTree>, std::less<>> texts_;
  std::map<std::string, PhraseEntry, std::less<>> phrases_;
};

}  // namespace dgen
