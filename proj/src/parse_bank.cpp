#include "dgen/parse_bank.hpp"

#include <fstream>

#include "dgen/error.hpp"
#include "dgen/text.hpp"

namespace dgen {

void ParseBank::add_text_sentences(std::istream& in, std::string_view source) {
  for (auto& tree : parse_conllu(in, source)) {
    if (!tree.doc_id) throw ParseError(std::string(source) + ": sentence outside any '# newdoc id' block");
    const std::string id = *tree.doc_id;
    texts_[id].push_back(std::move(tree));
  }
}

void ParseBank::add_phrases(std::istream& in, std::string_view source) {
  for (auto& tree : parse_conllu(in, source)) {
    auto it = tree.metadata.find("phrase");
    std::string key;
    if (it != tree.metadata.end()) {
      key = it->second;
    } else if (tree.text) {
      key = *tree.text;
    } else {
      throw ParseError(std::string(source) + ": phrase block without '# phrase' or '# text'");
    }
    phrases_[text::collapse_whitespace(key)].blocks.push_back(std::move(tree));
  }
}

ParseBank ParseBank::load_dir(const std::filesystem::path& dir) {
  ParseBank bank;
  const auto texts = dir / "texts.conllu";
  const auto phrases = dir / "phrases.conllu";
  if (!std::filesystem::exists(texts) && !std::filesystem::exists(phrases))
    throw ParseError("parses directory " + dir.string() + " has neither texts.conllu nor phrases.conllu");
  if (std::ifstream in(texts); in) bank.add_text_sentences(in, texts.string());
  if (std::ifstream in(phrases); in) bank.add_phrases(in, phrases.string());
  return bank;
}

const std::vector<DepTree>& ParseBank::sentences(std::string_view text_id) const {
  static const std::vector<DepTree> none;
  auto it = texts_.find(text_id);
  return it == texts_.end() ? none : it->second;
}

const DepTree* ParseBank::phrase(std::string_view surface) const {
  auto it = phrases_.find(text::collapse_whitespace(surface));
  if (it == phrases_.end() || it->second.blocks.size() != 1) return nullptr;
  return &it->second.blocks.front();
}

bool ParseBank::has_phrase_entry(std::string_view surface) const {
  return phrases_.find(text::collapse_whitespace(surface)) != phrases_.end();
}

}  // namespace dgen
