#include <string>
#include <vector>

#include "syge/common.hpp"
#include "syge/detail/gzline.hpp"
#include "syge/ingest.hpp"

namespace syge {

using detail::GzLineReader;

namespace {

void ascii_lower(std::string& s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
}

// token id column: plain integer is a word; ranges (1-2) and empty nodes (1.1)
// are annotation layers we skip
bool is_plain_index(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (c < '0' || c > '9') return false;
  return true;
}

struct PendingToken {
  std::string form;
  int64_t head = 0;  // 0 = sentence root
  std::string deprel;
};

}  // namespace

void read_conllu(const std::string& path, const std::function<void(const DependencyArc&)>& sink) {
  GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  int64_t sentence_id = 0;

  // forms indexed by token id (1-based); arcs resolve heads at sentence end
  std::vector<std::string> forms{""};
  std::vector<PendingToken> tokens;

  auto flush_sentence = [&]() {
    if (tokens.empty()) {
      forms.assign(1, "");
      return;
    }
    for (const auto& tok : tokens) {
      if (tok.head == 0) continue;
      if (tok.head < 0 || static_cast<size_t>(tok.head) >= forms.size())
        throw io_error(path + ": sentence ending before line " + std::to_string(line_no) +
                       " references head index " + std::to_string(tok.head) +
                       " beyond its tokens");
      sink(DependencyArc{forms[static_cast<size_t>(tok.head)], tok.deprel, tok.form, sentence_id});
    }
    ++sentence_id;
    forms.assign(1, "");
    tokens.clear();
  };

  std::vector<std::string> cols;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty()) {
      flush_sentence();
      continue;
    }
    if (line[0] == '#') continue;

    cols.clear();
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() != 10)
      throw io_error(path + ": malformed line " + std::to_string(line_no) + ": expected 10 columns, got " +
                     std::to_string(cols.size()));

    if (!is_plain_index(cols[0]) || cols[0].size() > 9) continue;  // multiword range or empty node

    PendingToken tok;
    tok.form = cols[1];
    ascii_lower(tok.form);
    const std::string& head = cols[6];
    if (!is_plain_index(head) || head.size() > 9)
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": HEAD must be a small non-negative integer, got '" + head + "'");
    tok.head = std::stoll(head);
    tok.deprel = cols[7];
    if (tok.deprel.empty() || tok.deprel == "_")
      throw io_error(path + ": malformed line " + std::to_string(line_no) + ": empty DEPREL");

    const size_t idx = std::stoull(cols[0]);
    if (forms.size() <= idx) forms.resize(idx + 1);
    forms[idx] = tok.form;
    tokens.push_back(std::move(tok));
  }
  flush_sentence();
}

std::vector<DependencyArc> read_conllu(const std::string& path) {
  std::vector<DependencyArc> arcs;
  read_conllu(path, [&](const DependencyArc& a) { arcs.push_back(a); });
  return arcs;
}

}  // namespace syge
