#include "fomod/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace fomod {

bool TreeModel::operator==(const TreeModel& o) const {
  if (nodes.size() != o.nodes.size()) return false;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].labels != o.nodes[i].labels || nodes[i].parent != o.nodes[i].parent ||
        nodes[i].children != o.nodes[i].children)
      return false;
  }
  return true;
}

TreeModel tree_from_parents(const std::vector<int>& parents,
                            const std::vector<LabelMask>& labels) {
  if (parents.size() != labels.size() || parents.empty())
    throw std::invalid_argument("parent and label vectors must be non-empty and equal-sized");
  TreeModel t;
  t.nodes.resize(parents.size());
  for (size_t i = 0; i < parents.size(); ++i) {
    t.nodes[i].labels = labels[i];
    t.nodes[i].parent = parents[i];
    if (i == 0) {
      if (parents[0] != -1) throw std::invalid_argument("node 0 must be the root");
    } else {
      if (parents[i] < 0 || static_cast<size_t>(parents[i]) >= i)
        throw std::invalid_argument("parents must precede children in index order");
      t.nodes[parents[i]].children.push_back(static_cast<int>(i));
    }
  }
  return t;
}

std::vector<std::string> validate_tree(const TreeModel& t) {
  std::vector<std::string> out;
  if (t.nodes.empty()) {
    out.push_back("tree has no nodes");
    return out;
  }
  if (t.nodes[0].parent != -1) out.push_back("node 0 is not a root");
  for (size_t i = 1; i < t.nodes.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p < 0 || static_cast<size_t>(p) >= t.nodes.size()) {
      out.push_back("node " + std::to_string(i) + " has an invalid parent");
      continue;
    }
    const auto& ch = t.nodes[p].children;
    if (std::find(ch.begin(), ch.end(), static_cast<int>(i)) == ch.end())
      out.push_back("node " + std::to_string(i) + " missing from its parent's child list");
  }
  size_t child_links = 0;
  for (const auto& n : t.nodes) child_links += n.children.size();
  if (child_links != t.nodes.size() - 1)
    out.push_back("child link count does not match node count");
  return out;
}

namespace {

std::string mask_to_braces(LabelMask m, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < sig.preds.size(); ++i) {
    if (m.test(i)) {
      if (!first) out += " ";
      out += sig.preds[i];
      first = false;
    }
  }
  out += "}";
  return out;
}

// Shared cursor over whitespace-insensitive token text.
struct Cursor {
  const std::string& s;
  size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    if (pos >= s.size()) throw ModelReadError("unexpected end of model text");
    return s[pos];
  }
  void expect(char c) {
    if (peek() != c)
      throw ModelReadError(std::string("expected '") + c + "' in model text");
    ++pos;
  }
  std::string ident() {
    skip_ws();
    std::string out;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
      out += s[pos];
      ++pos;
    }
    if (out.empty()) throw ModelReadError("expected a predicate name in model text");
    return out;
  }
};

LabelMask read_braces(Cursor& c, const Signature& sig) {
  c.expect('{');
  LabelMask m = 0;
  while (c.peek() != '}') {
    std::string name = c.ident();
    int idx = sig.index_of(name);
    if (idx < 0) throw ModelReadError("unknown predicate " + name + " in model");
    m.set(static_cast<size_t>(idx));
  }
  c.expect('}');
  return m;
}

int read_tree_term(Cursor& c, const Signature& sig, TreeModel& t, int parent) {
  c.expect('(');
  int idx = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  t.nodes[idx].parent = parent;
  t.nodes[idx].labels = read_braces(c, sig);
  while (c.peek() == '(') {
    int child = read_tree_term(c, sig, t, idx);
    t.nodes[idx].children.push_back(child);
  }
  c.expect(')');
  return idx;
}

}  // namespace

std::string word_to_text(const WordModel& m, const Signature& sig) {
  std::string out;
  for (LabelMask pos : m.positions) {
    out += mask_to_braces(pos, sig);
    out += "\n";
  }
  return out;
}

WordModel word_from_text(const std::string& text, const Signature& sig) {
  Cursor c{text};
  WordModel m;
  while (!c.done()) m.positions.push_back(read_braces(c, sig));
  if (m.positions.empty()) throw ModelReadError("word model must have at least one position");
  return m;
}

std::string tree_to_text(const TreeModel& m, const Signature& sig) {
  if (m.nodes.empty()) throw std::invalid_argument("tree model must have at least one node");
  std::string out;
  std::function<void(int)> emit = [&](int v) {
    out += "(";
    out += mask_to_braces(m.nodes[v].labels, sig);
    for (int c : m.nodes[v].children) {
      out += " ";
      emit(c);
    }
    out += ")";
  };
  emit(0);
  out += "\n";
  return out;
}

TreeModel tree_from_text(const std::string& text, const Signature& sig) {
  Cursor c{text};
  TreeModel t;
  read_tree_term(c, sig, t, -1);
  if (!c.done()) throw ModelReadError("trailing content after tree term");
  // The recursive reader assigns preorder indices by construction.
  return t;
}

std::string word_inline(const WordModel& m, const Signature& sig) {
  std::string out;
  for (size_t i = 0; i < m.positions.size(); ++i) {
    if (i) out += " ";
    out += mask_to_braces(m.positions[i], sig);
  }
  return out;
}

std::string tree_inline(const TreeModel& m, const Signature& sig) {
  std::string out = tree_to_text(m, sig);
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

}  // namespace fomod
