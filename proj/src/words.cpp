#include "invmon/words.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace invmon {

namespace {

struct SymbolTable {
  std::mutex mu;
  std::unordered_map<std::string, int> ids;
  std::deque<std::string> names;  // stable references on push_back
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

int intern_symbol(std::string_view name) {
  auto& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  int id = static_cast<int>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& symbol_name(int sym) {
  auto& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(static_cast<std::size_t>(sym));
}

std::string Letter::text() const {
  std::string s = symbol_name(symbol());
  if (is_inverse()) s += '\'';
  return s;
}

InvWord free_reduce(const InvWord& u) {
  InvWord out;
  out.reserve(u.size());
  for (Letter x : u) {
    if (!out.empty() && out.back() == x.inverse())
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

InvWord invert_word(const InvWord& u) {
  InvWord out;
  out.reserve(u.size());
  for (auto it = u.rbegin(); it != u.rend(); ++it) out.push_back(it->inverse());
  return out;
}

InvWord concat(const InvWord& u, const InvWord& v) {
  InvWord out = u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

InvWord parse_word(std::string_view text) {
  InvWord out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '1') {
      ++i;
      if (i < n && !std::isspace(static_cast<unsigned char>(text[i])))
        throw ParseError("unexpected character after empty-word token '1'", i);
      continue;
    }
    if (!ident_start(c)) throw ParseError(std::string("unexpected character '") + c + "'", i);
    while (i < n && ident_char(text[i])) ++i;
    std::string_view base = text.substr(start, i - start);
    bool inv = false;
    if (i < n && text[i] == '\'') {
      inv = true;
      ++i;
      if (i < n && text[i] == '\'') throw ParseError("double inverse mark", i);
    }
    if (i < n && !std::isspace(static_cast<unsigned char>(text[i])))
      throw ParseError(std::string("unexpected character '") + text[i] + "'", i);
    out.push_back(Letter::named(base, inv));
  }
  return out;
}

std::string format_word(const InvWord& u) {
  if (u.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ' ';
    s += u[i].text();
  }
  return s;
}

int Presentation::K() const {
  std::size_t k = 2;
  for (const auto& r : relations) k = std::max({k, r.lhs.size(), r.rhs.size()});
  return static_cast<int>(k);
}

bool Presentation::has_symbol(int sym) const {
  return std::find(alphabet.begin(), alphabet.end(), sym) != alphabet.end();
}

std::vector<Letter> Presentation::letters() const {
  std::vector<Letter> out;
  for (int s : alphabet) {
    out.push_back(Letter::make(s, false));
    out.push_back(Letter::make(s, true));
  }
  return out;
}

void Presentation::check_word(const InvWord& u) const {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!has_symbol(u[i].symbol()))
      throw ParseError("unknown letter '" + symbol_name(u[i].symbol()) + "'", i);
}

Presentation parse_presentation(std::string_view text) {
  Presentation p;
  bool have_letters = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::string body = line.substr(first);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
    try {
      if (body.rfind("letters:", 0) == 0) {
        if (have_letters) fail("duplicate letters line");
        InvWord ls = parse_word(body.substr(8));
        for (Letter x : ls) {
          if (x.is_inverse()) fail("inverse letter in alphabet declaration");
          if (!p.has_symbol(x.symbol())) p.alphabet.push_back(x.symbol());
        }
        have_letters = true;
      } else if (body.rfind("rel:", 0) == 0) {
        if (!have_letters) fail("relation before letters line");
        std::string rest = body.substr(4);
        auto eq = rest.find('=');
        if (eq == std::string::npos || rest.find('=', eq + 1) != std::string::npos)
          fail("relation needs exactly one '='");
        Relation r{parse_word(rest.substr(0, eq)), parse_word(rest.substr(eq + 1))};
        p.check_word(r.lhs);
        p.check_word(r.rhs);
        p.relations.push_back(std::move(r));
      } else {
        fail("expected 'letters:' or 'rel:'");
      }
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  if (!have_letters) throw std::runtime_error("presentation has no letters line");
  return p;
}

Presentation load_presentation(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_presentation(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string format_presentation(const Presentation& p) {
  std::string s = "letters:";
  for (int a : p.alphabet) s += " " + symbol_name(a);
  s += "\n";
  for (const auto& r : p.relations) s += "rel: " + format_word(r.lhs) + " = " + format_word(r.rhs) + "\n";
  return s;
}

Presentation make_presentation(const std::vector<std::string>& letters,
                               const std::vector<std::pair<std::string, std::string>>& rels) {
  Presentation p;
  for (const auto& l : letters) {
    int s = intern_symbol(l);
    if (!p.has_symbol(s)) p.alphabet.push_back(s);
  }
  for (const auto& [l, r] : rels) {
    Relation rel{parse_word(l), parse_word(r)};
    p.check_word(rel.lhs);
    p.check_word(rel.rhs);
    p.relations.push_back(std::move(rel));
  }
  return p;
}

}  // namespace invmon
