#include "gq3/presparse.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gq3/errors.hpp"
#include "gq3/exactlin.hpp"

namespace gq3 {

Word Word::gen(int index) {
  Word w;
  w.kind = Kind::Generator;
  w.generator = index;
  return w;
}

Word Word::inverse(Word x) {
  Word w;
  w.kind = Kind::Inverse;
  w.children.push_back(std::move(x));
  return w;
}

Word Word::power(Word x, std::int64_t e) {
  Word w;
  w.kind = Kind::Power;
  w.exponent = e;
  w.children.push_back(std::move(x));
  return w;
}

Word Word::product(std::vector<Word> factors) {
  Word w;
  w.kind = Kind::Product;
  w.children = std::move(factors);
  return w;
}

Word Word::commutator(Word a, Word b) {
  Word w;
  w.kind = Kind::Commutator;
  w.children.push_back(std::move(a));
  w.children.push_back(std::move(b));
  return w;
}

int Presentation::generator_index(std::string_view name) const {
  for (int i = 0; i < n(); ++i)
    if (generators[i] == name) return i;
  return -1;
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Character cursor with 1-based line/column bookkeeping. Words embedded in a
// string literal start at the literal's position so errors point into the file.
class Cursor {
 public:
  Cursor(std::string_view s, int line = 1, int col = 1) : s_(s), line_(line), col_(col) {}

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  int line() const { return line_; }
  int col() const { return col_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void skip_space(bool comments) {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (comments && c == '#') {
        while (!eof() && peek() != '\n') get();
      } else {
        break;
      }
    }
  }

  std::string name() {
    if (!is_name_start(peek())) fail("expected a name");
    std::string out;
    while (!eof() && is_name_char(peek())) out += get();
    return out;
  }

  std::int64_t integer(bool allow_sign) {
    bool neg = false;
    if (allow_sign && (peek() == '-' || peek() == '+')) neg = get() == '-';
    if (!is_digit(peek())) fail("expected an integer");
    // accumulate as negative to reach INT64_MIN
    std::int64_t v = 0;
    while (!eof() && is_digit(peek())) {
      int digit = get() - '0';
      if (v < (std::numeric_limits<std::int64_t>::min() + digit) / 10) fail("integer out of 64-bit range");
      v = v * 10 - digit;
    }
    if (!neg) {
      if (v == std::numeric_limits<std::int64_t>::min()) fail("integer out of 64-bit range");
      v = -v;
    }
    return v;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  int col_;
};

class WordParser {
 public:
  WordParser(Cursor& cur, const std::vector<std::string>& names) : cur_(cur), names_(names) {}

  Word top() {
    cur_.skip_space(false);
    Word w = word();
    cur_.skip_space(false);
    if (!cur_.eof()) cur_.fail(std::string("unexpected '") + cur_.peek() + "'");
    return w;
  }

 private:
  static bool ends_word(char c) { return c == '\0' || c == ')' || c == ']' || c == ','; }

  Word word() {
    std::vector<Word> factors;
    for (;;) {
      cur_.skip_space(false);
      if (ends_word(cur_.peek())) break;
      if (cur_.peek() == '*') {
        if (factors.empty()) cur_.fail("'*' must follow a factor");
        cur_.get();
        cur_.skip_space(false);
        if (ends_word(cur_.peek())) cur_.fail("expected a factor after '*'");
      }
      factors.push_back(factor());
    }
    if (factors.empty()) cur_.fail("empty word");
    if (factors.size() == 1) return std::move(factors.front());
    return Word::product(std::move(factors));
  }

  Word factor() {
    Word a = atom();
    cur_.skip_space(false);
    if (cur_.peek() == '^') {
      cur_.get();
      cur_.skip_space(false);
      std::int64_t e = cur_.integer(true);
      return Word::power(std::move(a), e);
    }
    return a;
  }

  Word atom() {
    char c = cur_.peek();
    if (c == '(') {
      cur_.get();
      Word w = word();
      cur_.expect(')');
      return w;
    }
    if (c == '[') {
      cur_.get();
      Word a = word();
      cur_.expect(',');
      Word b = word();
      cur_.expect(']');
      return Word::commutator(std::move(a), std::move(b));
    }
    if (is_name_start(c)) {
      const int line = cur_.line(), col = cur_.col();
      std::string nm = cur_.name();
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == nm) return Word::gen(static_cast<int>(i));
      throw ParseError("unknown generator '" + nm + "'", line, col);
    }
    cur_.fail(c == '\0' ? std::string("unexpected end of word") : std::string("unexpected '") + c + "'");
  }

  Cursor& cur_;
  const std::vector<std::string>& names_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ValidationError("exponent overflow during free reduction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("exponent overflow during free reduction");
  return r;
}

void push(std::vector<Syllable>& out, Syllable s) {
  if (s.exponent == 0) return;
  if (!out.empty() && out.back().generator == s.generator) {
    out.back().exponent = checked_add(out.back().exponent, s.exponent);
    if (out.back().exponent == 0) out.pop_back();
  } else {
    out.push_back(s);
  }
  if (out.size() > kMaxSyllables) throw ValidationError("word too long after expansion");
}

std::vector<Syllable> invert(const std::vector<Syllable>& s) {
  std::vector<Syllable> out(s.rbegin(), s.rend());
  for (auto& x : out) {
    if (x.exponent == std::numeric_limits<std::int64_t>::min()) throw ValidationError("exponent overflow");
    x.exponent = -x.exponent;
  }
  return out;
}

void append_power(std::vector<Syllable>& out, std::vector<Syllable> s, std::int64_t e) {
  if (e == 0 || s.empty()) return;
  if (e < 0) {
    if (e == std::numeric_limits<std::int64_t>::min()) throw ValidationError("exponent overflow");
    s = invert(s);
    e = -e;
  }
  if (s.size() == 1) {
    push(out, {s[0].generator, checked_mul(s[0].exponent, e)});
    return;
  }
  // s = c * core * c^-1 with core cyclically reduced up to its end syllables
  std::size_t i = 0, j = s.size() - 1;
  while (i < j && s[i].generator == s[j].generator && s[i].exponent == -s[j].exponent) {
    ++i;
    --j;
  }
  for (std::size_t k = 0; k < i; ++k) push(out, s[k]);
  if (i == j) {
    push(out, {s[i].generator, checked_mul(s[i].exponent, e)});
  } else {
    const std::size_t core = j - i + 1;
    if (static_cast<std::uint64_t>(e) > kMaxSyllables / core) throw ValidationError("word too long after expansion");
    for (std::int64_t r = 0; r < e; ++r)
      for (std::size_t k = i; k <= j; ++k) push(out, s[k]);
  }
  for (std::size_t k = j + 1; k < s.size(); ++k) push(out, s[k]);
}

void expand(const Word& w, std::vector<Syllable>& out) {
  switch (w.kind) {
    case Word::Kind::Generator:
      push(out, {w.generator, 1});
      break;
    case Word::Kind::Inverse: {
      std::vector<Syllable> s;
      expand(w.children.at(0), s);
      for (auto& x : invert(s)) push(out, x);
      break;
    }
    case Word::Kind::Power: {
      std::vector<Syllable> s;
      expand(w.children.at(0), s);
      append_power(out, std::move(s), w.exponent);
      break;
    }
    case Word::Kind::Product:
      for (const auto& c : w.children) expand(c, out);
      break;
    case Word::Kind::Commutator: {
      std::vector<Syllable> a, b;
      expand(w.children.at(0), a);
      expand(w.children.at(1), b);
      for (auto& x : invert(a)) push(out, x);
      for (auto& x : invert(b)) push(out, x);
      for (auto& x : a) push(out, x);
      for (auto& x : b) push(out, x);
      break;
    }
  }
}

bool has_commutator(const Word& w) {
  if (w.kind == Word::Kind::Commutator) return true;
  for (const auto& c : w.children)
    if (has_commutator(c)) return true;
  return false;
}

// Reduction keeping commutators opaque: the result is a list of factors, each
// either a syllable or a Commutator / Power node.
class OpaqueReducer {
 public:
  void add(const Word& w) {
    if (!has_commutator(w)) {
      std::vector<Syllable> s;
      expand(w, s);
      for (auto& x : s) push(run_, x);
      return;
    }
    switch (w.kind) {
      case Word::Kind::Product:
        for (const auto& c : w.children) add(c);
        break;
      case Word::Kind::Commutator: {
        Word a = free_reduce(w.children[0], false);
        Word b = free_reduce(w.children[1], false);
        if (a.is_identity() || b.is_identity() || a == b) return;
        flush();
        items_.push_back(Word::commutator(std::move(a), std::move(b)));
        break;
      }
      case Word::Kind::Inverse:
        add(inverse_of(free_reduce(w.children[0], false)));
        break;
      case Word::Kind::Power: {
        Word base = free_reduce(w.children[0], false);
        if (w.exponent == 0 || base.is_identity()) return;
        if (w.exponent == 1) {
          add(base);
          return;
        }
        if (w.exponent == -1) {
          add(inverse_of(base));
          return;
        }
        flush();
        items_.push_back(Word::power(std::move(base), w.exponent));
        break;
      }
      case Word::Kind::Generator:
        break;
    }
  }

  Word finish() {
    flush();
    if (items_.size() == 1) return std::move(items_.front());
    return Word::product(std::move(items_));
  }

 private:
  // inverse of an already reduced opaque word
  static Word inverse_of(const Word& w) {
    switch (w.kind) {
      case Word::Kind::Commutator:
        return Word::commutator(w.children[1], w.children[0]);
      case Word::Kind::Power:
        if (w.exponent == std::numeric_limits<std::int64_t>::min()) throw ValidationError("exponent overflow");
        return Word::power(w.children[0], -w.exponent);
      case Word::Kind::Product: {
        std::vector<Word> f;
        for (auto it = w.children.rbegin(); it != w.children.rend(); ++it) f.push_back(inverse_of(*it));
        return Word::product(std::move(f));
      }
      case Word::Kind::Generator:
        return Word::power(w, -1);
      case Word::Kind::Inverse:
        return w.children[0];
    }
    return w;
  }

  void flush() {
    Word run = from_syllables(run_);
    run_.clear();
    if (run.is_identity()) return;
    if (run.kind == Word::Kind::Product) {
      for (auto& f : run.children) items_.push_back(std::move(f));
    } else {
      items_.push_back(std::move(run));
    }
  }

  std::vector<Syllable> run_;
  std::vector<Word> items_;
};

bool needs_parens_as_base(const Word& w) {
  return !(w.kind == Word::Kind::Generator || w.kind == Word::Kind::Commutator);
}

void print(const Word& w, const std::vector<std::string>& names, std::ostream& os) {
  auto name = [&](int g) -> std::string {
    if (g >= 0 && g < static_cast<int>(names.size())) return names[g];
    return "x" + std::to_string(g + 1);
  };
  switch (w.kind) {
    case Word::Kind::Generator:
      os << name(w.generator);
      break;
    case Word::Kind::Inverse:
    case Word::Kind::Power: {
      const Word& base = w.children.at(0);
      if (needs_parens_as_base(base)) {
        os << "(";
        print(base, names, os);
        os << ")";
      } else {
        print(base, names, os);
      }
      os << "^" << (w.kind == Word::Kind::Inverse ? -1 : w.exponent);
      break;
    }
    case Word::Kind::Product:
      if (w.children.empty()) {
        os << "1";
        break;
      }
      for (std::size_t i = 0; i < w.children.size(); ++i) {
        if (i) os << " ";
        const Word& c = w.children[i];
        if (c.kind == Word::Kind::Product) {
          os << "(";
          print(c, names, os);
          os << ")";
        } else {
          print(c, names, os);
        }
      }
      break;
    case Word::Kind::Commutator:
      os << "[";
      print(w.children.at(0), names, os);
      os << ",";
      print(w.children.at(1), names, os);
      os << "]";
      break;
  }
}

}  // namespace

Word parse_word(std::string_view text, const std::vector<std::string>& names) {
  Cursor cur(text);
  return WordParser(cur, names).top();
}

Word parse_word(std::string_view text, const Presentation& ctx) { return parse_word(text, ctx.generators); }

Presentation parse_presentation(std::string_view text) {
  Cursor cur(text);
  Presentation pres;
  bool have_q = false, have_gens = false, have_rels = false;
  std::int64_t q = 0;
  int q_line = 0, q_col = 0;

  for (;;) {
    cur.skip_space(true);
    if (cur.eof()) break;
    const int line = cur.line(), col = cur.col();
    std::string key = cur.name();
    cur.skip_space(true);
    cur.expect('=');
    cur.skip_space(true);
    if (key == "q") {
      if (have_q) throw ParseError("duplicate 'q' statement", line, col);
      q_line = cur.line();
      q_col = cur.col();
      q = cur.integer(false);
      have_q = true;
    } else if (key == "gens") {
      if (have_gens) throw ParseError("duplicate 'gens' statement", line, col);
      cur.expect('[');
      std::set<std::string> seen;
      for (;;) {
        cur.skip_space(true);
        const int nl = cur.line(), nc = cur.col();
        std::string nm = cur.name();
        if (!seen.insert(nm).second) throw ParseError("duplicate generator '" + nm + "'", nl, nc);
        pres.generators.push_back(nm);
        cur.skip_space(true);
        if (cur.peek() == ',') {
          cur.get();
          continue;
        }
        cur.expect(']');
        break;
      }
      have_gens = true;
    } else if (key == "rels") {
      if (have_rels) throw ParseError("duplicate 'rels' statement", line, col);
      if (!have_gens) throw ParseError("'rels' must follow 'gens'", line, col);
      cur.expect('[');
      cur.skip_space(true);
      if (cur.peek() == ']') {
        cur.get();
      } else {
        for (;;) {
          cur.skip_space(true);
          if (cur.peek() != '"') cur.fail("expected a quoted relator");
          cur.get();
          const int wl = cur.line(), wc = cur.col();
          std::string body;
          while (!cur.eof() && cur.peek() != '"') {
            if (cur.peek() == '\n') cur.fail("unterminated string");
            body += cur.get();
          }
          if (cur.eof()) cur.fail("unterminated string");
          cur.get();
          Cursor inner(body, wl, wc);
          pres.relators.push_back(WordParser(inner, pres.generators).top());
          pres.relator_text.push_back(body);
          cur.skip_space(true);
          if (cur.peek() == ',') {
            cur.get();
            continue;
          }
          cur.expect(']');
          break;
        }
      }
      have_rels = true;
    } else {
      throw ParseError("unknown statement '" + key + "'", line, col);
    }
    cur.skip_space(true);
    if (cur.eof()) break;  // final ';' may be omitted
    cur.expect(';');
  }

  if (!have_q) throw ParseError("missing 'q' statement");
  if (!have_gens) throw ParseError("missing 'gens' statement");
  auto pp = prime_power(q);
  if (!pp) throw ValidationError(std::to_string(q) + " is not a prime power (at " + std::to_string(q_line) + ":" +
                                 std::to_string(q_col) + ")");
  pp = require_modulus(q);
  pres.q = pp->q;
  pres.p = pp->p;
  pres.d = pp->d;
  return pres;
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

Presentation make_presentation(std::int64_t q, std::vector<std::string> generators,
                               const std::vector<std::string>& relators) {
  PrimePower pp = require_modulus(q);
  Presentation pres;
  pres.q = pp.q;
  pres.p = pp.p;
  pres.d = pp.d;
  pres.generators = std::move(generators);
  for (const auto& r : relators) {
    pres.relators.push_back(parse_word(r, pres.generators));
    pres.relator_text.push_back(r);
  }
  return pres;
}

std::vector<Syllable> reduced_syllables(const Word& w) {
  std::vector<Syllable> out;
  expand(w, out);
  return out;
}

Word from_syllables(const std::vector<Syllable>& s) {
  std::vector<Word> f;
  for (const auto& x : s) {
    if (x.exponent == 1)
      f.push_back(Word::gen(x.generator));
    else
      f.push_back(Word::power(Word::gen(x.generator), x.exponent));
  }
  if (f.size() == 1) return std::move(f.front());
  return Word::product(std::move(f));
}

Word free_reduce(const Word& w, bool expand_commutators) {
  if (expand_commutators) return from_syllables(reduced_syllables(w));
  OpaqueReducer r;
  r.add(w);
  return r.finish();
}

std::int64_t letter_length(const Word& w) {
  std::int64_t total = 0;
  for (const auto& s : reduced_syllables(w)) total = checked_add(total, s.exponent < 0 ? -s.exponent : s.exponent);
  return total;
}

std::string to_string(const Word& w, const std::vector<std::string>& names) {
  std::ostringstream os;
  print(w, names, os);
  return os.str();
}

std::string to_string(const Presentation& pres) {
  std::ostringstream os;
  os << "q=" << pres.q << "; gens=[";
  for (int i = 0; i < pres.n(); ++i) os << (i ? "," : "") << pres.generators[i];
  os << "]; rels=[";
  for (std::size_t i = 0; i < pres.relators.size(); ++i)
    os << (i ? ", " : "") << '"' << to_string(pres.relators[i], pres.generators) << '"';
  os << "];";
  return os.str();
}

}  // namespace gq3
