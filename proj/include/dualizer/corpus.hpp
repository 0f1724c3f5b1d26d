// Corpus files: a line-oriented stanza language for rings, complexes and checks.
//
//   prime 101
//   ring D { vars x; monomial-ideal x^2 }
//   ring T { dim 2; table [1 0; 0 1; 0 1; 0 0] }
//   complex M over D {
//     term 1 = free 1
//     term 0 = free 1
//     diff 1 = over [x]
//     shift 1
//   }
//   check theorem1 D M expect agree as t1
//
// Statements end at a newline or ';' (newlines inside [...] are ignored); '#'
// starts a comment.
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "complex.hpp"

namespace dualizer {

struct Location {
  std::size_t line = 0;
  std::size_t column = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, Location at, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message),
        at_(at),
        message_(message) {}
  Location location() const { return at_; }
  const std::string& message() const { return message_; }

 private:
  Location at_;
  std::string message_;
};

enum class CheckKind { dualizing, gorenstein, theorem1, corollary2, coinduce };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::dualizing: return "dualizing";
    case CheckKind::gorenstein: return "gorenstein";
    case CheckKind::theorem1: return "theorem1";
    case CheckKind::corollary2: return "corollary2";
    case CheckKind::coinduce: return "coinduce";
  }
  return "?";
}

/// Verdict words accepted after `expect`, per check kind.
inline const std::vector<std::string>& expectation_words(CheckKind k) {
  static const std::map<CheckKind, std::vector<std::string>> words{
      {CheckKind::dualizing, {"yes", "no"}},
      {CheckKind::gorenstein, {"yes-exact", "yes-up-to-cutoff", "no", "inconclusive"}},
      {CheckKind::theorem1, {"agree", "yes-up-to-cutoff", "out-of-scope"}},
      {CheckKind::corollary2, {"pass", "fail"}},
      {CheckKind::coinduce, {"yes", "no"}},
  };
  return words.at(k);
}

struct RingEntry {
  std::string name;
  AlgebraPtr ring;
  Location at;
};

struct ComplexEntry {
  std::string name;
  std::string ring;
  ChainComplex complex;
  Location at;
};

struct CheckEntry {
  std::string name;
  CheckKind kind = CheckKind::dualizing;
  std::string ring;
  std::string complex;  // empty for corollary2
  std::optional<int> cutoff;
  std::optional<std::string> expect;
  Location at;
};

struct CorpusFile {
  std::string source;
  Scalar prime = kDefaultPrime;
  std::vector<RingEntry> rings;
  std::vector<ComplexEntry> complexes;
  std::vector<CheckEntry> checks;

  const RingEntry* find_ring(std::string_view name) const {
    for (auto& r : rings)
      if (r.name == name) return &r;
    return nullptr;
  }
  const ComplexEntry* find_complex(std::string_view name) const {
    for (auto& c : complexes)
      if (c.name == name) return &c;
    return nullptr;
  }
  const CheckEntry* find_check(std::string_view name) const {
    for (auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

struct Token {
  enum Kind { word, lbrace, rbrace, lbracket, rbracket, semi, equals, newline, end } kind;
  std::string text;
  Location at;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  int depth = 0;  // bracket nesting: newlines inside [...] are whitespace
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    Location at{line, col};
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (text[i] == '\n') ++line, col = 1;
        else ++col;
        ++i;
      }
    };
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      if (depth == 0) out.push_back({Token::newline, "\\n", at});
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token::Kind k = Token::word;
    switch (c) {
      case '{': k = Token::lbrace; break;
      case '}': k = Token::rbrace; break;
      case '[': k = Token::lbracket, ++depth; break;
      case ']': k = Token::rbracket, depth = std::max(0, depth - 1); break;
      case ';': k = Token::semi; break;
      case '=': k = Token::equals; break;
      default: break;
    }
    if (k != Token::word) {
      out.push_back({k, std::string(1, c), at});
      advance(1);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           std::string_view("{}[];=#").find(text[j]) == std::string_view::npos)
      ++j;
    out.push_back({Token::word, std::string(text.substr(i, j - i)), at});
    advance(j - i);
  }
  out.push_back({Token::end, "end of input", {line, col}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : toks_(tokenize(text)) { file_.source = std::move(source); }

  CorpusFile run() {
    while (true) {
      skip_separators();
      const Token& t = peek();
      if (t.kind == Token::end) break;
      if (t.kind != Token::word) fail(t.at, "expected a statement, found '" + t.text + "'");
      if (t.text == "prime") prime_stmt();
      else if (t.text == "ring") ring_stanza();
      else if (t.text == "complex") complex_stanza();
      else if (t.text == "check") check_stmt();
      else fail(t.at, "unknown statement '" + t.text + "'");
    }
    return std::move(file_);
  }

 private:
  [[noreturn]] void fail(Location at, const std::string& msg) const { throw ParseError(file_.source, at, msg); }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  bool at_statement_end() const {
    auto k = peek().kind;
    return k == Token::newline || k == Token::semi || k == Token::end || k == Token::rbrace;
  }

  void skip_separators() {
    while (peek().kind == Token::newline || peek().kind == Token::semi) ++pos_;
  }

  void end_statement() {
    if (!at_statement_end()) fail(peek().at, "unexpected '" + peek().text + "'");
  }

  const Token& expect(Token::Kind k, const char* what) {
    if (peek().kind != k) fail(peek().at, std::string("expected ") + what + ", found '" + peek().text + "'");
    return next();
  }

  const Token& word(const char* what) { return expect(Token::word, what); }

  void keyword(const char* kw) {
    const Token& t = word(kw);
    if (t.text != kw) fail(t.at, std::string("expected '") + kw + "', found '" + t.text + "'");
  }

  long long integer(const char* what) {
    const Token& t = word(what);
    return parse_int(t, what);
  }

  long long parse_int(const Token& t, const char* what) const {
    try {
      std::size_t used = 0;
      long long v = std::stoll(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail(t.at, std::string("expected ") + what + ", found '" + t.text + "'");
    }
  }

  std::string name(const char* what) {
    const Token& t = word(what);
    if (!std::isalpha(static_cast<unsigned char>(t.text[0])) && t.text[0] != '_')
      fail(t.at, std::string("invalid ") + what + " '" + t.text + "'");
    return t.text;
  }

  // [a b; c d] as rows of raw tokens
  std::vector<std::vector<Token>> bracket_rows() {
    expect(Token::lbracket, "'['");
    std::vector<std::vector<Token>> rows{{}};
    while (peek().kind != Token::rbracket) {
      const Token& t = next();
      if (t.kind == Token::semi) rows.emplace_back();
      else if (t.kind == Token::word) rows.back().push_back(t);
      else fail(t.at, "unexpected '" + t.text + "' inside a matrix");
    }
    next();
    if (rows.size() > 1 && rows.back().empty()) rows.pop_back();
    if (rows.size() == 1 && rows[0].empty()) rows.clear();
    for (auto& r : rows)
      if (r.size() != rows[0].size()) fail(r.empty() ? peek().at : r[0].at, "matrix rows have different lengths");
    return rows;
  }

  Matrix scalar_matrix(const std::vector<std::vector<Token>>& rows, std::size_t cols_if_empty = 0) {
    Matrix m(rows.size(), rows.empty() ? cols_if_empty : rows[0].size(), file_.prime);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        m(i, j) = Fp::reduce(parse_int(rows[i][j], "an integer entry"), file_.prime);
    return m;
  }

  void prime_stmt() {
    const Token& kw = next();
    if (prime_set_) fail(kw.at, "only one prime per file");
    if (!file_.rings.empty()) fail(kw.at, "prime must precede every ring");
    const Token& t = peek();
    long long p = integer("a prime");
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)) || p > 1000003) fail(t.at, "not a supported prime: " + t.text);
    file_.prime = static_cast<Scalar>(p);
    prime_set_ = true;
    end_statement();
  }

  // Monomial like x^2*y over the given variables.
  std::vector<int> monomial(const Token& t, const std::vector<std::string>& vars) const {
    std::vector<int> e(vars.size(), 0);
    std::stringstream ss(t.text);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      std::string v = factor;
      int k = 1;
      if (auto c = factor.find('^'); c != std::string::npos) {
        v = factor.substr(0, c);
        try {
          k = std::stoi(factor.substr(c + 1));
        } catch (const std::exception&) {
          fail(t.at, "bad exponent in '" + t.text + "'");
        }
        if (k < 1) fail(t.at, "bad exponent in '" + t.text + "'");
      }
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) fail(t.at, "unknown variable '" + v + "'");
      e[static_cast<std::size_t>(it - vars.begin())] += k;
    }
    return e;
  }

  void ring_stanza() {
    Location at = next().at;
    std::string nm = name("a ring name");
    if (file_.find_ring(nm)) fail(at, "ring '" + nm + "' is defined twice");
    expect(Token::lbrace, "'{'");
    std::vector<std::string> vars;
    std::vector<std::vector<int>> rels;
    std::optional<Token> ideal_at;
    std::optional<long long> dim;
    long long unit = 0;
    std::vector<std::string> labels;
    std::optional<Matrix> table;
    Location table_at{};
    while (true) {
      skip_separators();
      if (peek().kind == Token::rbrace) break;
      const Token& kw = word("a ring statement");
      if (kw.text == "vars") {
        while (!at_statement_end()) vars.push_back(name("a variable"));
      } else if (kw.text == "monomial-ideal") {
        ideal_at = kw;
        while (!at_statement_end()) rels.push_back(monomial(next(), vars));
      } else if (kw.text == "dim") {
        dim = integer("a dimension");
      } else if (kw.text == "unit") {
        unit = integer("a basis index");
      } else if (kw.text == "labels") {
        while (!at_statement_end()) labels.push_back(name("a label"));
      } else if (kw.text == "table") {
        table_at = kw.at;
        table = scalar_matrix(bracket_rows());
      } else {
        fail(kw.at, "unknown ring statement '" + kw.text + "'");
      }
      end_statement();
    }
    next();
    RingEntry e{nm, nullptr, at};
    try {
      if (!vars.empty() || ideal_at) {
        if (table) fail(table_at, "a ring is given either by vars and monomial-ideal or by a table");
        e.ring = std::make_shared<const LocalAlgebra>(LocalAlgebra::build_from_quotient(vars, rels, file_.prime));
      } else {
        if (!dim || !table) fail(at, "ring '" + nm + "' needs vars/monomial-ideal or dim/table");
        const auto n = static_cast<std::size_t>(*dim);
        if (*dim < 1 || table->rows() != n * n || table->cols() != n)
          fail(table_at, "table must have dim^2 rows of length dim");
        StructureConstants sc;
        sc.p = file_.prime;
        sc.dim = n;
        sc.unit_index = static_cast<std::size_t>(unit);
        if (unit < 0 || static_cast<std::size_t>(unit) >= n) fail(at, "unit index out of range");
        for (std::size_t r = 0; r < n * n; ++r) {
          Vector v(n);
          for (std::size_t c = 0; c < n; ++c) v[c] = (*table)(r, c);
          sc.table.push_back(v);
        }
        if (!labels.empty() && labels.size() != n) fail(at, "labels must name every basis element");
        sc.labels = labels;
        e.ring = std::make_shared<const LocalAlgebra>(LocalAlgebra::build_from_structure_constants(sc));
      }
    } catch (const AlgebraError& err) {
      fail(ideal_at ? ideal_at->at : at, std::string("ring '") + nm + "': " + err.what());
    }
    file_.rings.push_back(std::move(e));
  }

  const RingEntry& ring_ref(const Token& t) const {
    const RingEntry* r = file_.find_ring(t.text);
    if (!r) fail(t.at, "undefined ring '" + t.text + "'");
    return *r;
  }

  // A ring element written as a sum of terms c*m with m a product of labels
  // (variables or basis labels) and powers, e.g. 2*x*y-y^2.
  Vector element(const Token& t, const LocalAlgebra& a) const {
    const Scalar p = a.prime();
    Vector out(a.dim(), 0);
    const std::string& s = t.text;
    std::size_t i = 0;
    if (s.empty()) fail(t.at, "empty ring element");
    while (i < s.size()) {
      Scalar sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        if (s[i] == '-') sign = p - 1;
        ++i;
      } else if (i != 0) {
        fail(t.at, "malformed ring element '" + s + "'");
      }
      std::size_t j = i;
      while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
      std::string term = s.substr(i, j - i);
      if (term.empty()) fail(t.at, "malformed ring element '" + s + "'");
      Vector v = a.basis_vector(0);
      std::stringstream ss(term);
      std::string factor;
      while (std::getline(ss, factor, '*')) {
        std::string base = factor;
        int k = 1;
        if (auto c = factor.find('^'); c != std::string::npos) {
          base = factor.substr(0, c);
          try {
            k = std::stoi(factor.substr(c + 1));
          } catch (const std::exception&) {
            fail(t.at, "bad exponent in '" + s + "'");
          }
          if (k < 0) fail(t.at, "bad exponent in '" + s + "'");
        }
        Vector f(a.dim(), 0);
        if (!base.empty() && std::all_of(base.begin(), base.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
          f[0] = Fp::reduce(std::stoll(base) % static_cast<long long>(p), p);
        } else {
          auto it = std::find(a.labels().begin(), a.labels().end(), base);
          if (it == a.labels().end()) fail(t.at, "unknown ring element '" + base + "'");
          f[static_cast<std::size_t>(it - a.labels().begin())] = 1;
        }
        for (int q = 0; q < k; ++q) v = a.multiply(v, f);
      }
      for (auto& x : v) x = Fp::mul(x, sign, p);
      axpy(out, 1, v, p);
      i = j;
    }
    return out;
  }

  struct TermInfo {
    AModule module;
    std::optional<std::size_t> free_rank;
    Location at;
  };

  TermInfo term_spec(const RingEntry& r, Location at) {
    const AlgebraPtr& a = r.ring;
    const Token& kind = word("a term kind");
    if (kind.text == "free") {
      long long n = integer("a rank");
      if (n < 0) fail(kind.at, "negative rank");
      return {free_module(a, static_cast<std::size_t>(n)), static_cast<std::size_t>(n), at};
    }
    if (kind.text == "residue") return {residue_field_module(a), std::nullopt, at};
    if (kind.text == "dual-of-ring") return {matlis_dual_module(free_module(a, 1)), std::nullopt, at};
    if (kind.text == "zero") return {zero_module(a), 0, at};
    if (kind.text == "matrix-module") {
      long long n = integer("a dimension");
      if (n < 0) fail(kind.at, "negative dimension");
      const auto d = static_cast<std::size_t>(n);
      std::map<std::string, Matrix> given;
      while (!at_statement_end()) {
        const Token& lab = word("an element label");
        expect(Token::equals, "'='");
        Matrix m = scalar_matrix(bracket_rows());
        if (m.rows() != d || m.cols() != d) fail(lab.at, "action of '" + lab.text + "' must be " + std::to_string(d) + "x" + std::to_string(d));
        given[lab.text] = m;
      }
      std::vector<Matrix> act;
      const LocalAlgebra& ring = *a;
      for (std::size_t i = 0; i < ring.dim(); ++i) {
        if (i == 0) {
          act.push_back(Matrix::identity(d, ring.prime()));
          continue;
        }
        if (auto it = given.find(ring.labels()[i]); it != given.end()) {
          act.push_back(it->second);
          continue;
        }
        if (ring.exponents().empty()) fail(kind.at, "missing action of '" + ring.labels()[i] + "'");
        Matrix m = Matrix::identity(d, ring.prime());
        for (std::size_t v = 0; v < ring.vars().size(); ++v) {
          auto it = given.find(ring.vars()[v]);
          if (ring.exponents()[i][v] && it == given.end()) fail(kind.at, "missing action of '" + ring.vars()[v] + "'");
          for (int q = 0; q < ring.exponents()[i][v]; ++q) m = m * it->second;
        }
        act.push_back(m);
      }
      try {
        return {AModule(a, d, std::move(act)), std::nullopt, at};
      } catch (const ModuleError& err) {
        fail(kind.at, std::string("not a module: ") + err.what());
      }
    }
    fail(kind.at, "unknown term kind '" + kind.text + "'");
  }

  void complex_stanza() {
    Location at = next().at;
    std::string nm = name("a complex name");
    if (file_.find_complex(nm)) fail(at, "complex '" + nm + "' is defined twice");
    keyword("over");
    const Token& rt = word("a ring name");
    const RingEntry& r = ring_ref(rt);
    expect(Token::lbrace, "'{'");
    std::map<int, TermInfo> terms;
    struct DiffInfo {
      std::optional<Matrix> raw;
      std::vector<std::vector<Token>> over;
      Location at;
    };
    std::map<int, DiffInfo> diffs;
    int shift = 0;
    while (true) {
      skip_separators();
      if (peek().kind == Token::rbrace) break;
      const Token& kw = word("a complex statement");
      if (kw.text == "term") {
        const Token& dt = peek();
        int deg = static_cast<int>(integer("a degree"));
        expect(Token::equals, "'='");
        if (terms.count(deg)) fail(dt.at, "term " + std::to_string(deg) + " given twice");
        terms.emplace(deg, term_spec(r, kw.at));
      } else if (kw.text == "diff") {
        const Token& dt = peek();
        int deg = static_cast<int>(integer("a degree"));
        expect(Token::equals, "'='");
        if (diffs.count(deg)) fail(dt.at, "diff " + std::to_string(deg) + " given twice");
        DiffInfo info{std::nullopt, {}, kw.at};
        if (peek().kind == Token::word && peek().text == "over") {
          next();
          info.over = bracket_rows();
        } else {
          info.raw = scalar_matrix(bracket_rows());
        }
        diffs.emplace(deg, std::move(info));
      } else if (kw.text == "shift") {
        shift = static_cast<int>(integer("a shift"));
      } else {
        fail(kw.at, "unknown complex statement '" + kw.text + "'");
      }
      end_statement();
    }
    next();
    ComplexEntry e{nm, r.name, ChainComplex::zero(r.ring), at};
    if (!terms.empty()) {
      const int lo = terms.begin()->first, hi = terms.rbegin()->first;
      std::vector<AModule> mods;
      for (int i = lo; i <= hi; ++i) {
        auto it = terms.find(i);
        mods.push_back(it == terms.end() ? zero_module(r.ring) : it->second.module);
      }
      std::vector<Matrix> ds;
      for (int i = lo + 1; i <= hi; ++i) {
        const std::size_t rows = mods[static_cast<std::size_t>(i - 1 - lo)].dim(), cols = mods[static_cast<std::size_t>(i - lo)].dim();
        auto it = diffs.find(i);
        if (it == diffs.end()) {
          ds.push_back(Matrix(rows, cols, file_.prime));
          continue;
        }
        ds.push_back(diff_matrix(r, terms, i, it->second.raw, it->second.over, it->second.at, rows, cols));
      }
      for (auto& [deg, info] : diffs)
        if (deg <= lo || deg > hi) fail(info.at, "diff " + std::to_string(deg) + " has no source or target term");
      try {
        e.complex = ChainComplex(r.ring, lo, std::move(mods), std::move(ds));
      } catch (const ComplexError& err) {
        fail(at, "complex '" + nm + "': " + err.what());
      }
    } else if (!diffs.empty()) {
      fail(diffs.begin()->second.at, "diff without terms");
    }
    if (shift) e.complex = suspend(e.complex, shift);
    file_.complexes.push_back(std::move(e));
  }

  template <class Terms>
  Matrix diff_matrix(const RingEntry& r, const Terms& terms, int deg, const std::optional<Matrix>& raw,
                     const std::vector<std::vector<Token>>& over, Location at, std::size_t rows, std::size_t cols) {
    if (raw) {
      Matrix m = *raw;
      if (m.rows() == 0 && rows * cols == 0) return Matrix(rows, cols, file_.prime);
      if (m.rows() != rows || m.cols() != cols)
        fail(at, "diff " + std::to_string(deg) + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", found " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
      return m;
    }
    auto rank_of = [&](int i) -> std::optional<std::size_t> {
      auto it = terms.find(i);
      if (it == terms.end()) return std::size_t{0};
      return it->second.free_rank;
    };
    auto src = rank_of(deg), tgt = rank_of(deg - 1);
    if (!src || !tgt) fail(at, "'over' needs free terms in degrees " + std::to_string(deg) + " and " + std::to_string(deg - 1));
    if (over.size() != *tgt || (over.empty() ? 0 : over[0].size()) != *src)
      fail(at, "diff " + std::to_string(deg) + " over the ring must be " + std::to_string(*tgt) + "x" + std::to_string(*src));
    const LocalAlgebra& a = *r.ring;
    std::vector<Vector> images;
    for (std::size_t j = 0; j < *src; ++j) {
      Vector img(*tgt * a.dim(), 0);
      for (std::size_t i = 0; i < *tgt; ++i) {
        Vector v = element(over[i][j], a);
        std::copy(v.begin(), v.end(), img.begin() + static_cast<std::ptrdiff_t>(i * a.dim()));
      }
      images.push_back(img);
    }
    return free_map_matrix(free_module(r.ring, *tgt), images);
  }

  void check_stmt() {
    Location at = next().at;
    const Token& kt = word("a check kind");
    CheckEntry c;
    c.at = at;
    static const std::map<std::string, CheckKind> kinds{{"dualizing", CheckKind::dualizing},
                                                        {"gorenstein", CheckKind::gorenstein},
                                                        {"theorem1", CheckKind::theorem1},
                                                        {"corollary2", CheckKind::corollary2},
                                                        {"coinduce", CheckKind::coinduce}};
    auto it = kinds.find(kt.text);
    if (it == kinds.end()) fail(kt.at, "unknown check kind '" + kt.text + "'");
    c.kind = it->second;
    const Token& rt = word("a ring name");
    c.ring = ring_ref(rt).name;
    if (c.kind != CheckKind::corollary2) {
      const Token& ct = word("a complex name");
      const ComplexEntry* cx = file_.find_complex(ct.text);
      if (!cx) fail(ct.at, "undefined complex '" + ct.text + "'");
      if (cx->ring != c.ring) fail(ct.at, "complex '" + ct.text + "' is over ring '" + cx->ring + "', not '" + c.ring + "'");
      c.complex = cx->name;
    }
    while (!at_statement_end()) {
      const Token& opt = word("an option");
      if (opt.text == "cutoff") {
        const Token& v = peek();
        long long n = integer("a cutoff");
        if (n < 0 || n > 64) fail(v.at, "cutoff out of range");
        c.cutoff = static_cast<int>(n);
      } else if (opt.text == "expect") {
        const Token& v = word("a verdict");
        const auto& ok = expectation_words(c.kind);
        if (std::find(ok.begin(), ok.end(), v.text) == ok.end()) {
          std::string list;
          for (auto& w : ok) list += (list.empty() ? "" : ", ") + w;
          fail(v.at, "'" + v.text + "' is not a " + to_string(c.kind) + " verdict (one of: " + list + ")");
        }
        c.expect = v.text;
      } else if (opt.text == "as") {
        const Token& v = peek();
        c.name = name("a check name");
        if (file_.find_check(c.name)) fail(v.at, "check '" + c.name + "' is defined twice");
      } else {
        fail(opt.at, "unknown check option '" + opt.text + "'");
      }
    }
    end_statement();
    if (c.name.empty()) {
      c.name = std::string(to_string(c.kind)) + "-" + std::to_string(file_.checks.size() + 1);
      if (file_.find_check(c.name)) fail(at, "generated check name '" + c.name + "' collides with an explicit one");
    }
    file_.checks.push_back(std::move(c));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  CorpusFile file_;
  bool prime_set_ = false;
};

}  // namespace detail

inline CorpusFile parse_corpus(std::string_view text, std::string source = "<input>") {
  return detail::Parser(text, std::move(source)).run();
}

}  // namespace dualizer
