#include "rz/term.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "rz/errors.hpp"

namespace rz {

namespace {

constexpr std::uint64_t kSeedComb = 0x7d2fa3c1b5e90d47ULL;
constexpr std::uint64_t kSeedApp = 0x41c64e6da3bc0074ULL;
constexpr std::uint64_t kSeedCont = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSeedConst = 0xc2b2ae3d27d4eb4fULL;
constexpr std::uint64_t kSeedPush = 0x165667b19e3779f9ULL;
constexpr std::uint64_t kSeedProc = 0x27220a95fe4d42a5ULL;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t mix2(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(seed ^ mix64(a ^ 0x9e3779b97f4a7c15ULL) ^ (mix64(b) << 1 | 1));
}

constexpr const char* kCombNames[kCombCount] = {"B", "C", "E", "I", "K", "W", "cc", "qt"};

// Teardown parking slots: while a drain loop is active, nested destructors
// push their sole-owned children here instead of recursing.
thread_local std::vector<TermPtr>* g_drain_terms = nullptr;
thread_local std::vector<StackPtr>* g_drain_stacks = nullptr;

void park(TermPtr&& p) {
  if (!p) return;
  if (p.use_count() == 1) {
    g_drain_terms->push_back(std::move(p));
  } else {
    p.reset();
  }
}
void park(StackPtr&& p) {
  if (!p) return;
  if (p.use_count() == 1) {
    g_drain_stacks->push_back(std::move(p));
  } else {
    p.reset();
  }
}

}  // namespace

const char* comb_name(Comb c) { return kCombNames[static_cast<int>(c)]; }

std::optional<Comb> comb_from_name(std::string_view s) {
  for (int i = 0; i < kCombCount; ++i) {
    if (s == kCombNames[i]) return static_cast<Comb>(i);
  }
  return std::nullopt;
}

// -- teardown -----------------------------------------------------------------

void TermNode::drain(std::vector<TermPtr>&& tq, std::vector<StackPtr>&& sq) {
  g_drain_terms = &tq;
  g_drain_stacks = &sq;
  while (!tq.empty() || !sq.empty()) {
    if (!tq.empty()) {
      TermPtr p = std::move(tq.back());
      tq.pop_back();
      p.reset();  // sole owner: destructor parks its children above
    } else {
      StackPtr p = std::move(sq.back());
      sq.pop_back();
      p.reset();
    }
  }
  g_drain_terms = nullptr;
  g_drain_stacks = nullptr;
}

TermNode::~TermNode() {
  TermPtr c0, c1;
  StackPtr s0;
  if (auto* a = std::get_if<TermApp>(&v)) {
    c0 = std::move(a->fn.p_);
    c1 = std::move(a->arg.p_);
  } else if (auto* s = std::get_if<Stack>(&v)) {
    s0 = std::move(s->p_);
  } else {
    return;
  }
  if (g_drain_terms) {
    park(std::move(c0));
    park(std::move(c1));
    park(std::move(s0));
    return;
  }
  bool cascade = (c0 && c0.use_count() == 1) || (c1 && c1.use_count() == 1) ||
                 (s0 && s0.use_count() == 1);
  if (!cascade) return;  // plain refcount decrements, no recursion risk
  std::vector<TermPtr> tq;
  std::vector<StackPtr> sq;
  if (c0 && c0.use_count() == 1) tq.push_back(std::move(c0));
  if (c1 && c1.use_count() == 1) tq.push_back(std::move(c1));
  if (s0 && s0.use_count() == 1) sq.push_back(std::move(s0));
  drain(std::move(tq), std::move(sq));
}

StackNode::~StackNode() {
  auto* p = std::get_if<StackPush>(&v);
  if (!p) return;
  TermPtr t0 = std::move(p->top.p_);
  StackPtr r0 = std::move(p->rest.p_);
  if (g_drain_terms) {
    park(std::move(t0));
    park(std::move(r0));
    return;
  }
  bool cascade = (t0 && t0.use_count() == 1) || (r0 && r0.use_count() == 1);
  if (!cascade) return;
  std::vector<TermPtr> tq;
  std::vector<StackPtr> sq;
  if (t0 && t0.use_count() == 1) tq.push_back(std::move(t0));
  if (r0 && r0.use_count() == 1) sq.push_back(std::move(r0));
  TermNode::drain(std::move(tq), std::move(sq));
}

// -- construction -------------------------------------------------------------

Term Term::comb(Comb c) {
  static const std::array<TermPtr, kCombCount> table = [] {
    std::array<TermPtr, kCombCount> t;
    for (int i = 0; i < kCombCount; ++i) {
      t[i] = std::make_shared<const TermNode>(
          static_cast<Comb>(i), mix64(kSeedComb ^ static_cast<std::uint64_t>(i + 1)), true);
    }
    return t;
  }();
  return Term(table[static_cast<int>(c)]);
}

Term Term::app(const Term& fn, const Term& arg) {
  std::uint64_t h = mix2(kSeedApp, fn.hash(), arg.hash());
  bool pl = is_proof_like(fn) && is_proof_like(arg);
  return Term(std::make_shared<const TermNode>(TermApp{fn, arg}, h, pl));
}

Term Term::cont(const Stack& s) {
  std::uint64_t h = mix64(kSeedCont ^ s.hash());
  return Term(std::make_shared<const TermNode>(s, h, false));
}

Stack Stack::constant(std::uint32_t index) {
  std::uint64_t h = mix64(kSeedConst ^ (static_cast<std::uint64_t>(index) + 1));
  return Stack(std::make_shared<const StackNode>(index, h, 0u));
}

Stack Stack::push(const Term& top, const Stack& rest) {
  std::uint64_t h = mix2(kSeedPush, top.hash(), rest.hash());
  return Stack(std::make_shared<const StackNode>(StackPush{top, rest}, h, rest.depth() + 1));
}

std::uint64_t Process::hash() const { return mix2(kSeedProc, head.hash(), stack.hash()); }

// -- equality and order -------------------------------------------------------

namespace {

struct NodePair {
  const void* a;
  const void* b;
  bool is_stack;
};

const TermNode* tn(const void* p) { return static_cast<const TermNode*>(p); }
const StackNode* sn(const void* p) { return static_cast<const StackNode*>(p); }

bool nodes_equal(const void* ra, const void* rb, bool stack) {
  std::vector<NodePair> wl{{ra, rb, stack}};
  while (!wl.empty()) {
    NodePair it = wl.back();
    wl.pop_back();
    if (it.a == it.b) continue;
    if (!it.is_stack) {
      const TermNode* x = tn(it.a);
      const TermNode* y = tn(it.b);
      if (x->h != y->h || x->v.index() != y->v.index()) return false;
      switch (x->v.index()) {
        case 0:
          if (std::get<0>(x->v) != std::get<0>(y->v)) return false;
          break;
        case 1: {
          const TermApp& ax = std::get<1>(x->v);
          const TermApp& ay = std::get<1>(y->v);
          wl.push_back({ax.fn.id(), ay.fn.id(), false});
          wl.push_back({ax.arg.id(), ay.arg.id(), false});
          break;
        }
        default:
          wl.push_back({std::get<2>(x->v).id(), std::get<2>(y->v).id(), true});
      }
    } else {
      const StackNode* x = sn(it.a);
      const StackNode* y = sn(it.b);
      if (x->h != y->h || x->v.index() != y->v.index()) return false;
      if (x->v.index() == 0) {
        if (std::get<0>(x->v) != std::get<0>(y->v)) return false;
      } else {
        const StackPush& px = std::get<1>(x->v);
        const StackPush& py = std::get<1>(y->v);
        wl.push_back({px.top.id(), py.top.id(), false});
        wl.push_back({px.rest.id(), py.rest.id(), true});
      }
    }
  }
  return true;
}

// Structural order: first difference in a deterministic pre-order walk wins.
// Term kinds rank Comb < App < Cont; stack kinds rank Const < Push.
int nodes_cmp(const void* ra, const void* rb, bool stack) {
  std::vector<NodePair> wl{{ra, rb, stack}};
  while (!wl.empty()) {
    NodePair it = wl.back();
    wl.pop_back();
    if (it.a == it.b) continue;
    if (!it.is_stack) {
      const TermNode* x = tn(it.a);
      const TermNode* y = tn(it.b);
      if (x->v.index() != y->v.index()) return x->v.index() < y->v.index() ? -1 : 1;
      switch (x->v.index()) {
        case 0: {
          auto cx = std::get<0>(x->v), cy = std::get<0>(y->v);
          if (cx != cy) return cx < cy ? -1 : 1;
          break;
        }
        case 1: {
          const TermApp& ax = std::get<1>(x->v);
          const TermApp& ay = std::get<1>(y->v);
          wl.push_back({ax.arg.id(), ay.arg.id(), false});
          wl.push_back({ax.fn.id(), ay.fn.id(), false});
          break;
        }
        default:
          wl.push_back({std::get<2>(x->v).id(), std::get<2>(y->v).id(), true});
      }
    } else {
      const StackNode* x = sn(it.a);
      const StackNode* y = sn(it.b);
      if (x->v.index() != y->v.index()) return x->v.index() < y->v.index() ? -1 : 1;
      if (x->v.index() == 0) {
        auto ix = std::get<0>(x->v), iy = std::get<0>(y->v);
        if (ix != iy) return ix < iy ? -1 : 1;
      } else {
        const StackPush& px = std::get<1>(x->v);
        const StackPush& py = std::get<1>(y->v);
        wl.push_back({px.rest.id(), py.rest.id(), true});
        wl.push_back({px.top.id(), py.top.id(), false});
      }
    }
  }
  return 0;
}

}  // namespace

bool Term::operator==(const Term& o) const {
  if (p_.get() == o.p_.get()) return true;
  if (p_->h != o.p_->h) return false;
  return nodes_equal(p_.get(), o.p_.get(), false);
}

bool Stack::operator==(const Stack& o) const {
  if (p_.get() == o.p_.get()) return true;
  if (p_->h != o.p_->h) return false;
  return nodes_equal(p_.get(), o.p_.get(), true);
}

int term_cmp(const Term& a, const Term& b) { return nodes_cmp(a.id(), b.id(), false); }
int stack_cmp(const Stack& a, const Stack& b) { return nodes_cmp(a.id(), b.id(), true); }

// -- numerals -----------------------------------------------------------------

const Term& sigma() {
  static const Term s = Term::app(Term::app(Term::comb(Comb::B), Term::comb(Comb::W)),
                                  Term::app(Term::comb(Comb::B), Term::comb(Comb::B)));
  return s;
}

Term numeral(std::uint64_t n) {
  Term t = Term::app(Term::comb(Comb::K), Term::comb(Comb::I));
  for (std::uint64_t i = 0; i < n; ++i) t = Term::app(sigma(), t);
  return t;
}

std::optional<std::uint64_t> numeral_value(const Term& t) {
  static const Term zero = numeral(0);
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (cur->is_app() && cur->fn() == sigma()) {
    ++n;
    cur = &cur->arg();
  }
  if (*cur == zero) return n;
  return std::nullopt;
}

// -- printing -----------------------------------------------------------------

namespace {

struct PrintItem {
  // exactly one of lit / term / stack is set
  const char* lit = nullptr;
  const TermNode* term = nullptr;
  const StackNode* stack = nullptr;
};

void print_walk(std::string& out, std::vector<PrintItem>& st) {
  while (!st.empty()) {
    PrintItem it = st.back();
    st.pop_back();
    if (it.lit) {
      out += it.lit;
      continue;
    }
    if (it.term) {
      const TermNode* n = it.term;
      switch (n->v.index()) {
        case 0:
          out += kCombNames[static_cast<int>(std::get<0>(n->v))];
          break;
        case 1: {
          const TermApp& a = std::get<1>(n->v);
          st.push_back({")", nullptr, nullptr});
          st.push_back({nullptr, tn(a.arg.id()), nullptr});
          st.push_back({" ", nullptr, nullptr});
          st.push_back({nullptr, tn(a.fn.id()), nullptr});
          out += "(";
          break;
        }
        default:
          st.push_back({"]", nullptr, nullptr});
          st.push_back({nullptr, nullptr, sn(std::get<2>(n->v).id())});
          out += "k[";
      }
      continue;
    }
    const StackNode* n = it.stack;
    if (n->v.index() == 0) {
      out += "pi";
      out += std::to_string(std::get<0>(n->v));
    } else {
      const StackPush& p = std::get<1>(n->v);
      st.push_back({nullptr, nullptr, sn(p.rest.id())});
      st.push_back({" . ", nullptr, nullptr});
      st.push_back({nullptr, tn(p.top.id()), nullptr});
    }
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  std::vector<PrintItem> st{{nullptr, tn(t.id()), nullptr}};
  print_walk(out, st);
  return out;
}

std::string to_string(const Stack& s) {
  std::string out;
  std::vector<PrintItem> st{{nullptr, nullptr, sn(s.id())}};
  print_walk(out, st);
  return out;
}

std::string to_string(const Process& p) {
  std::string out = to_string(p.head);
  out += " * ";
  out += to_string(p.stack);
  return out;
}

// -- parsing ------------------------------------------------------------------

namespace {

struct Lexer {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  void expect(char c, const char* what) {
    if (peek() != c) fail(std::string("expected ") + what);
    ++i;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(i));
  }
  // [A-Za-z_][A-Za-z0-9_]*
  std::string_view ident() {
    skip_ws();
    std::size_t start = i;
    if (i >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      fail("expected identifier");
    }
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    return s.substr(start, i - start);
  }
};

bool pi_index(std::string_view id, std::uint32_t* out) {
  if (id.size() < 3 || id.substr(0, 2) != "pi") return false;
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(id.data() + 2, id.data() + id.size(), v);
  if (ec != std::errc() || p != id.data() + id.size()) return false;
  *out = v;
  return true;
}

// Printed terms nest arbitrarily deep (a numeral alone is one application
// per unit), so the parser keeps its own frame stack instead of recursing.
// A frame is a construct waiting for subresults: an application collecting
// its two terms, a continuation waiting for its stack, or a stack collecting
// pushed entries until the pi constant closes it.
struct PFrame {
  enum class K { App, Cont, Entries };
  K kind;
  std::vector<Term> terms;
};

void parse_core(Lexer& lx, bool want_stack, std::optional<Term>& out_t,
                std::optional<Stack>& out_s) {
  std::vector<PFrame> frames;
  std::optional<Term> t;   // completed term awaiting delivery
  std::optional<Stack> st; // completed stack awaiting delivery
  bool at_entry = want_stack;
  if (want_stack) frames.push_back({PFrame::K::Entries, {}});

  for (;;) {
    if (t) {
      if (frames.empty()) {
        out_t = std::move(t);
        return;
      }
      PFrame& fr = frames.back();
      if (fr.kind == PFrame::K::App) {
        fr.terms.push_back(*std::move(t));
        t.reset();
        if (fr.terms.size() == 2) {
          lx.expect(')', "')'");
          t = Term::app(fr.terms[0], fr.terms[1]);
          frames.pop_back();
        }
      } else {  // Entries; Cont only ever receives a stack
        lx.expect('.', "'.' between stack entries");
        fr.terms.push_back(*std::move(t));
        t.reset();
        at_entry = true;
      }
      continue;
    }
    if (st) {
      if (frames.empty()) {
        out_s = std::move(st);
        return;
      }
      lx.expect(']', "']'");
      t = Term::cont(*st);
      st.reset();
      frames.pop_back();  // the Cont frame
      continue;
    }
    if (at_entry) {
      at_entry = false;
      char c = lx.peek();
      if (c != '(' && (std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
        std::size_t save = lx.i;
        std::string_view id = lx.ident();
        std::uint32_t idx;
        if (pi_index(id, &idx)) {
          Stack s = Stack::constant(idx);
          PFrame& fr = frames.back();
          for (auto it = fr.terms.rbegin(); it != fr.terms.rend(); ++it)
            s = Stack::push(*it, s);
          frames.pop_back();
          st = std::move(s);
          continue;
        }
        lx.i = save;  // a term constant: fall through to term parsing
      }
    }
    char c = lx.peek();
    if (c == '(') {
      ++lx.i;
      frames.push_back({PFrame::K::App, {}});
      continue;
    }
    std::string_view id = lx.ident();
    if (id == "k") {
      lx.expect('[', "'[' after k");
      frames.push_back({PFrame::K::Cont, {}});
      frames.push_back({PFrame::K::Entries, {}});
      at_entry = true;
      continue;
    }
    if (auto cb = comb_from_name(id)) {
      t = Term::comb(*cb);
      continue;
    }
    std::uint32_t idx;
    if (pi_index(id, &idx)) lx.fail("stack constant in term position");
    lx.fail("unknown term constant '" + std::string(id) + "'");
  }
}

Term parse_term_at(Lexer& lx) {
  std::optional<Term> t;
  std::optional<Stack> s;
  parse_core(lx, false, t, s);
  return *t;
}

Stack parse_stack_at(Lexer& lx) {
  std::optional<Term> t;
  std::optional<Stack> s;
  parse_core(lx, true, t, s);
  return *s;
}

}  // namespace

Term parse_term(std::string_view text) {
  Lexer lx{text};
  Term t = parse_term_at(lx);
  if (!lx.done()) lx.fail("trailing input after term");
  return t;
}

Stack parse_stack(std::string_view text) {
  Lexer lx{text};
  Stack s = parse_stack_at(lx);
  if (!lx.done()) lx.fail("trailing input after stack");
  return s;
}

Process parse_process(std::string_view text) {
  Lexer lx{text};
  Term t = parse_term_at(lx);
  lx.expect('*', "'*' between term and stack");
  Stack s = parse_stack_at(lx);
  if (!lx.done()) lx.fail("trailing input after process");
  return Process{t, s};
}

// -- sizes and constants --------------------------------------------------------

namespace {

struct WalkItem {
  const void* node;
  bool is_stack;
  bool expanded;
};

// Post-order size with memoisation; values saturate at cap + 1. Nodes must
// stay alive while the memo does (the memo is keyed on addresses).
std::uint64_t measure_node(std::unordered_map<const void*, std::uint64_t>& memo,
                           const void* root, bool root_is_stack, std::uint64_t cap) {
  auto sat = [cap](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (a > cap || b > cap) return cap + 1;
    std::uint64_t s = a + b + 1;
    return s > cap ? cap + 1 : s;
  };
  std::vector<WalkItem> wl{{root, root_is_stack, false}};
  while (!wl.empty()) {
    WalkItem& it = wl.back();
    if (memo.count(it.node)) {
      wl.pop_back();
      continue;
    }
    if (!it.is_stack) {
      const TermNode* n = tn(it.node);
      switch (n->v.index()) {
        case 0:
          memo[it.node] = 1;
          wl.pop_back();
          break;
        case 1: {
          const TermApp& a = std::get<1>(n->v);
          auto fi = memo.find(a.fn.id());
          auto ai = memo.find(a.arg.id());
          if (fi != memo.end() && ai != memo.end()) {
            memo[it.node] = sat(fi->second, ai->second);
            wl.pop_back();
          } else if (!it.expanded) {
            it.expanded = true;
            wl.push_back({a.fn.id(), false, false});
            wl.push_back({a.arg.id(), false, false});
          } else {
            wl.pop_back();  // children resolved on a different path
          }
          break;
        }
        default: {
          const Stack& s = std::get<2>(n->v);
          auto si = memo.find(s.id());
          if (si != memo.end()) {
            std::uint64_t v = si->second >= cap ? cap + 1 : si->second + 1;
            memo[it.node] = v;
            wl.pop_back();
          } else if (!it.expanded) {
            it.expanded = true;
            wl.push_back({s.id(), true, false});
          } else {
            wl.pop_back();
          }
        }
      }
    } else {
      const StackNode* n = sn(it.node);
      if (n->v.index() == 0) {
        memo[it.node] = 1;
        wl.pop_back();
      } else {
        const StackPush& p = std::get<1>(n->v);
        auto ti = memo.find(p.top.id());
        auto ri = memo.find(p.rest.id());
        if (ti != memo.end() && ri != memo.end()) {
          memo[it.node] = sat(ti->second, ri->second);
          wl.pop_back();
        } else if (!it.expanded) {
          it.expanded = true;
          wl.push_back({p.top.id(), false, false});
          wl.push_back({p.rest.id(), true, false});
        } else {
          wl.pop_back();
        }
      }
    }
  }
  return memo.at(root);
}

void scan_node(std::unordered_set<const void*>& visited, std::set<std::uint32_t>& found,
               const void* root, bool root_is_stack) {
  std::vector<WalkItem> wl{{root, root_is_stack, false}};
  while (!wl.empty()) {
    WalkItem it = wl.back();
    wl.pop_back();
    if (!visited.insert(it.node).second) continue;
    if (!it.is_stack) {
      const TermNode* n = tn(it.node);
      switch (n->v.index()) {
        case 0:
          break;
        case 1: {
          const TermApp& a = std::get<1>(n->v);
          wl.push_back({a.fn.id(), false, false});
          wl.push_back({a.arg.id(), false, false});
          break;
        }
        default:
          wl.push_back({std::get<2>(n->v).id(), true, false});
      }
    } else {
      const StackNode* n = sn(it.node);
      if (n->v.index() == 0) {
        found.insert(std::get<0>(n->v));
      } else {
        const StackPush& p = std::get<1>(n->v);
        wl.push_back({p.top.id(), false, false});
        wl.push_back({p.rest.id(), true, false});
      }
    }
  }
}

}  // namespace

std::uint64_t SizeMemo::term_size(const Term& t, std::uint64_t cap) {
  return measure_node(memo_, t.id(), false, cap);
}

std::uint64_t SizeMemo::stack_size(const Stack& s, std::uint64_t cap) {
  return measure_node(memo_, s.id(), true, cap);
}

std::uint64_t SizeMemo::process_size(const Process& p, std::uint64_t cap) {
  std::uint64_t a = term_size(p.head, cap);
  std::uint64_t b = stack_size(p.stack, cap);
  if (a > cap || b > cap) return cap + 1;
  std::uint64_t s = a + b;
  return s > cap ? cap + 1 : s;
}

void ConstantScan::scan(const Term& t) { scan_node(visited_, found_, t.id(), false); }

void ConstantScan::scan(const Stack& s) { scan_node(visited_, found_, s.id(), true); }

void ConstantScan::scan(const Process& p) {
  scan(p.head);
  scan(p.stack);
}

std::set<std::uint32_t> constant_indices(const Process& p) {
  ConstantScan cs;
  cs.scan(p);
  return cs.found();
}

}  // namespace rz
