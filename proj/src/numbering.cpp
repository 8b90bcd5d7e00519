#include "rz/numbering.hpp"

#include <unordered_map>
#include <vector>

namespace rz {

BigNat cantor_pair(const BigNat& x, const BigNat& y) {
  BigNat s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<BigNat, BigNat> cantor_unpair(const BigNat& z) {
  // w = max { k : k(k+1)/2 <= z }, then z = w(w+1)/2 + y with y <= w.
  BigNat r = 8 * z + 1;
  BigNat w = (boost::multiprecision::sqrt(r) - 1) / 2;
  while (w * (w + 1) / 2 > z) --w;              // guard against sqrt rounding
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  BigNat y = z - w * (w + 1) / 2;
  BigNat x = w - y;
  return {x, y};
}

// -- encode -------------------------------------------------------------------

namespace {

struct EncItem {
  const void* node;
  bool is_stack;
  bool expanded;
};

const TermNode* tn(const void* p) { return static_cast<const TermNode*>(p); }
const StackNode* sn(const void* p) { return static_cast<const StackNode*>(p); }

// Post-order over the node DAG; shared nodes are encoded once.
BigNat encode_node(const void* root, bool root_is_stack) {
  std::unordered_map<const void*, BigNat> memo;
  std::vector<EncItem> wl{{root, root_is_stack, false}};
  while (!wl.empty()) {
    EncItem& it = wl.back();
    if (memo.count(it.node)) {
      wl.pop_back();
      continue;
    }
    if (!it.is_stack) {
      const TermNode* n = tn(it.node);
      switch (n->v.index()) {
        case 0:
          memo[it.node] = static_cast<int>(std::get<0>(n->v));
          wl.pop_back();
          break;
        case 1: {
          const TermApp& a = std::get<1>(n->v);
          auto fi = memo.find(a.fn.id());
          auto ai = memo.find(a.arg.id());
          if (fi != memo.end() && ai != memo.end()) {
            memo[it.node] = 8 + 2 * cantor_pair(fi->second, ai->second);
            wl.pop_back();
          } else if (!it.expanded) {
            it.expanded = true;
            wl.push_back({a.fn.id(), false, false});
            wl.push_back({a.arg.id(), false, false});
          } else {
            wl.pop_back();
          }
          break;
        }
        default: {
          const Stack& s = std::get<2>(n->v);
          auto si = memo.find(s.id());
          if (si != memo.end()) {
            memo[it.node] = 8 + 2 * si->second + 1;
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
        memo[it.node] = 2 * BigNat(std::get<0>(n->v));
        wl.pop_back();
      } else {
        const StackPush& p = std::get<1>(n->v);
        auto ti = memo.find(p.top.id());
        auto ri = memo.find(p.rest.id());
        if (ti != memo.end() && ri != memo.end()) {
          memo[it.node] = 2 * cantor_pair(ti->second, ri->second) + 1;
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

}  // namespace

BigNat encode_term(const Term& t) { return encode_node(t.id(), false); }
BigNat encode_stack(const Stack& s) { return encode_node(s.id(), true); }

// -- decode -------------------------------------------------------------------

namespace {

// Arena frame for the iterative decoder. Child results live in the child
// frames; a frame combines them once both are filled.
struct DecFrame {
  BigNat code;
  bool is_stack;
  bool expanded = false;
  std::size_t c0 = 0, c1 = 0;  // child frame indices when expanded
  std::optional<Term> t;
  std::optional<Stack> s;

  DecFrame(BigNat c, bool st) : code(std::move(c)), is_stack(st) {}
};

void decode_into(std::vector<DecFrame>& arena, std::size_t root_ix) {
  std::vector<std::size_t> wl{root_ix};
  while (!wl.empty()) {
    std::size_t ix = wl.back();
    if (!arena[ix].is_stack) {
      if (arena[ix].t) {
        wl.pop_back();
        continue;
      }
      if (arena[ix].code < 8) {
        arena[ix].t = Term::comb(static_cast<Comb>(arena[ix].code.convert_to<int>()));
        wl.pop_back();
        continue;
      }
      if (!arena[ix].expanded) {
        BigNat m = arena[ix].code - 8;
        if (m % 2 == 0) {
          auto [x, y] = cantor_unpair(m / 2);
          std::size_t c0 = arena.size();
          arena.push_back({std::move(x), false});
          std::size_t c1 = arena.size();
          arena.push_back({std::move(y), false});
          arena[ix].expanded = true;
          arena[ix].c0 = c0;
          arena[ix].c1 = c1;
          wl.push_back(c0);
          wl.push_back(c1);
        } else {
          std::size_t c0 = arena.size();
          arena.push_back({(m - 1) / 2, true});
          arena[ix].expanded = true;
          arena[ix].c0 = c0;
          arena[ix].c1 = c0;
          wl.push_back(c0);
        }
        continue;
      }
      BigNat m = arena[ix].code - 8;
      if (m % 2 == 0) {
        arena[ix].t = Term::app(*arena[arena[ix].c0].t, *arena[arena[ix].c1].t);
      } else {
        arena[ix].t = Term::cont(*arena[arena[ix].c0].s);
      }
      wl.pop_back();
    } else {
      if (arena[ix].s) {
        wl.pop_back();
        continue;
      }
      if (arena[ix].code % 2 == 0) {
        BigNat j = arena[ix].code / 2;
        if (j > 0xFFFFFFFFu) {
          throw std::overflow_error("stack constant index " + j.str() + " exceeds 2^32 - 1");
        }
        arena[ix].s = Stack::constant(j.convert_to<std::uint32_t>());
        wl.pop_back();
        continue;
      }
      if (!arena[ix].expanded) {
        auto [x, y] = cantor_unpair((arena[ix].code - 1) / 2);
        std::size_t c0 = arena.size();
        arena.push_back({std::move(x), false});
        std::size_t c1 = arena.size();
        arena.push_back({std::move(y), true});
        arena[ix].expanded = true;
        arena[ix].c0 = c0;
        arena[ix].c1 = c1;
        wl.push_back(c0);
        wl.push_back(c1);
        continue;
      }
      arena[ix].s = Stack::push(*arena[arena[ix].c0].t, *arena[arena[ix].c1].s);
      wl.pop_back();
    }
  }
}

}  // namespace

Term decode_term(const BigNat& n) {
  std::vector<DecFrame> arena;
  arena.push_back({n, false});
  decode_into(arena, 0);
  return *arena[0].t;
}

Stack decode_stack(const BigNat& n) {
  std::vector<DecFrame> arena;
  arena.push_back({n, true});
  decode_into(arena, 0);
  return *arena[0].s;
}

// -- bounded encode -----------------------------------------------------------

namespace {

// pair(x, y) for bounded inputs; nullopt when the result exceeds bound.
// The widening to 128 bits keeps the intermediate exact.
std::optional<std::uint64_t> pair_bounded(std::uint64_t x, std::uint64_t y,
                                          std::uint64_t bound) {
  unsigned __int128 s = static_cast<unsigned __int128>(x) + y;
  unsigned __int128 v = s * (s + 1) / 2 + y;
  if (v > bound) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::optional<std::uint64_t> encode_term_bounded(const Term& t, std::uint64_t bound) {
  // A node's code is at least each child's code, so one oversized node sinks
  // the whole encoding; bail out the moment a combine overflows.
  std::unordered_map<const void*, std::uint64_t> memo;
  std::vector<EncItem> wl{{t.id(), false, false}};
  while (!wl.empty()) {
    EncItem& it = wl.back();
    if (memo.count(it.node)) {
      wl.pop_back();
      continue;
    }
    if (!it.is_stack) {
      const TermNode* n = tn(it.node);
      switch (n->v.index()) {
        case 0: {
          std::uint64_t c = static_cast<std::uint64_t>(std::get<0>(n->v));
          if (c > bound) return std::nullopt;
          memo[it.node] = c;
          wl.pop_back();
          break;
        }
        case 1: {
          const TermApp& a = std::get<1>(n->v);
          auto fi = memo.find(a.fn.id());
          auto ai = memo.find(a.arg.id());
          if (fi != memo.end() && ai != memo.end()) {
            if (bound < 8) return std::nullopt;
            auto m = pair_bounded(fi->second, ai->second, (bound - 8) / 2);
            if (!m) return std::nullopt;
            memo[it.node] = 8 + 2 * *m;
            wl.pop_back();
          } else if (!it.expanded) {
            it.expanded = true;
            wl.push_back({a.fn.id(), false, false});
            wl.push_back({a.arg.id(), false, false});
          } else {
            wl.pop_back();
          }
          break;
        }
        default: {
          const Stack& s = std::get<2>(n->v);
          auto si = memo.find(s.id());
          if (si != memo.end()) {
            if (bound < 9 || si->second > (bound - 9) / 2) return std::nullopt;
            memo[it.node] = 8 + 2 * si->second + 1;
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
        std::uint64_t c = 2 * static_cast<std::uint64_t>(std::get<0>(n->v));
        if (c > bound) return std::nullopt;
        memo[it.node] = c;
        wl.pop_back();
      } else {
        const StackPush& p = std::get<1>(n->v);
        auto ti = memo.find(p.top.id());
        auto ri = memo.find(p.rest.id());
        if (ti != memo.end() && ri != memo.end()) {
          if (bound < 1) return std::nullopt;
          auto m = pair_bounded(ti->second, ri->second, (bound - 1) / 2);
          if (!m) return std::nullopt;
          memo[it.node] = 2 * *m + 1;
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
  return memo.at(t.id());
}

bool code_is_proof_like(const BigNat& n) {
  std::vector<BigNat> wl{n};
  while (!wl.empty()) {
    BigNat c = std::move(wl.back());
    wl.pop_back();
    if (c < 8) continue;
    BigNat m = c - 8;
    if (m % 2 != 0) return false;  // a continuation
    auto [x, y] = cantor_unpair(m / 2);
    wl.push_back(std::move(x));
    wl.push_back(std::move(y));
  }
  return true;
}

}  // namespace rz
