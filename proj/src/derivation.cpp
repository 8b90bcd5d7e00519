#include "rz/derivation.hpp"

#include <stdexcept>

#include "reader.hpp"

namespace rz {

struct Derivation::Node {
  Rule r = Rule::Hyp;
  std::string var;
  Formula hyp_formula = Formula::top();
  SetTerm witness = st_num(0);
  Formula concl = Formula::top();
  std::vector<Derivation> kids;
};

Derivation Derivation::make(Rule r, std::string var, Formula hyp_formula, SetTerm witness,
                            Formula concl, std::vector<Derivation> kids) {
  auto node = std::make_shared<Node>();
  node->r = r;
  node->var = std::move(var);
  node->hyp_formula = std::move(hyp_formula);
  node->witness = std::move(witness);
  node->concl = std::move(concl);
  node->kids = std::move(kids);
  return Derivation(std::shared_ptr<const Node>(std::move(node)));
}

namespace {
void check_var(const std::string& var) {
  if (!detail::valid_var_name(var)) throw std::invalid_argument("bad variable name '" + var + "'");
}
}  // namespace

Derivation Derivation::hyp(std::string var, Formula concl) {
  check_var(var);
  return make(Rule::Hyp, std::move(var), Formula::top(), st_num(0), std::move(concl), {});
}

Derivation Derivation::mp(Derivation major, Derivation minor, Formula concl) {
  return make(Rule::Mp, "", Formula::top(), st_num(0), std::move(concl),
              {std::move(major), std::move(minor)});
}

Derivation Derivation::lam(std::string var, Formula hypothesis, Derivation body, Formula concl) {
  check_var(var);
  return make(Rule::Lam, std::move(var), std::move(hypothesis), st_num(0), std::move(concl),
              {std::move(body)});
}

Derivation Derivation::all_intro(std::string var, Derivation body, Formula concl) {
  check_var(var);
  return make(Rule::AllIntro, std::move(var), Formula::top(), st_num(0), std::move(concl),
              {std::move(body)});
}

Derivation Derivation::all_elim(SetTerm witness, Derivation body, Formula concl) {
  return make(Rule::AllElim, "", Formula::top(), std::move(witness), std::move(concl),
              {std::move(body)});
}

Derivation Derivation::peirce(Formula concl) {
  return make(Rule::Peirce, "", Formula::top(), st_num(0), std::move(concl), {});
}

Derivation Derivation::efq(Derivation body, Formula concl) {
  return make(Rule::Efq, "", Formula::top(), st_num(0), std::move(concl), {std::move(body)});
}

Derivation::Rule Derivation::rule() const { return p_->r; }

const char* Derivation::rule_name() const {
  switch (p_->r) {
    case Rule::Hyp: return "hyp";
    case Rule::Mp: return "mp";
    case Rule::Lam: return "lam";
    case Rule::AllIntro: return "all-intro";
    case Rule::AllElim: return "all-elim";
    case Rule::Peirce: return "peirce";
    default: return "efq";
  }
}

const std::string& Derivation::var() const { return p_->var; }
const Formula& Derivation::hypothesis() const { return p_->hyp_formula; }
const SetTerm& Derivation::witness() const { return p_->witness; }
const Formula& Derivation::concl() const { return p_->concl; }
const std::vector<Derivation>& Derivation::kids() const { return p_->kids; }

bool Derivation::operator==(const Derivation& o) const {
  if (p_ == o.p_) return true;
  if (p_->r != o.p_->r || p_->var != o.p_->var || p_->hyp_formula != o.p_->hyp_formula ||
      !(p_->witness == o.p_->witness) || p_->concl != o.p_->concl ||
      p_->kids.size() != o.p_->kids.size()) {
    return false;
  }
  for (std::size_t i = 0; i < p_->kids.size(); ++i) {
    if (p_->kids[i] != o.p_->kids[i]) return false;
  }
  return true;
}

namespace {

struct Checker {
  std::vector<const char*> path;

  [[noreturn]] void fail(const std::string& msg) const {
    std::string where;
    for (const char* p : path) {
      where += '/';
      where += p;
    }
    throw CheckError(msg + " [at " + where + "]");
  }

  static const Formula* lookup(const Context& ctx, const std::string& var) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
      if (it->first == var) return &it->second;
    }
    return nullptr;
  }

  LambdaTerm go(const Derivation& d, const Context& ctx) {
    path.push_back(d.rule_name());
    LambdaTerm out = dispatch(d, ctx);
    path.pop_back();
    return out;
  }

  LambdaTerm dispatch(const Derivation& d, const Context& ctx) {
    using R = Derivation::Rule;
    using FK = Formula::Kind;
    std::vector<Formula> goals = expand(d.concl());
    switch (d.rule()) {
      case R::Hyp: {
        const Formula* h = lookup(ctx, d.var());
        if (!h) fail("hypothesis '" + d.var() + "' is not in the context");
        std::vector<Formula> comps = expand(*h);
        for (const Formula& g : goals) {
          bool found = false;
          for (const Formula& c : comps) {
            if (alpha_equal(g, c)) {
              found = true;
              break;
            }
          }
          if (!found) {
            fail("hypothesis '" + d.var() + "' : " + to_string(*h) +
                 " does not yield the conclusion " + to_string(d.concl()));
          }
        }
        return LambdaTerm::var(d.var());
      }
      case R::Mp: {
        const Derivation& major = d.kids()[0];
        const Derivation& minor = d.kids()[1];
        std::vector<Formula> majors = expand(major.concl());
        std::vector<Formula> minors = expand(minor.concl());
        if (minors.size() != 1) {
          fail("the minor premise " + to_string(minor.concl()) +
               " expands to a formula pair; eliminate one component at a time");
        }
        if (majors.size() != goals.size()) {
          fail("the major premise provides " + std::to_string(majors.size()) +
               " implications for " + std::to_string(goals.size()) + " obligations");
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
          if (majors[i].kind() != FK::Implies) {
            fail("the major premise " + to_string(major.concl()) + " is not an implication");
          }
          if (!alpha_equal(majors[i].child(0), minors[0])) {
            fail("the minor premise does not match the antecedent of " + to_string(majors[i]));
          }
          if (!alpha_equal(majors[i].child(1), goals[i])) {
            fail("the conclusion does not match the consequent of " + to_string(majors[i]));
          }
        }
        LambdaTerm f = go(major, ctx);
        LambdaTerm a = go(minor, ctx);
        return LambdaTerm::app(f, a);
      }
      case R::Lam: {
        std::vector<Formula> hyps = expand(d.hypothesis());
        if (hyps.size() != 1) {
          fail("the discharged hypothesis " + to_string(d.hypothesis()) +
               " expands to a formula pair; one binder cannot feed two obligations");
        }
        const Derivation& body = d.kids()[0];
        std::vector<Formula> bg = expand(body.concl());
        if (bg.size() != goals.size()) {
          fail("the body provides " + std::to_string(bg.size()) + " formulas for " +
               std::to_string(goals.size()) + " obligations");
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
          if (goals[i].kind() != FK::Implies) {
            fail("the conclusion " + to_string(d.concl()) + " is not an implication");
          }
          if (!alpha_equal(goals[i].child(0), hyps[0])) {
            fail("the conclusion does not start with the discharged hypothesis " +
                 to_string(d.hypothesis()));
          }
          if (!alpha_equal(goals[i].child(1), bg[i])) {
            fail("the body proves " + to_string(body.concl()) +
                 ", not the consequent of the conclusion");
          }
        }
        Context ext = ctx;
        ext.emplace_back(d.var(), d.hypothesis());
        return LambdaTerm::abs(d.var(), go(body, ext));
      }
      case R::AllIntro: {
        const Derivation& body = d.kids()[0];
        for (const auto& [hname, hf] : ctx) {
          if (free_vars(hf).count(d.var())) {
            fail("eigenvariable '" + d.var() + "' occurs free in hypothesis '" + hname +
                 "' : " + to_string(hf));
          }
        }
        std::vector<Formula> expected = expand(Formula::forall(d.var(), body.concl()));
        if (expected.size() != goals.size()) {
          fail("the body provides " + std::to_string(expected.size()) + " formulas for " +
               std::to_string(goals.size()) + " obligations");
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
          if (!alpha_equal(goals[i], expected[i])) {
            fail("the conclusion is not the premise generalized over '" + d.var() + "'");
          }
        }
        return go(body, ctx);
      }
      case R::AllElim: {
        const Derivation& body = d.kids()[0];
        std::vector<Formula> prem = expand(body.concl());
        if (prem.size() != goals.size()) {
          fail("the premise provides " + std::to_string(prem.size()) + " formulas for " +
               std::to_string(goals.size()) + " obligations");
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
          if (prem[i].kind() != FK::Forall) {
            fail("the premise " + to_string(body.concl()) + " is not a universal formula");
          }
          Formula inst = subst(prem[i].child(0), prem[i].name(), d.witness());
          if (!alpha_equal(goals[i], inst)) {
            fail("the conclusion is not the premise at the witness " + to_string(d.witness()));
          }
        }
        return go(body, ctx);
      }
      case R::Peirce: {
        if (goals.size() != 1) fail("the conclusion expands to a formula pair");
        const Formula& g = goals[0];
        bool shaped = g.kind() == FK::Implies && g.child(0).kind() == FK::Implies &&
                      g.child(0).child(0).kind() == FK::Implies;
        if (!shaped || !alpha_equal(g.child(0).child(0).child(0), g.child(0).child(1)) ||
            !alpha_equal(g.child(0).child(1), g.child(1))) {
          fail("the conclusion " + to_string(d.concl()) +
               " does not have the shape ((A -> B) -> A) -> A");
        }
        return LambdaTerm::constant(Comb::Cc);
      }
      case R::Efq: {
        const Derivation& body = d.kids()[0];
        std::vector<Formula> prem = expand(body.concl());
        if (prem.size() != 1 || prem[0].kind() != FK::Bottom) {
          fail("the premise " + to_string(body.concl()) + " does not prove bottom");
        }
        return go(body, ctx);
      }
    }
    throw std::logic_error("unreachable derivation rule");
  }
};

}  // namespace

LambdaTerm extract(const Derivation& d, const Context& context) {
  Checker c;
  return c.go(d, context);
}

CTerm check(const Derivation& d, const Context& context) {
  return compile(extract(d, context));
}

namespace {

void print_derivation(const Derivation& d, std::string& out) {
  using R = Derivation::Rule;
  out += '(';
  out += d.rule_name();
  switch (d.rule()) {
    case R::Hyp:
    case R::AllIntro:
      out += ' ';
      out += d.var();
      break;
    case R::Lam:
      out += ' ';
      out += d.var();
      out += ' ';
      out += to_string(d.hypothesis());
      break;
    case R::AllElim:
      out += ' ';
      out += to_string(d.witness());
      break;
    default:
      break;
  }
  out += ' ';
  out += to_string(d.concl());
  for (const Derivation& kid : d.kids()) {
    out += ' ';
    print_derivation(kid, out);
  }
  out += ')';
}

Derivation d_from_node(const sx::Node& n) {
  if (n.is_atom || n.items.empty() || !n.items[0].is_atom) {
    throw ParseError("expected a derivation node at offset " + std::to_string(n.offset));
  }
  const std::string& h = n.items[0].atom;
  auto need = [&](std::size_t count) {
    if (n.items.size() != count) {
      throw ParseError(h + " node has the wrong shape at offset " + std::to_string(n.offset));
    }
  };
  auto var_at = [&](std::size_t i) {
    if (!n.items[i].is_atom || !detail::valid_var_name(n.items[i].atom)) {
      throw ParseError("expected a variable at offset " + std::to_string(n.items[i].offset));
    }
    return n.items[i].atom;
  };
  if (h == "hyp") {
    need(3);
    return Derivation::hyp(var_at(1), detail::formula_from_node(n.items[2]));
  }
  if (h == "mp") {
    need(4);
    return Derivation::mp(d_from_node(n.items[2]), d_from_node(n.items[3]),
                          detail::formula_from_node(n.items[1]));
  }
  if (h == "lam") {
    need(5);
    return Derivation::lam(var_at(1), detail::formula_from_node(n.items[2]),
                           d_from_node(n.items[4]), detail::formula_from_node(n.items[3]));
  }
  if (h == "all-intro") {
    need(4);
    return Derivation::all_intro(var_at(1), d_from_node(n.items[3]),
                                 detail::formula_from_node(n.items[2]));
  }
  if (h == "all-elim") {
    need(4);
    return Derivation::all_elim(detail::set_term_from_node(n.items[1]), d_from_node(n.items[3]),
                                detail::formula_from_node(n.items[2]));
  }
  if (h == "peirce") {
    need(2);
    return Derivation::peirce(detail::formula_from_node(n.items[1]));
  }
  if (h == "efq") {
    need(3);
    return Derivation::efq(d_from_node(n.items[2]), detail::formula_from_node(n.items[1]));
  }
  throw ParseError("unknown derivation rule '" + h + "' at offset " + std::to_string(n.offset));
}

}  // namespace

std::string to_string(const Derivation& d) {
  std::string out;
  print_derivation(d, out);
  return out;
}

std::string sequent_to_string(const Context& context, const Derivation& d) {
  std::string out = "(derivation (context";
  for (const auto& [name, f] : context) {
    out += " (" + name + ' ' + to_string(f) + ')';
  }
  out += ") ";
  print_derivation(d, out);
  out += ')';
  return out;
}

Derivation parse_derivation(std::string_view text) { return d_from_node(sx::parse_one(text)); }

std::pair<Context, Derivation> parse_sequent(std::string_view text) {
  sx::Node n = sx::parse_one(text);
  if (n.is_atom || n.items.size() != 3 || !n.items[0].is_atom || n.items[0].atom != "derivation") {
    throw ParseError("expected (derivation (context ...) node) at offset " +
                     std::to_string(n.offset));
  }
  const sx::Node& cn = n.items[1];
  if (cn.is_atom || cn.items.empty() || !cn.items[0].is_atom || cn.items[0].atom != "context") {
    throw ParseError("expected a context record at offset " + std::to_string(cn.offset));
  }
  Context ctx;
  for (std::size_t i = 1; i < cn.items.size(); ++i) {
    const sx::Node& e = cn.items[i];
    if (e.is_atom || e.items.size() != 2 || !e.items[0].is_atom ||
        !detail::valid_var_name(e.items[0].atom)) {
      throw ParseError("expected a (name formula) hypothesis at offset " +
                       std::to_string(e.offset));
    }
    ctx.emplace_back(e.items[0].atom, detail::formula_from_node(e.items[1]));
  }
  return {std::move(ctx), d_from_node(n.items[2])};
}

}  // namespace rz
