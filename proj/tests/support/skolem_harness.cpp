#include "support/skolem_harness.hpp"

namespace densevec::testing {

namespace {

const Completion kPosInf = Completion::germ_pos_inf();

// Total Skolem interpretation: unseen argument tuples get fresh generators.
struct Interp {
  ModelSession& session;
  SkolemTable table;

  const ModelElement& at(const std::string& fn, const std::vector<ModelElement>& args) {
    for (const auto& row : table)
      if (row.fn == fn && row.args == args) return row.value;
    table.push_back({fn, args, session.fresh_generator()});
    return table.back().value;
  }
};

// theta of the form  L(params) < out : witnesses always exist.
SkolemFn random_lower_theta(Gen& gen, const std::string& name, std::size_t arity) {
  std::vector<std::string> params;
  for (std::size_t i = 0; i < arity; ++i) params.push_back("p" + std::to_string(i));
  LinearTerm lhs = gen.linear_term(params);
  lhs.add_coeff("out", RationalFunction(Rational(-1)));
  return make_skolem_fn(name, params, mk_atom(lhs, Rel::Lt));
}

ModelElement lower_theta_witness(const SkolemFn& fn, const std::vector<ModelElement>& args) {
  Environment env;
  for (std::size_t i = 0; i < args.size(); ++i) env.emplace(fn.params[i], args[i]);
  LinearTerm lower = fn.theta->atom.lhs.without(fn.out);
  return element_combination(lower, env).plus(ModelElement::one());
}

SkolemSignature two_symbol_signature(Gen& gen) {
  SkolemSignature sig;
  sig.fns.push_back(random_lower_theta(gen, "F", 1));
  sig.fns.push_back(random_lower_theta(gen, "G", 2));
  return sig;
}

}  // namespace

ChainSplitRun run_chain_split_property(std::uint64_t seed, int chains, int points) {
  Gen gen(seed);
  ChainSplitRun run;
  for (int trial = 0; trial < chains; ++trial) {
    SkolemSignature sig = two_symbol_signature(gen);

    TermChain chain;
    chain.inputs = {"x1", "x2"};
    long steps = gen.pick(1, 4);
    for (long i = 0; i < steps; ++i) {
      std::vector<std::string> avail = chain.inputs;
      for (long j = 1; j <= i; ++j) avail.push_back("y" + std::to_string(j));
      auto pick_var = [&] {
        return avail[static_cast<std::size_t>(gen.pick(0, static_cast<long>(avail.size()) - 1))];
      };
      switch (gen.pick(0, 2)) {
        case 0:
          chain.steps.push_back(ChainStep{true, "F", {pick_var()}, {}});
          break;
        case 1:
          chain.steps.push_back(ChainStep{true, "G", {pick_var(), pick_var()}, {}});
          break;
        default:
          chain.steps.push_back(ChainStep{false, "", {}, gen.linear_term(avail)});
          break;
      }
    }
    ChainSplit split = split_term_chain(sig, chain);
    ++run.chains;

    for (int point = 0; point < points; ++point) {
      ModelSession session(kPosInf);
      Interp interp{session, {}};
      Environment env;
      env.emplace("x1", gen.generic_element(session));
      env.emplace("x2", gen.generic_element(session));

      std::vector<ModelElement> chain_values;
      for (const auto& step : chain.steps) {
        Environment scope = env;
        for (std::size_t j = 0; j < chain_values.size(); ++j)
          scope.emplace("y" + std::to_string(j + 1), chain_values[j]);
        if (step.skolem) {
          std::vector<ModelElement> args;
          for (const auto& name : step.args) args.push_back(scope.at(name));
          chain_values.push_back(interp.at(step.fn, args));
        } else {
          chain_values.push_back(element_combination(step.base, scope));
        }
      }

      auto sides_agree = [&](const std::vector<ModelElement>& ys) {
        Environment scope = env;
        for (std::size_t j = 0; j < ys.size(); ++j)
          scope.emplace("y" + std::to_string(j + 1), ys[j]);
        bool rhs = true;
        for (std::size_t j = 0; j < ys.size(); ++j) rhs = rhs && (ys[j] == chain_values[j]);
        bool lhs = session.eval_formula(split.base, scope);
        for (const auto& c : split.config.conjuncts) {
          std::vector<ModelElement> args;
          for (const auto& name : c.args) args.push_back(scope.at(name));
          lhs = lhs && (interp.at(c.fn, args) == scope.at(c.out));
        }
        return lhs == rhs;
      };

      ++run.points;
      if (!sides_agree(chain_values)) ++run.mismatches;
      std::vector<ModelElement> perturbed = chain_values;
      if (!perturbed.empty()) {
        std::size_t k =
            static_cast<std::size_t>(gen.pick(0, static_cast<long>(perturbed.size()) - 1));
        perturbed[k] = perturbed[k].plus(gen.generic_element(session));
        if (!sides_agree(perturbed)) ++run.mismatches;
      }
    }
  }
  return run;
}

EligibilityRun run_eligibility_property(std::uint64_t seed, int instances) {
  Gen gen(seed);
  EligibilityRun run;
  for (int trial = 0; trial < instances; ++trial) {
    SkolemSignature sig = two_symbol_signature(gen);

    UniformConfiguration config;
    long conjuncts = gen.pick(1, 3);
    std::vector<std::string> arg_vars = {"a1", "a2"};
    for (long i = 0; i < conjuncts; ++i) {
      std::string out = "b" + std::to_string(i);
      if (gen.pick(0, 1) == 0)
        config.conjuncts.push_back(
            ConfigConjunct{"F", {arg_vars[static_cast<std::size_t>(gen.pick(0, 1))]}, out});
      else
        config.conjuncts.push_back(
            ConfigConjunct{"G",
                           {arg_vars[static_cast<std::size_t>(gen.pick(0, 1))],
                            arg_vars[static_cast<std::size_t>(gen.pick(0, 1))]},
                           out});
    }

    ModelSession session(kPosInf);
    Environment point;
    point.emplace("a1", gen.generic_element(session));
    point.emplace("a2", gen.generic_element(session));

    SkolemTable table;
    for (const auto& c : config.conjuncts) {
      const SkolemFn& fn = sig.require(c.fn);
      std::vector<ModelElement> args;
      for (const auto& name : c.args) args.push_back(point.at(name));
      const ModelElement* existing = nullptr;
      for (const auto& row : table)
        if (row.fn == c.fn && row.args == args) existing = &row.value;
      ModelElement value = existing ? *existing : lower_theta_witness(fn, args);
      table.push_back({c.fn, args, value});
      point.emplace(c.out, value);
    }

    ++run.instances;
    FormulaPtr code_qf = elim_quantifiers(eligibility_code(sig, config)).formula;
    if (!session.eval_formula(code_qf, point)) {
      ++run.ineligible;
      continue;
    }

    std::vector<std::vector<ModelElement>> points;
    for (const auto& row : table) points.push_back(row.args);
    for (const auto& fn : sig.fns)
      for (const auto& pt : points) {
        if (pt.size() != fn.params.size()) continue;
        bool present = false;
        for (const auto& row : table)
          if (row.fn == fn.name && row.args == pt) present = true;
        if (!present) table.push_back({fn.name, pt, lower_theta_witness(fn, pt)});
      }
    run.violations +=
        static_cast<long>(check_finite_model(session, sig, table, points).violations.size());
  }
  return run;
}

AxiomRun run_axiom_roundtrip_property(std::uint64_t seed, int instances) {
  Gen gen(seed);
  AxiomRun run;
  for (int trial = 0; trial < instances; ++trial) {
    SkolemSignature sig = two_symbol_signature(gen);
    std::vector<std::string> vars;
    long n = gen.pick(2, 4);
    for (long i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
    std::size_t k = static_cast<std::size_t>(gen.pick(0, n - 1));

    UniformConfiguration config;
    long conjuncts = gen.pick(0, 2);
    for (long i = 0; i < conjuncts; ++i) {
      auto v = [&] {
        return vars[static_cast<std::size_t>(gen.pick(0, n - 1))];
      };
      if (gen.pick(0, 1) == 0)
        config.conjuncts.push_back(ConfigConjunct{"F", {v()}, v()});
      else
        config.conjuncts.push_back(ConfigConjunct{"G", {v(), v()}, v()});
    }
    FormulaPtr phi = gen.qf_formula(vars, 3, 2);

    ++run.instances;
    SkFormulaPtr axiom = axiom_instance(sig, phi, config, vars, k);
    bool closed = sk_free_vars(axiom).empty();
    std::string printed = sk_print(axiom);
    SkFormulaPtr reparsed = sk_parse(sig, printed);
    bool round = sk_equal(axiom, reparsed) && sk_print(reparsed) == printed;
    if (!closed || !round) ++run.failures;
  }
  return run;
}

}  // namespace densevec::testing
