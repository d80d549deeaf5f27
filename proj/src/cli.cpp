#include "orbitlab/cli.hpp"

#include "orbitlab/builtin.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/geometry.hpp"
#include "orbitlab/io.hpp"
#include "orbitlab/properties.hpp"
#include "orbitlab/semisimple.hpp"
#include "orbitlab/structure.hpp"
#include "orbitlab/volume.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

namespace orbitlab::cli {

namespace {

using io::Json;

struct AlgebraInput {
  std::string id;
  std::shared_ptr<const LieAlgebra> algebra;
  std::optional<LinearMap> theta;
  std::optional<Matrix> beta;
};

struct Inputs {
  std::vector<AlgebraInput> algebras;
  std::vector<InnerProduct> inner_products;
  std::optional<WeightVector> weights;
  std::optional<Matrix> beta;
  std::optional<Matrix> theta;
};

int exit_code_for(const Error& e) {
  return e.category() == ErrorCategory::Verification ? kExitVerification : kExitInput;
}

Json error_json(const std::string& category, const std::string& message) {
  return Json{{"category", category}, {"message", message}};
}

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  for (const auto& name : cfg.builtins) {
    BuiltinAlgebra b = parse_builtin(name, cfg.tolerance);
    in.algebras.push_back({b.name, std::make_shared<const LieAlgebra>(std::move(b.algebra)), b.theta, b.beta});
  }
  for (const auto& path : cfg.input_paths) {
    const Json doc = io::read_json_file(path);
    switch (io::detect_kind(doc, path)) {
      case io::InputKind::Algebra: {
        const std::optional<double> tol = cfg.tolerance_given ? std::optional<double>(cfg.tolerance) : std::nullopt;
        auto algebra = std::make_shared<const LieAlgebra>(io::algebra_from_json(doc, tol));
        AlgebraInput a{io::algebra_hash(*algebra), algebra, std::nullopt, std::nullopt};
        const int n = algebra->dim();
        if (doc.contains("theta")) a.theta = LinearMap(io::matrix_field(doc, "theta", n, n), "theta from " + path);
        if (doc.contains("beta")) a.beta = io::matrix_field(doc, "beta", n, n);
        in.algebras.push_back(std::move(a));
        break;
      }
      case io::InputKind::InnerProduct:
        in.inner_products.push_back(io::inner_product_from_json(doc, cfg.tolerance));
        break;
      case io::InputKind::Weights:
        if (in.weights) throw InputError("more than one weights file");
        in.weights = io::weights_from_json(doc, cfg.tolerance);
        break;
      case io::InputKind::Stratum:
        if (in.beta) throw InputError("more than one stratum file");
        in.beta = io::matrix_field(doc, "beta");
        break;
      case io::InputKind::Theta:
        if (in.theta) throw InputError("more than one theta file");
        in.theta = io::matrix_field(doc, "theta");
        break;
    }
  }
  if (in.theta) {
    if (in.algebras.size() != 1) throw InputError("a theta file needs exactly one algebra");
    const int n = in.algebras.front().algebra->dim();
    if (in.theta->rows() != n || in.theta->cols() != n) throw InputShapeError("theta must be dim x dim");
    in.algebras.front().theta = LinearMap(*in.theta, "theta from file");
  }
  return in;
}

const AlgebraInput& single_algebra(const Inputs& in) {
  if (in.algebras.size() != 1) throw InputError("this command needs exactly one algebra (--builtin or --input)");
  return in.algebras.front();
}

Json appendix_c_json(const AppendixCReport& r) {
  return Json{{"span", r.span},
              {"bracket_contains_ma", r.bracket_contains_ma},
              {"centralizers_trivial", r.centralizers_trivial},
              {"normalizer_k", r.normalizer_k},
              {"details",
               {{"span_rank", r.span_rank},
                {"samples_used", r.samples_used},
                {"bracket_residual", r.bracket_residual},
                {"z_m_dim", r.z_m_dim},
                {"z_a_dim", r.z_a_dim},
                {"margin_m", r.margin_m},
                {"margin_a", r.margin_a},
                {"centralizer_margin_required", kCentralizerMargin},
                {"normalizer_dim", r.normalizer_dim},
                {"normalizer_check", "infinitesimal: N_l(k) = k"}}}};
}

IwasawaData decompose_algebra(const AlgebraInput& a, const RunConfig& cfg) {
  if (!structure_invariants(*a.algebra).semisimple) throw PreconditionError(a.id + " is not semisimple");
  if (!a.theta) throw PreconditionError(a.id + ": no Cartan involution supplied (theta)");
  return iwasawa_decompose(validate_cartan(a.algebra, *a.theta), cfg.seed);
}

int cmd_decompose(const RunConfig& cfg, const Inputs& in, Json& report) {
  const AlgebraInput& a = single_algebra(in);
  const IwasawaData iw = decompose_algebra(a, cfg);
  report["algebra"] = a.id;
  report["dims"] = {{"k", iw.cartan.k.dim()}, {"a", iw.a.dim()}, {"n", iw.n.dim()}, {"m", iw.m.dim()}};
  report["split"] = iw.split;
  Json roots = Json::array();
  for (std::size_t i = 0; i < iw.roots.size(); ++i) {
    const bool positive =
        std::find(iw.positive_roots.begin(), iw.positive_roots.end(), static_cast<int>(i)) != iw.positive_roots.end();
    roots.push_back({{"lambda", io::to_json(iw.roots[i].functional)},
                     {"mult", iw.roots[i].multiplicity},
                     {"positive", positive}});
  }
  report["roots"] = roots;
  try {
    require_no_compact_factor(*a.algebra, cfg.seed);
  } catch (const PreconditionError& e) {
    report["appendix_c"] = nullptr;
    report["appendix_c_skipped"] = e.what();
    return kExitOk;
  }
  const AppendixCReport c = verify_appendix_c(iw, cfg.samples, cfg.seed);
  report["appendix_c"] = appendix_c_json(c);
  return c.all_pass() ? kExitOk : kExitVerification;
}

std::optional<StratumLabel> label_for(const Inputs& in, const LieAlgebra* algebra, double tol) {
  std::optional<Matrix> beta = in.beta;
  if (!beta && in.algebras.size() == 1) beta = in.algebras.front().beta;
  if (!beta) return std::nullopt;
  return beta_plus_from_beta(*beta, algebra, tol);
}

int cmd_volume(const RunConfig& cfg, const Inputs& in, Json& report) {
  if (in.inner_products.empty()) throw InputError("volume needs an inner product (--input with \"gram\")");
  if (in.inner_products.size() > 2) throw InputError("volume takes an inner product and at most one background");
  if (in.algebras.size() > 1) throw InputError("volume takes at most one algebra");
  const InnerProduct& h = in.inner_products[0];
  const InnerProduct background = in.inner_products.size() > 1 ? in.inner_products[1] : InnerProduct::identity(h.dim());
  if (background.dim() != h.dim()) throw InputShapeError("background and inner product differ in dimension");
  if (!background.definite) throw PreconditionError("background inner product is degenerate");
  const LieAlgebra* algebra = in.algebras.empty() ? nullptr : in.algebras.front().algebra.get();
  if (algebra && algebra->dim() != h.dim()) throw InputShapeError("algebra and inner product differ in dimension");

  const std::optional<StratumLabel> label = in.weights ? std::nullopt : label_for(in, algebra, cfg.tolerance);
  VolumeDensity v;
  Json weights;
  if (in.weights) {
    if (in.weights->dim() != h.dim()) throw InputShapeError("weights and inner product differ in dimension");
    v = v_weighted(h, background, *in.weights);
    weights = in.weights->weights();
  } else if (label) {
    v = v_beta_plus(h, background, *label, cfg.tolerance);
    weights = label_frame(*label, cfg.tolerance).weights.weights();
    report["beta_plus"] = io::to_json(label->beta_plus);
  } else {
    throw PreconditionError("volume needs weights or a stratum label (beta)");
  }
  if (!in.algebras.empty()) report["algebra"] = in.algebras.front().id;
  report["v_W"] = v.value;
  report["v_N"] = orbit_density_vN(h);
  report["gauge_diag"] = io::to_json(v.gauge_diag);
  report["degenerate"] = v.degenerate;
  report["weights"] = weights;
  report["continuity"] = v.continuity;
  report["warnings"] = v.warnings;
  return kExitOk;
}

int cmd_certify(const RunConfig& cfg, const Inputs& in, Json& report) {
  const AlgebraInput& a = single_algebra(in);
  if (in.inner_products.size() > 1) throw InputError("certify takes at most one metric");
  const Metric m = in.inner_products.empty() ? Metric::standard(*a.algebra)
                                             : Metric::make(*a.algebra, in.inner_products.front().gram);
  const std::optional<StratumLabel> label = label_for(in, a.algebra.get(), cfg.tolerance);
  const CurvatureReport c = nilsoliton_certificate(*a.algebra, m, label);
  const SolitonFit& fit = *c.soliton;
  Json soliton{{"c", fit.c},
               {"D", io::to_json(fit.d)},
               {"residual", fit.residual},
               {"derivation_residual", fit.derivation_residual},
               {"pass", fit.pass}};
  if (fit.label) {
    soliton["label"] = {{"proportionality_residual", fit.label->proportionality_residual},
                        {"scalar_ratio_residual", fit.label->scalar_ratio_residual},
                        {"c_negative", fit.label->c_negative},
                        {"derivation", fit.label->derivation},
                        {"pass", fit.label->pass}};
    soliton["beta_plus"] = io::to_json(label->beta_plus);
  }
  report["algebra"] = a.id;
  report["soliton"] = soliton;
  report["einstein_residual"] = c.einstein_residual;
  report["scalar"] = c.scalar;
  report["ricci"] = io::to_json(c.ricci);
  report["mean_curvature"] = io::to_json(c.mean_curvature);
  report["normalization"] = "scale-invariant: Ric = c Id + D, D in Der, D / tr D = beta+ / tr beta+, scal / c = dim - tr beta+";
  return fit.pass ? kExitOk : kExitVerification;
}

Json property_json(const PropertyResult& r) {
  return Json{{"name", r.name}, {"trials", r.trials}, {"worst", r.worst}, {"threshold", r.threshold}, {"pass", r.pass}};
}

int cmd_verify(const RunConfig& cfg, Inputs in, Json& report) {
  if (in.algebras.empty()) {
    for (const char* name : {"sl:2", "sl:3", "so:2,3"}) {
      BuiltinAlgebra b = parse_builtin(name, cfg.tolerance);
      in.algebras.push_back({b.name, std::make_shared<const LieAlgebra>(std::move(b.algebra)), b.theta, b.beta});
    }
  }
  int code = kExitOk;
  auto worsen = [&](int c) {
    if (c == kExitInput || (c == kExitVerification && code == kExitOk)) code = c;
  };
  Json algebras = Json::array();
  for (const auto& a : in.algebras) {
    Json entry{{"algebra", a.id}};
    try {
      const IwasawaData iw = decompose_algebra(a, cfg);
      const AppendixCReport c = verify_appendix_c(iw, cfg.samples, cfg.seed);
      entry["appendix_c"] = appendix_c_json(c);
      entry["pass"] = c.all_pass();
      if (!c.all_pass()) worsen(kExitVerification);
    } catch (const Error& e) {
      entry["error"] = error_json(e.category() == ErrorCategory::Input ? "input" : "verification", e.what());
      entry["pass"] = false;
      worsen(exit_code_for(e));
    }
    algebras.push_back(entry);
  }
  report["algebras"] = algebras;

  Json props = Json::array();
  const int trials = 16 * cfg.samples;
  std::vector<PropertyResult> results;
  {
    Rng rng(cfg.seed);
    results.push_back(check_det_multiplicativity(rng, trials));
  }
  {
    Rng rng(cfg.seed + 1);
    results.push_back(check_gauge_invariance(rng, trials));
  }
  {
    Rng rng(cfg.seed + 2);
    results.push_back(check_continuity(rng, cfg.samples));
  }
  {
    Rng rng(cfg.seed + 3);
    results.push_back(check_heisenberg_equivariance(rng, trials));
  }
  for (const auto& r : results) {
    props.push_back(property_json(r));
    if (!r.pass) worsen(kExitVerification);
  }
  report["volume_properties"] = props;
  report["pass"] = code == kExitOk;
  return code;
}

Json matrix_or_null(const std::function<Matrix()>& f) {
  try {
    return io::to_json(f());
  } catch (const Error&) {
    return nullptr;
  }
}

int cmd_report(const RunConfig& cfg, const Inputs& in, Json& report) {
  if (in.algebras.empty()) throw InputError("report needs at least one algebra");
  Json entries = Json::array();
  for (const auto& a : in.algebras) {
    const LieAlgebra& l = *a.algebra;
    const Subspace whole = Subspace::whole(l.dim());
    Json e{{"algebra", a.id}, {"dim", l.dim()}, {"basis", l.labels()}};
    e["jacobi_residual"] = l.jacobi_residual();
    try {
      const StructureInvariants inv = structure_invariants(l);
      e["invariants"] = {{"semisimple", inv.semisimple},
                         {"unimodular", inv.unimodular},
                         {"nilpotent", inv.nilpotent},
                         {"center_dim", inv.center_dim}};
      if (inv.semisimple) {
        Json dims = Json::array();
        for (const auto& s : simple_ideals(l, cfg.seed)) dims.push_back(s.dim());
        e["simple_ideal_dims"] = dims;
      }
    } catch (const IndeterminateError& err) {
      e["invariants"] = nullptr;
      e["invariants_error"] = err.what();
    }
    e["killing_form"] = io::to_json(killing_form(l));
    e["unimodularity_defect"] = unimodularity_defect(l);
    e["radical_dim"] = radical(l).dim();
    e["nilradical_dim"] = nilradical(l, cfg.seed).dim();
    e["derivation_dim"] = derivations(l).dim();
    e["lower_central_series_dims"] = lower_central_series_dims(l, whole);
    e["derived_series_dims"] = derived_series_dims(l, whole);
    if (a.theta) e["theta"] = io::to_json(a.theta->matrix);
    if (a.beta) e["beta"] = matrix_or_null([&] { return beta_plus_from_beta(*a.beta, &l, cfg.tolerance).beta; });
    entries.push_back(e);
  }
  report["algebras"] = entries;
  return kExitOk;
}

int dispatch(const RunConfig& cfg, const Inputs& in, Json& report) {
  if (cfg.command == "decompose") return cmd_decompose(cfg, in, report);
  if (cfg.command == "volume") return cmd_volume(cfg, in, report);
  if (cfg.command == "certify") return cmd_certify(cfg, in, report);
  if (cfg.command == "verify") return cmd_verify(cfg, in, report);
  if (cfg.command == "report") return cmd_report(cfg, in, report);
  throw InputError("unknown command '" + cfg.command + "'");
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& err) {
  Json report = Json::object();
  report["command"] = cfg.command;
  report["seed"] = cfg.seed;
  report["tolerance"] = cfg.tolerance;
  report["samples"] = cfg.samples;
  int code = kExitOk;
  try {
    if (!(cfg.tolerance > 0)) throw InputError("tolerance must be positive");
    if (cfg.samples < 1) throw InputError("samples must be >= 1");
    const Inputs in = load_inputs(cfg);
    code = dispatch(cfg, in, report);
  } catch (const Error& e) {
    code = exit_code_for(e);
    report["error"] = error_json(code == kExitVerification ? "verification" : "input", e.what());
    err << "orbitlab: " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = kExitInput;
    report["error"] = error_json("input", e.what());
    err << "orbitlab: " << e.what() << "\n";
  }
  report["exit_code"] = code;
  try {
    io::write_atomic(cfg.output_path, io::dump(report));
  } catch (const std::exception& e) {
    err << "orbitlab: " << e.what() << "\n";
    return kExitInput;
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"orbitlab: Lie-theoretic decompositions, weighted volume densities and curvature certificates"};
  app.name("orbitlab");
  app.add_option("command", cfg.command, "decompose | volume | certify | verify | report")
      ->required()
      ->check(CLI::IsMember({"decompose", "volume", "certify", "verify", "report"}));
  app.add_option("--builtin", cfg.builtins, "builtin algebra, e.g. sl:3, so:2,3, heisenberg:3, sl:2+so:3,0");
  app.add_option("--input", cfg.input_paths, "JSON input (algebra, gram, weights, beta or theta)")
      ->check(CLI::ExistingFile);
  app.add_option("--output", cfg.output_path, "report path")->required();
  auto* seed = app.add_option("--seed", cfg.seed, "RNG seed (default 42, or ORBITLAB_SEED)");
  auto* tol = app.add_option("--tolerance", cfg.tolerance, "numerical tolerance (default 1e-9)");
  app.add_option("--samples", cfg.samples, "conjugation samples / property batch size (default 8)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "orbitlab: " << e.what() << "\n" << app.help();
    return kExitInput;
  }
  cfg.tolerance_given = tol->count() > 0;
  if (seed->count() == 0) {
    if (const char* env = std::getenv("ORBITLAB_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        err << "orbitlab: ORBITLAB_SEED is not an unsigned integer: " << env << "\n";
        return kExitInput;
      }
    }
  }
  return execute(cfg, err);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace orbitlab::cli
