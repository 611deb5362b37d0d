#include "dplab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dplab/errors.hpp"
#include "dplab/fields.hpp"

namespace dplab {

namespace {

using Tokens = std::vector<std::string>;
using Section = std::map<std::string, Tokens>;
using Tree = std::map<std::string, Section>;

Tree tokenize(const std::string& text) {
  Tree tree;
  std::string section = "global";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first.front() == '[') {
      if (first.back() != ']')
        throw config_error("line " + std::to_string(lineno) + ": malformed section header");
      section = first.substr(1, first.size() - 2);
      continue;
    }
    std::string eq;
    if (!(ls >> eq) || eq != "=")
      throw config_error("line " + std::to_string(lineno) + ": expected 'key = value' for key '" + first + "'");
    Tokens toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty())
      throw config_error("line " + std::to_string(lineno) + ": no value for key '" + first + "'");
    tree[section][first] = toks;
  }
  return tree;
}

class Reader {
 public:
  explicit Reader(Tree tree) : tree_(std::move(tree)) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = tree_.find(sec);
    return s != tree_.end() && s->second.count(key) > 0;
  }
  const Tokens& get(const std::string& sec, const std::string& key) const {
    const auto s = tree_.find(sec);
    if (s == tree_.end() || !s->second.count(key))
      throw config_error("missing required key '" + key + "' in section [" + sec + "]");
    return s->second.at(key);
  }
  double number(const std::string& sec, const std::string& key, double fallback,
                bool required = false) const {
    if (!has(sec, key)) {
      if (required) throw config_error("missing required key '" + key + "' in section [" + sec + "]");
      return fallback;
    }
    return to_number(get(sec, key).at(0), key);
  }
  std::string word(const std::string& sec, const std::string& key,
                   const std::string& fallback) const {
    if (!has(sec, key)) return fallback;
    return get(sec, key).at(0);
  }
  std::vector<double> numbers(const std::string& sec, const std::string& key,
                              std::vector<double> fallback) const {
    if (!has(sec, key)) return fallback;
    std::vector<double> out;
    for (const auto& t : get(sec, key)) out.push_back(to_number(t, key));
    return out;
  }
  std::vector<std::string> words(const std::string& sec, const std::string& key,
                                 std::vector<std::string> fallback) const {
    if (!has(sec, key)) return fallback;
    return get(sec, key);
  }

  static double to_number(const std::string& tok, const std::string& key) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw config_error("key '" + key + "': cannot parse number from '" + tok + "'");
    }
  }

  FieldDesc field(const std::string& sec, const std::string& key, bool required,
                  FieldDesc fallback = {}) const {
    if (!has(sec, key)) {
      if (required) throw config_error("missing required key '" + key + "' in section [" + sec + "]");
      return fallback;
    }
    const Tokens& toks = get(sec, key);
    FieldDesc d;
    const std::string& kind = toks.at(0);
    if (kind == "const") {
      d.kind = FieldDesc::Kind::Const;
      if (toks.size() < 2) throw config_error("key '" + key + "': const needs a value");
      d.c0 = to_number(toks[1], key);
    } else if (kind == "affine") {
      d.kind = FieldDesc::Kind::Affine;
      if (toks.size() < 3) throw config_error("key '" + key + "': affine needs c0 cx [cy]");
      d.c0 = to_number(toks[1], key);
      d.cx = to_number(toks[2], key);
      d.cy = toks.size() > 3 ? to_number(toks[3], key) : 0.0;
    } else if (kind == "pstar") {
      d.kind = FieldDesc::Kind::PStar;
    } else if (kind == "pstar_minus") {
      d.kind = FieldDesc::Kind::PStarMinus;
      if (toks.size() < 2) throw config_error("key '" + key + "': pstar_minus needs a gap");
      d.gap = to_number(toks[1], key);
    } else {
      throw config_error("key '" + key + "': unknown field kind '" + kind + "'");
    }
    return d;
  }

 private:
  Tree tree_;
};

Eigen::Vector2d point_of(const std::vector<double>& v) {
  Eigen::Vector2d p{0.0, 0.0};
  for (std::size_t k = 0; k < std::min<std::size_t>(2, v.size()); ++k)
    p[static_cast<Index>(k)] = v[k];
  return p;
}

}  // namespace

Vec sample_field(const FieldDesc& desc, const DomainMesh& mesh) {
  Vec out(mesh.count());
  switch (desc.kind) {
    case FieldDesc::Kind::Const:
      out.setConstant(desc.c0);
      break;
    case FieldDesc::Kind::Affine:
      for (Index i = 0; i < mesh.count(); ++i) {
        double v = desc.c0 + desc.cx * mesh.coords(i, 0);
        if (mesh.dim == 2) v += desc.cy * mesh.coords(i, 1);
        out[i] = v;
      }
      break;
    default:
      throw config_error("field descriptor must be sampled against p* explicitly");
  }
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  const Reader r{tokenize(text)};
  RunConfig cfg;

  const auto nodes = r.numbers("mesh", "nodes", {});
  if (nodes.empty()) throw config_error("missing required key 'nodes' in section [mesh]");
  cfg.dim = static_cast<int>(nodes.size());
  if (cfg.dim > 2) throw config_error("key 'nodes': at most two axes supported");
  for (int k = 0; k < cfg.dim; ++k) cfg.nodes[static_cast<std::size_t>(k)] = static_cast<int>(nodes[static_cast<std::size_t>(k)]);
  const auto lo = r.numbers("mesh", "box_min", {0.0, 0.0});
  const auto hi = r.numbers("mesh", "box_max", {1.0, 1.0});
  for (int k = 0; k < cfg.dim; ++k) {
    cfg.box_lo[static_cast<std::size_t>(k)] = lo.size() > static_cast<std::size_t>(k) ? lo[static_cast<std::size_t>(k)] : lo.at(0);
    cfg.box_hi[static_cast<std::size_t>(k)] = hi.size() > static_cast<std::size_t>(k) ? hi[static_cast<std::size_t>(k)] : hi.at(0);
  }
  cfg.ambient_n = static_cast<int>(r.number("mesh", "ambient_n", 0));

  cfg.p = r.field("fields", "p", true);
  cfg.q = r.field("fields", "q", true);
  cfg.a = r.field("fields", "a", true);
  cfg.c1 = r.field("fields", "c1", false, FieldDesc{FieldDesc::Kind::Const, 1.0, 0, 0, 0});
  cfg.c2 = r.field("fields", "c2", false, FieldDesc{FieldDesc::Kind::Const, 0.0, 0, 0, 0});
  cfg.r1 = r.field("fields", "r1", false, FieldDesc{FieldDesc::Kind::PStar, 0, 0, 0, 0});
  cfg.flag_critical = r.word("fields", "critical", "true") != "false";

  const std::string mk = r.word("kirchhoff", "kind", "constant");
  if (mk == "constant") cfg.kirchhoff_kind = KirchhoffSpec::Kind::Constant;
  else if (mk == "affine") cfg.kirchhoff_kind = KirchhoffSpec::Kind::Affine;
  else if (mk == "saturating") cfg.kirchhoff_kind = KirchhoffSpec::Kind::Saturating;
  else throw config_error("key 'kind': unknown kirchhoff kind '" + mk + "'");
  cfg.m0 = r.number("kirchhoff", "m0", 1.0);
  cfg.kirchhoff_kappa = r.number("kirchhoff", "kappa", 0.0);
  cfg.tau0 = r.number("kirchhoff", "tau0", 1.0);

  const std::string fam = r.word("reaction", "family", "concave_convex");
  if (fam == "concave_convex") cfg.family = ReactionSpec::Family::ConcaveConvex;
  else if (fam == "superlinear") cfg.family = ReactionSpec::Family::Superlinear;
  else throw config_error("key 'family': unknown reaction family '" + fam + "'");
  const std::string en = r.word("reaction", "entry", "power");
  if (en == "power") cfg.entry = ReactionSpec::Entry::Power;
  else if (en == "log_power") cfg.entry = ReactionSpec::Entry::LogPower;
  else if (en == "power_m") cfg.entry = ReactionSpec::Entry::PowerM;
  else if (en == "cutoff_power") cfg.entry = ReactionSpec::Entry::CutoffPower;
  else throw config_error("key 'entry': unknown reaction entry '" + en + "'");
  cfg.coef1 = r.number("reaction", "coef1", 1.0);
  cfg.coef2 = r.number("reaction", "coef2", 0.0);
  cfg.delta = r.field("reaction", "delta", true);
  cfg.m_exp = r.field("reaction", "m", false, FieldDesc{FieldDesc::Kind::Const, 0.0, 0, 0, 0});
  cfg.kappa_exp = r.field("reaction", "kappa", false, FieldDesc{FieldDesc::Kind::Const, 1.5, 0, 0, 0});
  cfg.ball_center = point_of(r.numbers("reaction", "ball_center", {0.5, 0.5}));
  cfg.ball_radius = r.number("reaction", "ball_radius", 0.25);
  cfg.cutoff_center = point_of(r.numbers("reaction", "cutoff_center", {0.5, 0.5}));
  cfg.cutoff_radius = r.number("reaction", "cutoff_radius", 0.1);
  cfg.beta = r.number("reaction", "beta", 0.0);

  cfg.scenario = r.word("scenario", "kind", "validate");
  const std::string lam = r.word("scenario", "lambda", "auto");
  cfg.lambda = lam == "auto" ? -1.0 : Reader::to_number(lam, "lambda");
  const std::string th = r.word("scenario", "theta", "auto");
  cfg.theta = th == "auto" ? -1.0 : Reader::to_number(th, "theta");
  cfg.lambda_fractions = r.numbers("scenario", "lambda_fractions", cfg.lambda_fractions);
  cfg.k_pairs = static_cast<int>(r.number("scenario", "k_pairs", 3));
  cfg.r_list = r.numbers("scenario", "r_list", cfg.r_list);
  cfg.eps_list = r.numbers("scenario", "eps_list", cfg.eps_list);
  const std::string bs = r.word("scenario", "bubble_s", "auto");
  cfg.bubble_s = bs == "auto" ? -1.0 : Reader::to_number(bs, "bubble_s");
  cfg.bubble_center = point_of(r.numbers("scenario", "bubble_center", {0.5, 0.5}));
  cfg.suites = r.words("scenario", "suites", cfg.suites);
  cfg.samples = static_cast<int>(r.number("scenario", "samples", 10000));
  cfg.seed = static_cast<std::uint64_t>(r.number("scenario", "seed", 42));

  cfg.solver.max_iters = static_cast<int>(r.number("solver", "max_iters", 5000));
  cfg.solver.grad_tol = r.number("solver", "grad_tol", 1e-6);
  cfg.solver.armijo_c = r.number("solver", "armijo_c", 1e-4);
  cfg.solver.backtrack = r.number("solver", "backtrack", 0.5);
  cfg.solver.step_cap = r.number("solver", "step_cap", 1e6);
  const std::string pc = r.word("solver", "precondition", "laplacian");
  if (pc == "none") cfg.solver.precond = SolverOptions::Precond::None;
  else if (pc == "diagonal") cfg.solver.precond = SolverOptions::Precond::Diagonal;
  else if (pc == "laplacian") cfg.solver.precond = SolverOptions::Precond::Laplacian;
  else throw config_error("key 'precondition': unknown mode '" + pc + "'");

  cfg.ledger.seed = cfg.seed;
  cfg.ledger.starts = static_cast<int>(r.number("ledger", "starts", 20));
  cfg.ledger.descent_iters = static_cast<int>(r.number("ledger", "descent_iters", 150));
  cfg.ledger.with_bubbles = r.word("ledger", "with_bubbles", "true") != "false";
  cfg.ledger.compute_cc = cfg.family == ReactionSpec::Family::ConcaveConvex;
  cfg.ledger.compute_sl = cfg.family == ReactionSpec::Family::Superlinear;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::unique_ptr<Lab> build_lab(const RunConfig& cfg) {
  auto lab = std::make_unique<Lab>();
  lab->mesh = build_mesh(cfg.box_lo, cfg.box_hi, cfg.nodes, cfg.dim);
  const DomainMesh& mesh = lab->mesh;

  const int ambient = cfg.ambient_n > 0 ? cfg.ambient_n : cfg.dim;
  const Vec p = sample_field(cfg.p, mesh);
  const Vec q = sample_field(cfg.q, mesh);
  const Vec a = sample_field(cfg.a, mesh);
  const Vec c1 = sample_field(cfg.c1, mesh);
  const Vec c2 = sample_field(cfg.c2, mesh);

  Vec r1;
  if (cfg.r1.kind == FieldDesc::Kind::PStar)
    r1 = critical_exponent(p, ambient);
  else if (cfg.r1.kind == FieldDesc::Kind::PStarMinus)
    r1 = critical_exponent(p, ambient) - Vec::Constant(mesh.count(), cfg.r1.gap);
  else
    r1 = sample_field(cfg.r1, mesh);

  lab->problem.mesh = &lab->mesh;
  lab->problem.fields =
      make_exponent_field(mesh, ambient, p, q, a, c1, c2, r1, cfg.flag_critical);
  ExponentField& fields = lab->problem.fields;

  ReactionParams rp;
  rp.family = cfg.family;
  rp.entry = cfg.entry;
  rp.coef1 = cfg.coef1;
  rp.coef2 = cfg.coef2;
  rp.delta = sample_field(cfg.delta, mesh);
  if (cfg.m_exp.kind != FieldDesc::Kind::Const || cfg.m_exp.c0 > 0.0)
    rp.m_exp = sample_field(cfg.m_exp, mesh);
  rp.kappa_exp = sample_field(cfg.kappa_exp, mesh);
  rp.ball_center = cfg.ball_center;
  rp.ball_radius = cfg.ball_radius;
  rp.cutoff_center = cfg.cutoff_center;
  rp.cutoff_radius = cfg.cutoff_radius;
  rp.beta = cfg.beta;
  lab->problem.reaction = make_reaction(fields, rp);
  fields.attach_reaction_exponents(lab->problem.reaction.alpha,
                                   lab->problem.reaction.sigma);

  lab->problem.kirchhoff =
      cfg.family == ReactionSpec::Family::Superlinear
          ? make_kirchhoff(KirchhoffSpec::Kind::Constant, 1.0, 0.0, 1.0,
                           fields.q_max, fields.r1_min)
          : make_kirchhoff(cfg.kirchhoff_kind, cfg.m0, cfg.kirchhoff_kappa,
                           cfg.tau0, fields.q_max, fields.r1_min);
  lab->problem.critical.fields = &lab->problem.fields;
  lab->problem.reaction.fields = &lab->problem.fields;
  return lab;
}

}  // namespace dplab
