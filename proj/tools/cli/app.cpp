#include "cli/app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>

#include "cli/gallery.hpp"
#include "cli/suite.hpp"
#include "ncspace/calculus.hpp"
#include "ncspace/csv.hpp"
#include "ncspace/deform.hpp"
#include "ncspace/error.hpp"
#include "ncspace/vonneumann.hpp"

namespace fs = std::filesystem;

namespace ncspace::cli {

namespace {

struct Options {
  std::string space;
  std::string out = ".";
  std::string partition = "hausdorff";
  Settings settings;
  std::string a, a_im = "0", b, b_im = "0", f, f_im = "0";
  std::vector<std::string> field;
  std::string density;
};

struct Input {
  std::string label;
  std::string text;
};

Input load_config(const std::string& where) {
  if (where.empty()) throw ParseError("--space is required (a config path or a gallery name)");
  if (fs::is_regular_file(where)) {
    std::ifstream is(where, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    if (!is && !is.eof()) throw ParseError("cannot read config file " + where);
    return {where, ss.str()};
  }
  if (auto text = gallery_config(where)) return {"gallery:" + where, std::string(*text)};
  throw ParseError("no config file or gallery entry named '" + where + "'");
}

std::shared_ptr<const DiffSpace> load_space(const Input& in) {
  return std::make_shared<const DiffSpace>(build_space(parse_space_spec(in.text)));
}

PartitionKind partition_kind(const std::string& name) {
  if (name == "hausdorff") return PartitionKind::Hausdorff;
  if (name == "total") return PartitionKind::Total;
  if (name == "discrete") return PartitionKind::Discrete;
  throw ParseError("--partition must be hausdorff, total or discrete, got '" + name + "'");
}

std::vector<std::string> xs(std::size_t n) {
  std::vector<std::string> s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back("x" + std::to_string(i));
  return s;
}

std::vector<std::string> xys(std::size_t n) {
  auto s = xs(n);
  for (std::size_t i = 1; i <= n; ++i) s.push_back("y" + std::to_string(i));
  return s;
}

// An element from --a/--b, or a seeded random polynomial when not given.
AlgebraElement element_or_random(const GroupoidPtr& g, const std::string& re, const std::string& im, Rng& rng,
                                 Report& r, const std::string& name) {
  if (!re.empty()) return from_expression(g, re, im);
  const std::string rre = random_polynomial(rng, xys(g->dimension()), 2, 4);
  const std::string rim = random_polynomial(rng, xys(g->dimension()), 2, 2);
  r.info(name + ".random", 1.0, rre + " + i(" + rim + ")");
  return from_expression(g, rre, rim);
}

Derivation field_or_random(const DiffSpace& space, const std::vector<std::string>& comps, Rng& rng, Report& r) {
  if (!comps.empty()) return Derivation::from_expressions(space, comps);
  std::vector<std::string> c;
  std::string note;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    c.push_back(random_polynomial(rng, xs(space.dimension()), 2, 2));
    note += (i ? "; " : "") + c.back();
  }
  r.info("P.random", 1.0, note);
  return Derivation::from_expressions(space, c);
}

DensityField load_density(const std::string& path, const GroupoidPtr& g) {
  if (path.empty() || path == "uniform") return DensityField::uniform(g);
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open density file " + path);
  std::vector<Matrix> ms;
  for (std::size_t i = 0; i < g->base().size(); ++i) {
    const auto m = static_cast<Eigen::Index>(g->orbit_size(g->block_of_index(i)));
    ms.push_back(Matrix::Zero(m, m));
  }
  std::string line;
  std::getline(is, line);
  if (csv::split(line) != std::vector<std::string>{"point_id", "row", "col", "re", "im"})
    throw ParseError("density file " + path + ": header must be point_id,row,col,re,im");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    const std::string where = "density file " + path + " line " + std::to_string(lineno);
    if (cells.size() != 5) throw ParseError(where + ": expected 5 fields");
    try {
      const std::size_t p = g->base().index_of(std::stoll(cells[0]));
      const auto row = std::stol(cells[1]), col = std::stol(cells[2]);
      Matrix& m = ms[p];
      if (row < 0 || col < 0 || row >= m.rows() || col >= m.cols()) throw ParseError(where + ": index out of range");
      m(row, col) = {std::stod(cells[3]), std::stod(cells[4])};
    } catch (const std::logic_error&) {
      throw ParseError(where + ": malformed number");
    }
  }
  return DensityField(g, std::move(ms));
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  int operator()(const std::string& command, const std::function<void(Report&, Runner&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    dir_ = o_.out;
    fs::create_directories(dir_);
    Report report(command, o_.settings.tol, o_.settings.seed);
    body(report, *this);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::ofstream os(dir_ / "report.txt", std::ios::binary);
    report.write(os, ms);
    report.write(out_, ms);
    return report.passed() ? kExitOk : kExitCheckFailed;
  }

  std::shared_ptr<const DiffSpace> space(Report& r) {
    Input in = load_config(o_.space);
    r.add_input(in.label, in.text);
    return load_space(in);
  }

  GroupoidPtr groupoid(Report& r) {
    auto s = space(r);
    return build_groupoid(s, make_partition(*s, partition_kind(o_.partition)));
  }

  void table(const Table& t) { write_table(dir_, t); }
  Rng rng() const { return Rng(o_.settings.seed); }

 private:
  const Options& o_;
  std::ostream& out_;
  fs::path dir_;
};

void add_common(CLI::App* cmd, Options& o, bool needs_space = true) {
  auto* opt = cmd->add_option("--space", o.space, "config file path or gallery name");
  if (needs_space) opt->required();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--tol", o.settings.tol, "tolerance for algebraic identities")->capture_default_str();
  cmd->add_option("--norm-tol", o.settings.norm_tol, "tolerance for state normalization")->capture_default_str();
  cmd->add_option("--seed", o.settings.seed, "seed for randomized checks")->capture_default_str();
  cmd->add_option("--samples", o.settings.samples, "random samples per property")->capture_default_str()->check(
      CLI::PositiveNumber);
}

void add_partition(CLI::App* cmd, Options& o) {
  cmd->add_option("--partition", o.partition, "hausdorff, total or discrete")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite differential spaces, groupoid algebras and their operator closures"};
  app.name("ncspace");
  app.require_subcommand(1);

  std::function<int()> action;
  Runner runner(o, out);
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* cmd = parent->add_subcommand(name, help);
    return cmd;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  // space
  auto* space = group("space", "differential space analysis");
  auto* analyze = leaf(space, "analyze", "Hausdorff relation, generator consistency, quotient");
  add_common(analyze, o);
  analyze->callback([&] {
    action = [&] {
      return runner("space analyze", [&](Report& r, Runner& run) {
        auto s = run.space(r);
        check_space(r, *s, "");
        const Partition rho = hausdorff_relation(*s);
        const Quotient q = quotient(*s, rho);
        r.info("space.dropped_generators", static_cast<double>(q.dropped.size()));
        run.table(classes_table(*s, rho));
        run.table(quotient_table(q));
      });
    };
  });

  // groupoid
  auto* groupoid = group("groupoid", "pair groupoid of a relation");
  auto* gbuild = leaf(groupoid, "build", "arrows, orbits and groupoid laws");
  add_common(gbuild, o);
  add_partition(gbuild, o);
  gbuild->callback([&] {
    action = [&] {
      return runner("groupoid build", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        check_groupoid(r, *g, "");
        r.info("groupoid.transitive", is_transitive(*g) ? 1.0 : 0.0);
        run.table(arrows_table(*g));
        run.table(orbits_table(*g));
      });
    };
  });

  // algebra
  auto* algebra = group("algebra", "convolution *-algebra");
  auto* conv = leaf(algebra, "conv", "convolve two expression-defined elements");
  add_common(conv, o);
  add_partition(conv, o);
  conv->add_option("--a", o.a, "real part of a over x1..xn, y1..yn")->required();
  conv->add_option("--a-im", o.a_im, "imaginary part of a");
  conv->add_option("--b", o.b, "real part of b")->required();
  conv->add_option("--b-im", o.b_im, "imaginary part of b");
  conv->callback([&] {
    action = [&] {
      return runner("algebra conv", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        const auto a = from_expression(g, o.a, o.a_im), b = from_expression(g, o.b, o.b_im);
        const auto c = convolve(a, b);
        r.info("algebra.conv_max_abs", c.max_abs());
        std::ofstream os(fs::path(o.out) / "conv.csv", std::ios::binary);
        write_csv(os, c);
      });
    };
  });
  auto* laws = leaf(algebra, "check-laws", "associativity, involution, unit, distributivity on random elements");
  add_common(laws, o);
  add_partition(laws, o);
  laws->callback([&] {
    action = [&] {
      return runner("algebra check-laws", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        Rng rng = run.rng();
        check_algebra_laws(r, g, o.settings, rng, "");
      });
    };
  });

  // calculus
  auto* calculus = group("calculus", "lifted derivations");
  auto* leibniz = leaf(calculus, "leibniz", "P(a*b) against P_hor(a)*b + a*P_ver(b)");
  add_common(leibniz, o);
  add_partition(leibniz, o);
  leibniz->add_option("--field", o.field, "components of P over x1..xn, one per coordinate");
  leibniz->add_option("--a", o.a, "element a (random when omitted)");
  leibniz->add_option("--a-im", o.a_im);
  leibniz->add_option("--b", o.b, "element b (random when omitted)");
  leibniz->add_option("--b-im", o.b_im);
  leibniz->callback([&] {
    action = [&] {
      return runner("calculus leibniz", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        Rng rng = run.rng();
        const auto P = field_or_random(g->base(), o.field, rng, r);
        const auto a = element_or_random(g, o.a, o.a_im, rng, r, "a");
        const auto b = element_or_random(g, o.b, o.b_im, rng, r, "b");
        const Defect d = leibniz_defect(P, a, b);
        r.check("calculus.leibniz", d.relative(), o.settings.tol, "relative, absolute " + csv::number(d.absolute));
      });
    };
  });
  auto* comm = leaf(calculus, "commutator", "[P, Q(f)] a against Q(Pf) a, plus the Heisenberg case");
  add_common(comm, o);
  add_partition(comm, o);
  comm->add_option("--field", o.field, "components of P over x1..xn");
  comm->add_option("--f", o.f, "base function f over x1..xn (random when omitted)");
  comm->add_option("--f-im", o.f_im);
  comm->add_option("--a", o.a, "element a (random when omitted)");
  comm->add_option("--a-im", o.a_im);
  comm->callback([&] {
    action = [&] {
      return runner("calculus commutator", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        const DiffSpace& s = g->base();
        Rng rng = run.rng();
        const auto P = field_or_random(s, o.field, rng, r);
        std::string f = o.f;
        if (f.empty()) {
          f = random_polynomial(rng, xs(s.dimension()), 3, 3);
          r.info("f.random", 1.0, f);
        }
        const auto fn = BaseFunction::from_expression(s, f, o.f_im);
        const auto a = element_or_random(g, o.a, o.a_im, rng, r, "a");
        const Defect d = commutator_defect(P, fn, a);
        r.check("calculus.commutator", d.relative(), o.settings.tol, "relative, absolute " + csv::number(d.absolute));
        for (std::size_t i = 0; i < s.dimension(); ++i) {
          const auto c = commutator(Derivation::coordinate(s, i), BaseFunction::from_expression(s, xs(s.dimension())[i]), a);
          r.check("calculus.heisenberg[x" + std::to_string(i + 1) + "]",
                  max_abs_difference(c, a) / std::max(1.0, a.max_abs()), o.settings.tol, "relative");
        }
      });
    };
  });

  // rep
  auto* rep = group("rep", "regular representation as random operators");
  auto* rbuild = leaf(rep, "build", "per-orbit matrices of an element");
  add_common(rbuild, o);
  add_partition(rbuild, o);
  rbuild->add_option("--a", o.a, "element a")->required();
  rbuild->add_option("--a-im", o.a_im);
  rbuild->callback([&] {
    action = [&] {
      return runner("rep build", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        const RandomOperator op = represent(from_expression(g, o.a, o.a_im));
        const RandomOperatorReport rr = random_operator_report(op);
        r.require("rep.measurable", rr.measurable, 0.0, 0.0, rr.measurability_note);
        r.require("rep.essentially_bounded", rr.essentially_bounded, rr.ess_sup_norm,
                  std::numeric_limits<double>::infinity(), "ess sup norm");
        for (std::size_t b = 0; b < rr.orbit_norms.size(); ++b)
          r.info("rep.orbit_norm[" + std::to_string(b) + "]", rr.orbit_norms[b]);
        Table t{"rep", {"orbit", "row", "col", "re", "im"}, {}};
        for (std::size_t b = 0; b < g->orbit_count(); ++b) {
          const Matrix& m = op.orbit_matrix(b);
          for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
              t.rows.push_back({std::to_string(b), std::to_string(i), std::to_string(j), csv::number(m(i, j).real()),
                                csv::number(m(i, j).imag())});
        }
        run.table(t);
      });
    };
  });
  auto* rcheck = leaf(rep, "check", "homomorphism, star and unit checks on random elements");
  add_common(rcheck, o);
  add_partition(rcheck, o);
  rcheck->callback([&] {
    action = [&] {
      return runner("rep check", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        Rng rng = run.rng();
        check_representation(r, g, o.settings, rng, "");
      });
    };
  });

  // vn
  auto* vn = group("vn", "finite von Neumann closure and states");
  auto* vcomm = leaf(vn, "commutant", "commutant and bicommutant of the represented algebra");
  add_common(vcomm, o);
  add_partition(vcomm, o);
  vcomm->callback([&] {
    action = [&] {
      return runner("vn commutant", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        if (auto rep = check_bicommutant(r, g, o.settings, "")) {
          run.table(matrices_table("commutant", rep->commutant.elements));
          run.table(matrices_table("bicommutant", rep->bicommutant.elements));
        }
      });
    };
  });
  auto* vstate = leaf(vn, "state-check", "density conditions for a field of density matrices");
  add_common(vstate, o);
  add_partition(vstate, o);
  vstate->add_option("--density", o.density, "CSV point_id,row,col,re,im, or 'uniform'");
  vstate->callback([&] {
    action = [&] {
      return runner("vn state-check", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        if (!o.density.empty() && o.density != "uniform") {
          std::ifstream is(o.density, std::ios::binary);
          std::ostringstream ss;
          ss << is.rdbuf();
          r.add_input(o.density, ss.str());
        }
        const StateReport sr = check_density(load_density(o.density, g), o.settings.norm_tol);
        r.require("state.hermitian", sr.hermitian, 0.0, 0.0);
        r.require("state.positive", sr.positive, std::max(0.0, -sr.min_eigenvalue), 0.0);
        r.check("state.normalized", std::abs(sr.normalization - 1.0), o.settings.norm_tol);
        r.require("state.trace_class_integrable_normal", sr.trace_class && sr.integrable && sr.normal, 0.0, 0.0);
        r.info("state.faithful", sr.faithful ? 1.0 : 0.0);
        r.info("state.min_eigenvalue", sr.min_eigenvalue);
        for (const auto& p : sr.problems) r.info("state.problem", 0.0, p);
      });
    };
  });
  auto* vexp = leaf(vn, "expect", "phi(pi(a)) for a density field");
  add_common(vexp, o);
  add_partition(vexp, o);
  vexp->add_option("--a", o.a, "element a")->required();
  vexp->add_option("--a-im", o.a_im);
  vexp->add_option("--density", o.density, "CSV point_id,row,col,re,im, or 'uniform'");
  vexp->callback([&] {
    action = [&] {
      return runner("vn expect", [&](Report& r, Runner& run) {
        auto g = run.groupoid(r);
        const State phi = make_state(load_density(o.density, g), o.settings.norm_tol);
        const Complex v = expect(phi, represent(from_expression(g, o.a, o.a_im)));
        r.check("state.expect_identity", std::abs(expect(phi, RandomOperator::identity(g)) - Complex(1.0)),
                o.settings.tol);
        r.info("expect.re", v.real());
        r.info("expect.im", v.imag());
      });
    };
  });

  // deform
  auto* deform = group("deform", "projection-generated deformation chain");
  auto* sweep = leaf(deform, "sweep", "per-level table and chain checks");
  add_common(sweep, o);
  sweep->callback([&] {
    action = [&] {
      return runner("deform sweep", [&](Report& r, Runner& run) {
        auto s = run.space(r);
        Rng rng = run.rng();
        run.table(deform_table(*s, o.settings, rng));
        check_deformation(r, *s, o.settings, rng, "");
      });
    };
  });

  // verify
  auto* verify = group("verify", "property suite");
  auto* all = leaf(verify, "all", "every check on every gallery example (and --space when given)");
  add_common(all, o, false);
  all->callback([&] {
    action = [&] {
      return runner("verify all", [&](Report& r, Runner&) {
        std::vector<Input> inputs;
        for (const auto& name : gallery_names()) inputs.push_back({name, std::string(*gallery_config(name))});
        if (!o.space.empty()) inputs.push_back(load_config(o.space));
        for (const auto& in : inputs) {
          r.add_input(in.label, in.text);
          const std::string p = in.label + "/";
          auto s = load_space(in);
          auto g = build_groupoid(s, hausdorff_relation(*s));
          Rng rng(o.settings.seed);
          check_space(r, *s, p);
          check_groupoid(r, *g, p);
          check_algebra_laws(r, g, o.settings, rng, p);
          check_representation(r, g, o.settings, rng, p);
          check_calculus(r, g, o.settings, rng, p);
          check_bicommutant(r, g, o.settings, p);
          check_states(r, g, o.settings, rng, p);
          check_deformation(r, *s, o.settings, rng, p);
        }
      });
    };
  });

  // gallery
  auto* gallery = group("gallery", "bundled example configs");
  leaf(gallery, "list", "names of the bundled examples")->callback([&] {
    action = [&] {
      for (const auto& n : gallery_names()) out << n << "\n";
      return kExitOk;
    };
  });
  std::string show_name;
  auto* show = leaf(gallery, "show", "print one example config");
  show->add_option("name", show_name)->required();
  show->callback([&] {
    action = [&] {
      auto text = gallery_config(show_name);
      if (!text) throw ParseError("no gallery entry named '" + show_name + "'");
      out << *text << "\n";
      return kExitOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    return action ? action() : kExitBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace ncspace::cli
