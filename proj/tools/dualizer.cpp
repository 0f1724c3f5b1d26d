// dualizer: command-line front end over corpus files.
//
// Exit codes: 0 holds, 1 fails, 2 inconclusive (cutoff), 3 input error.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dualizer/dualizer.hpp"

using namespace dualizer;

namespace {

constexpr int kHolds = 0, kFails = 1, kInconclusive = 2, kInputError = 3;

struct Common {
  std::string file;
  std::string check;
  std::string ring;
  std::string complex;
  RunOptions run;
  std::string emit = "text";
};

void add_common(CLI::App* app, Common& c, bool targets) {
  app->add_option("--file", c.file, "corpus file")->required();
  app->add_option("--check", c.check, "run only the named check");
  if (targets) {
    app->add_option("--ring", c.ring, "ring name (instead of --check)");
    app->add_option("--complex", c.complex, "complex name (instead of --check)");
  }
  app->add_option("--cutoff", c.run.cutoff, "resolution cutoff N")->capture_default_str()->check(CLI::Range(0, 64));
  app->add_option("--cell-budget", c.run.cell_budget, "maximum number of semifree cells")->capture_default_str();
  app->add_option("--radius", c.run.radius, "Ext scan radius for infinite injective dimension")
      ->capture_default_str()
      ->check(CLI::Range(0, 64));
  app->add_option("--emit", c.emit, "report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app->add_flag("--timing", c.run.timing, "include wall time in reports");
}

CorpusFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), path);
}

void emit(const Common& c, const CheckReport& r) {
  if (c.emit == "json") emit_json(std::cout, r);
  else emit_text(std::cout, r);
}

int single_exit(const CheckReport& r) {
  switch (r.status) {
    case Status::holds:
    case Status::agree: return kHolds;
    case Status::inconclusive: return kInconclusive;
    case Status::error: return kInputError;
    default: return kFails;
  }
}

int batch_exit(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (auto& r : reports) {
    if (r.failed()) return kFails;
    if (r.status == Status::inconclusive && !r.expect) inconclusive = true;
  }
  return inconclusive ? kInconclusive : kHolds;
}

void summary(const Common& c, const std::vector<CheckReport>& reports) {
  if (c.emit != "text") return;
  std::map<std::string, int> counts;
  int met = 0, expected = 0;
  for (auto& r : reports) {
    ++counts[to_string(r.status)];
    if (r.expect) ++expected, met += r.expectation_met();
  }
  std::cout << reports.size() << " checks:";
  for (auto& [k, n] : counts) std::cout << " " << k << "=" << n;
  std::cout << "; expectations met " << met << "/" << expected << "\n";
}

// The checks of the given kinds, or just the one named by --check.
std::vector<const CheckEntry*> select(const CorpusFile& f, const Common& c, std::vector<CheckKind> kinds) {
  std::vector<const CheckEntry*> out;
  if (!c.check.empty()) {
    const CheckEntry* e = f.find_check(c.check);
    if (!e) throw std::runtime_error("no check named '" + c.check + "'");
    out.push_back(e);
    return out;
  }
  for (auto& e : f.checks)
    if (kinds.empty() || std::find(kinds.begin(), kinds.end(), e.kind) != kinds.end()) out.push_back(&e);
  return out;
}

// (ring, complex) from --check or --ring/--complex.
std::pair<const RingEntry*, const ComplexEntry*> target(const CorpusFile& f, const Common& c, bool need_complex) {
  std::string ring = c.ring, cx = c.complex;
  if (!c.check.empty()) {
    const CheckEntry* e = f.find_check(c.check);
    if (!e) throw std::runtime_error("no check named '" + c.check + "'");
    ring = e->ring;
    cx = e->complex;
  }
  if (ring.empty() && !cx.empty())
    if (auto* m = f.find_complex(cx)) ring = m->ring;
  const RingEntry* r = f.find_ring(ring);
  if (!r) throw std::runtime_error(ring.empty() ? "give --check or --ring" : "no ring named '" + ring + "'");
  const ComplexEntry* m = nullptr;
  if (need_complex) {
    m = f.find_complex(cx);
    if (!m) throw std::runtime_error(cx.empty() ? "give --check or --complex" : "no complex named '" + cx + "'");
    if (m->ring != r->name) throw std::runtime_error("complex '" + cx + "' is not over ring '" + r->name + "'");
  }
  return {r, m};
}

CheckReport labelled(CheckReport r, const std::string& ring, const std::string& cx, const RunOptions& o) {
  r.name = cx.empty() ? ring : ring + "/" + cx;
  r.ring = ring;
  r.complex = cx;
  r.cutoff = o.cutoff;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dualizing complexes and Gorenstein trivial extensions over finite local algebras"};
  app.require_subcommand(1);
  Common c;

  auto* parse = app.add_subcommand("parse", "parse a corpus file and list its contents");
  parse->add_option("--file", c.file, "corpus file")->required();

  auto* run = app.add_subcommand("run", "run every check in a corpus file");
  add_common(run, c, false);

  auto* check = app.add_subcommand("check", "decide one property");
  check->require_subcommand(1);
  auto* check_d = check->add_subcommand("dualizing", "is M a dualizing complex for A");
  auto* check_g = check->add_subcommand("gorenstein", "is A ⋉ M a Gorenstein DGA");
  add_common(check_d, c, true);
  add_common(check_g, c, true);

  auto* verify = app.add_subcommand("verify", "cross-check both sides of the equivalence");
  verify->require_subcommand(1);
  auto* verify_t = verify->add_subcommand("theorem1", "dualizing(A, M) vs Gorenstein(A ⋉ M)");
  auto* verify_c = verify->add_subcommand("corollary2", "A as a quotient of the Gorenstein DGA A ⋉ A^v");
  add_common(verify_t, c, false);
  add_common(verify_c, c, false);
  verify_c->add_option("--ring", c.ring, "ring name (default: corollary2 checks, else every ring)");

  auto* coind = app.add_subcommand("coinduce", "RHom_R(A, R) for R = A ⋉ M");
  add_common(coind, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  CorpusFile f;
  try {
    f = load(c.file);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }

  try {
    if (parse->parsed()) {
      std::cout << "prime " << f.prime << "\n";
      for (auto& r : f.rings) {
        std::cout << "ring " << r.name << "  dim " << r.ring->dim() << "  basis";
        for (auto& l : r.ring->labels()) std::cout << " " << l;
        std::cout << "  socle " << socle_dimension(*r.ring) << "\n";
      }
      for (auto& m : f.complexes) {
        std::cout << "complex " << m.name << " over " << m.ring << "  degrees [" << m.complex.lo() << ", "
                  << m.complex.hi() << "]  homology";
        for (auto [i, d] : homology(m.complex))
          if (d) std::cout << " H" << i << "=" << d;
        std::cout << "\n";
      }
      for (auto& k : f.checks) {
        std::cout << "check " << k.name << "  " << to_string(k.kind) << " " << k.ring;
        if (!k.complex.empty()) std::cout << " " << k.complex;
        if (k.expect) std::cout << "  expect " << *k.expect;
        std::cout << "\n";
      }
      std::cout << f.rings.size() << " rings, " << f.complexes.size() << " complexes, " << f.checks.size()
                << " checks\n";
      return kHolds;
    }

    if (run->parsed() || verify_t->parsed() || (verify_c->parsed() && c.ring.empty())) {
      std::vector<CheckKind> kinds;
      if (verify_t->parsed()) kinds = {CheckKind::theorem1};
      if (verify_c->parsed()) kinds = {CheckKind::corollary2};
      auto chosen = select(f, c, kinds);
      std::vector<CheckReport> reports;
      if (chosen.empty() && verify_c->parsed()) {
        for (auto& r : f.rings) {
          reports.push_back(labelled(cmd_verify_corollary2(r.ring, c.run), r.name, "", c.run));
          emit(c, reports.back());
        }
      }
      for (auto* e : chosen) {
        reports.push_back(run_check(f, *e, c.run));
        emit(c, reports.back());
      }
      summary(c, reports);
      if (!c.check.empty() && reports.size() == 1 && !reports[0].expect) return single_exit(reports[0]);
      return batch_exit(reports);
    }

    if (verify_c->parsed()) {
      auto [r, m] = target(f, c, false);
      auto rep = labelled(cmd_verify_corollary2(r->ring, c.run), r->name, "", c.run);
      emit(c, rep);
      return single_exit(rep);
    }

    auto [r, m] = target(f, c, true);
    CheckReport rep;
    std::optional<ChainComplex> out;
    if (check_d->parsed()) rep = cmd_check_dualizing(r->ring, m->complex, c.run);
    else if (check_g->parsed()) rep = cmd_check_gorenstein(r->ring, m->complex, c.run);
    else rep = cmd_coinduce(r->ring, m->complex, c.run, &out);
    rep = labelled(rep, r->name, m->name, c.run);
    emit(c, rep);
    return single_exit(rep);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
}
