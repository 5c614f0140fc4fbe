// Copyright 2026 The hypgrp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hypgrp/artifacts.hpp"
#include "hypgrp/autstruct.hpp"
#include "hypgrp/fsa_io.hpp"
#include "hypgrp/fsa_ops.hpp"
#include "hypgrp/hyperbolicity.hpp"
#include "hypgrp/oracle.hpp"
#include "hypgrp/thinness.hpp"

namespace fs = std::filesystem;
using namespace hypgrp;

namespace {

constexpr const char* kVersion = "hypgrp 1.0.0";

enum Exit { kOk = 0, kError = 1, kInconclusive = 2 };

struct Config {
  std::string input;
  std::string out = "hypgrp-out";
  bool force = false;
  bool quiet = false;
  bool timings = false;
  // kb
  std::size_t max_rule_length = 0;  // 0: longest relator + 4
  std::size_t max_rules = 3000;
  // verify
  std::size_t max_iter = 20;
  std::size_t cex_cap = 500;
  // thinness
  std::size_t samples = 10000;
  std::size_t sample_len = 50;
  std::uint64_t seed = 1;
  std::size_t max_rounds = 10;
  double mem_cap_gib = 8;
  // oracle
  std::size_t radius = 4;
  bool bigons = false;
  bool triangles = false;
  bool shortlex_only = false;
};

const std::vector<std::string> kStages = {"kb", "autstruct", "verify", "thinness"};

std::string stage_config(const Config& c, const std::string& stage) {
  std::ostringstream os;
  os << "max_rule_length=" << c.max_rule_length << " max_rules=" << c.max_rules;
  if (stage == "kb" || stage == "autstruct") return os.str();
  os << " max_iter=" << c.max_iter << " cex_cap=" << c.cex_cap;
  if (stage == "verify") return os.str();
  os << " samples=" << c.samples << " sample_len=" << c.sample_len << " seed=" << c.seed
     << " max_rounds=" << c.max_rounds << " mem_cap_gib=" << c.mem_cap_gib;
  return os.str();
}

std::string file_letter(const Alphabet& a, Letter x) {
  const std::string& n = a.name(x);
  const bool plain = std::all_of(n.begin(), n.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)); });
  return plain ? n : "x" + std::to_string(x);
}

void add_rounds(Report& rep, const std::vector<HyperbolicityRound>& rounds) {
  for (const auto& r : rounds) {
    const std::string k = "round." + std::to_string(r.n) + ".";
    rep.set(k + "wd_set", r.wd_set).set(k + "wd_states", r.wd_states);
    rep.set(k + "ge_states", r.ge_states).set(k + "ge_minimal", r.ge_minimal);
    rep.set(k + "gw_states", r.gw_states).set(k + "gw_minimal", r.gw_minimal);
    rep.set(k + "counterexamples", r.counterexamples);
  }
}

/// Runs the kb -> autstruct -> verify -> thinness chain. Selected stages
/// write artifacts and manifest entries; other prerequisites are computed
/// in memory or taken from a completed earlier run in the same directory.
class Pipeline {
 public:
  Pipeline(Config c, std::set<std::string> selected) : c_(std::move(c)), selected_(std::move(selected)) {}

  int run() {
    p_ = load_presentation(c_.input);
    fs::create_directories(c_.out);
    const fs::path mpath = fs::path(c_.out) / "manifest.txt";
    if (fs::exists(mpath)) manifest_ = load_report(mpath);
    manifest_.set("tool", kVersion);
    manifest_.set("input", fs::path(c_.input).filename().string());
    std::size_t last = 0;
    for (std::size_t i = 0; i < kStages.size(); ++i)
      if (selected_.count(kStages[i])) last = i;
    int status = kOk;
    for (std::size_t i = 0; i <= last && status == kOk; ++i) {
      status = stage(kStages[i], selected_.count(kStages[i]) != 0);
      write_file(mpath, manifest_.str());
    }
    write_file(mpath, manifest_.str());
    return status;
  }

 private:
  fs::path path(const std::string& f) const { return fs::path(c_.out) / f; }

  // A stage can be skipped when the manifest records it complete under the
  // same configuration, every listed file parses, and no earlier stage ran.
  bool completed(const std::string& s) const {
    if (c_.force || upstream_ran_) return false;
    const std::string k = "stage." + s + ".";
    if (!manifest_.has(k + "status") || !manifest_.has(k + "config") || !manifest_.has(k + "files")) return false;
    if (manifest_.get(k + "config") != stage_config(c_, s)) return false;
    try {
      std::istringstream files(manifest_.get(k + "files"));
      for (std::string f; files >> f;) {
        if (f.ends_with(".fsa")) load_fsa(path(f).string());
        else if (f.ends_with("report.txt") || f == "structure.txt") load_report(path(f));
        else if (f == "rules.txt") parse_rules(p_, read_file(path(f)), f);
        else read_file(path(f));
      }
    } catch (const InputError&) {
      return false;
    }
    return true;
  }

  int stage(const std::string& s, bool write) {
    const std::string k = "stage." + s + ".";
    if (write && completed(s)) {
      if (!c_.quiet) std::cout << s << ": up to date (" << manifest_.get(k + "status") << ")\n";
      if (s == "kb") rules_ = parse_rules(p_, read_file(path("rules.txt")), path("rules.txt").string());
      if (s == "verify") {
        const Report r = load_report(path("verify.report.txt"));
        gamma_prime_ = r.get_size("gamma_prime");
        if (!r.get_bool("halted")) return kInconclusive;
      }
      const std::string st = manifest_.get(k + "status");
      return st == "inconclusive" ? kInconclusive : kOk;
    }
    if (write) upstream_ran_ = true;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> files;
    std::string status = "done";
    bool cap_hit = false;
    if (s == "kb") {
      run_kb(write, files);
    } else if (s == "autstruct") {
      try {
        run_autstruct(write, files);
      } catch (const ResourceError& e) {
        if (!write) throw;
        status = "inconclusive";
        cap_hit = true;
        std::cerr << "autstruct: " << e.what() << "\n";
      }
    } else if (s == "verify") {
      if (!run_verify(write, files)) status = "inconclusive", cap_hit = true;
    } else {
      if (!run_thinness(files)) status = "inconclusive", cap_hit = true;
    }
    if (write) {
      std::string list;
      for (const auto& f : files) list += (list.empty() ? "" : " ") + f;
      manifest_.set(k + "status", status).set(k + "config", stage_config(c_, s));
      manifest_.set(k + "files", list).set(k + "cap_hit", cap_hit);
      if (c_.timings)
        manifest_.set(k + "seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return status == "done" ? kOk : kInconclusive;
  }

  void emit(const std::string& name, const Report& r, std::vector<std::string>& files) {
    write_file(path(name), r.str());
    files.push_back(name);
    if (!c_.quiet) std::cout << r.str();
  }

  const RewritingSystem& rules() {
    if (!rules_) run_kb(false, scratch_);
    return *rules_;
  }

  const AutomaticStructure& structure() {
    if (!structure_) run_autstruct(false, scratch_);
    return *structure_;
  }

  void run_kb(bool write, std::vector<std::string>& files) {
    KbLimits lim = structure_kb_limits(p_);
    if (c_.max_rule_length) lim.max_rule_length = c_.max_rule_length;
    lim.max_rules = c_.max_rules;
    rules_ = kb_complete(p_, lim);
    if (!write) return;
    write_file(path("rules.txt"), serialize_rules(*rules_));
    files.push_back("rules.txt");
    Report r;
    r.set("confluent", rules_->confluent()).set("rules", rules_->rules().size());
    r.set("max_lhs_length", rules_->stats().max_lhs_length).set("max_rule_length", lim.max_rule_length);
    emit("kb.report.txt", r, files);
  }

  void run_autstruct(bool write, std::vector<std::string>& files) {
    structure_ = build_structure(rules());
    if (!write) return;
    const AutomaticStructure& s = *structure_;
    Report r;
    auto save = [&](const Fsa& m, const std::string& name) {
      save_fsa(m, path(name).string());
      files.push_back(name);
    };
    save(s.word_acceptor, "W.fsa");
    r.set("word_acceptor", "W.fsa");
    save(s.multipliers[0], "M_id.fsa");
    r.set("multiplier.id", "M_id.fsa");
    for (Letter x = 0; x < s.letters(); ++x) {
      const std::string f = "M_" + file_letter(s.alphabet(), x) + ".fsa";
      save(s.multipliers[1 + x], f);
      r.set("multiplier." + s.alphabet().name(x), f);
    }
    save(s.wd1.fsa, "WD1.fsa");
    r.set("wd1", "WD1.fsa");
    write_file(path("DM.txt"), serialize_differences(s.alphabet(), s.dm));
    files.push_back("DM.txt");
    r.set("differences", "DM.txt");
    r.set("w_states", s.word_acceptor.size()).set("dm_size", s.dm.size());
    r.set("wd1_states", s.wd1.size()).set("gamma", s.gamma).set("iterations", s.stats.iterations);
    emit("structure.txt", r, files);
  }

  bool run_verify(bool write, std::vector<std::string>& files) {
    HyperbolicityLimits lim;
    lim.max_iterations = c_.max_iter;
    lim.cex_cap = c_.cex_cap;
    const HyperbolicityReport h = verify_hyperbolic(structure(), lim);
    gamma_prime_ = h.gamma_prime;
    if (!write) return h.halted;
    if (!h.gw_final.empty()) {
      save_fsa(h.gw_final, path("GW_final.fsa").string());
      files.push_back("GW_final.fsa");
    }
    save_fsa(h.wd_machine.fsa, path("WD_final.fsa").string());
    files.push_back("WD_final.fsa");
    Report r;
    r.set("halted", h.halted).set("n_final", h.n_final);
    r.set("gamma", h.gamma).set("gamma_prime", h.gamma_prime).set("gamma_prime_closure", h.gamma_prime_closure);
    r.set("papasoglu_vertex", h.papasoglu_vertex).set("papasoglu_midedge", h.papasoglu_midedge);
    r.set("wd_strict_growth", h.strict_growth);
    r.set("gw_final_states", h.gw_final.size()).set("wd_final_size", h.wd_final.size());
    add_rounds(r, h.rounds);
    emit("verify.report.txt", r, files);
    return h.halted;
  }

  bool run_thinness(std::vector<std::string>& files) {
    ThinnessParams tp;
    tp.sampling.count = c_.samples;
    tp.sampling.max_len = c_.sample_len;
    tp.sampling.seed = c_.seed;
    tp.max_rounds = c_.max_rounds;
    tp.cex_cap = c_.cex_cap;
    tp.mem_cap_bytes = static_cast<std::size_t>(c_.mem_cap_gib * double(std::size_t{1} << 30));
    const ThinnessReport t = compute_thinness(structure(), tp, gamma_prime_);
    if (!t.frd.fsa.empty()) {
      save_fsa(t.frd.fsa, path("FRD.fsa").string());
      files.push_back("FRD.fsa");
    }
    if (!t.gp.empty()) {
      save_fsa(t.gp, path("GP.fsa").string());
      files.push_back("GP.fsa");
    }
    write_file(path("DT.txt"), serialize_differences(structure().alphabet(), t.differences.all));
    files.push_back("DT.txt");
    Report r;
    r.set("verified", t.verified).set("inconclusive", t.inconclusive);
    if (t.inconclusive) {
      r.set("abort_reason", t.abort_reason);
      r.set("abort_states", t.abort_stats.states).set("abort_transitions", t.abort_stats.transitions);
      r.set("abort_bytes_estimate", t.abort_stats.bytes_estimate);
    }
    r.set("delta_raw", t.delta_raw).set("delta_plus_one", t.delta_plus_one);
    r.set("d1_size", t.differences.d1.size()).set("d2_size", t.differences.d2.size());
    r.set("d_total", t.differences.all.size()).set("sample_batches", t.sample_batches);
    r.set("frd_states", t.frd_states).set("frd_corner_states", t.frd_corner_states);
    r.set("accept_triples", t.accept_triples).set("ngp_states", t.ngp_states);
    r.set("gp_states", t.gp_states).set("gp_minimal", t.gp_minimal);
    r.set("gp_within_product", t.gp_within_product).set("general_bound", t.general_bound);
    for (const auto& rd : t.rounds) {
      const std::string k = "round." + std::to_string(rd.round) + ".";
      r.set(k + "d_total", rd.d_total).set(k + "frd_states", rd.frd_states);
      r.set(k + "frd_corner_states", rd.frd_corner_states).set(k + "accept_triples", rd.accept_triples);
      r.set(k + "ngp_states", rd.ngp_states).set(k + "gp_states", rd.gp_states);
      r.set(k + "gp_minimal", rd.gp_minimal).set(k + "witnesses", rd.witnesses).set(k + "added", rd.added);
    }
    emit("thinness.report.txt", r, files);
    return t.verified;
  }

  Config c_;
  std::set<std::string> selected_;
  Presentation p_;
  Report manifest_;
  std::optional<RewritingSystem> rules_;
  std::optional<AutomaticStructure> structure_;
  std::size_t gamma_prime_ = 0;
  bool upstream_ran_ = false;
  std::vector<std::string> scratch_;
};

int run_oracle(const Config& c) {
  const Presentation p = load_presentation(c.input);
  const AutomaticStructure s = build_structure(kb_complete(p, structure_kb_limits(p)));
  const Reducer& red = s.reducer;
  const CayleyBall ball = build_ball(s.presentation(), [&red](const Word& w) { return red.reduce(w); }, c.radius);
  const bool both = !c.bigons && !c.triangles;
  const Alphabet& a = s.alphabet();
  Report r;
  r.set("radius", c.radius).set("vertices", ball.size());
  if (both || c.bigons) r.set("bigon_width", max_bigon_width(ball));
  if (both || c.triangles) {
    const ThinnessObservation t = max_triangle_thinness(ball, c.shortlex_only);
    r.set("shortlex_only", c.shortlex_only).set("triangles", t.triangles);
    r.set("delta_observed", t.delta_observed);
    r.set("witness.w", format_word(a, t.witness.w)).set("witness.u", format_word(a, t.witness.u));
    r.set("witness.v", format_word(a, t.witness.v)).set("witness.twice_rho_a", t.witness.twice_rho_a);
    r.set("witness.position", t.witness.position).set("witness.distance", t.witness.distance);
  }
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "oracle.report.txt", r.str());
  if (!c.quiet) std::cout << r.str();
  return kOk;
}

int run_fsa(const std::string& op, const std::vector<std::string>& args, const Config& c) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw InputError("fsa " + op + ": expected " + std::to_string(n) + " file(s)");
  };
  if (op == "eq") {
    need(2);
    const Fsa a = load_fsa(args[0]), b = load_fsa(args[1]);
    if (a.alphabet().names() != b.alphabet().names() || a.arity() != b.arity())
      throw InputError("fsa eq: alphabets or arities differ");
    const auto w1 = diff_witnesses(a, b, 1), w2 = diff_witnesses(b, a, 1);
    const bool eq = w1.empty() && w2.empty();
    if (!c.quiet) {
      std::cout << "equal: " << (eq ? "true" : "false") << "\n";
      if (!eq) {
        const auto& w = w1.empty() ? w2[0] : w1[0];
        std::cout << "witness:";
        for (Label l : w) std::cout << ' ' << detail::label_text(a.alphabet(), a.arity(), l);
        std::cout << "\nonly_in: " << (w1.empty() ? args[1] : args[0]) << "\n";
      }
    }
    return eq ? kOk : kError;
  }
  if (op == "min") {
    need(2);
    save_fsa(minimize(load_fsa(args[0])), args[1]);
    return kOk;
  }
  if (op == "info") {
    need(1);
    const Fsa m = load_fsa(args[0]);
    std::size_t acc = 0, trans = 0;
    for (State q = 0; q < m.size(); ++q) {
      acc += m.accepting(q);
      for (Label l = 0; l < m.labels(); ++l) trans += m.next(q, l) != kNoState;
    }
    Report r;
    r.set("arity", m.arity()).set("states", m.size()).set("accepting", acc).set("transitions", trans);
    r.set("minimal_states", minimize(m).size());
    std::cout << r.str();
    return kOk;
  }
  throw InputError("fsa: unknown operation '" + op + "' (eq, min, info)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic structures, hyperbolicity and thinness for finitely presented groups"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config c;
  app.add_option("--out", c.out, "output directory")->capture_default_str();
  app.add_flag("--force", c.force, "rerun completed stages");
  app.add_flag("--quiet", c.quiet, "no report echo");

  auto input = [&](CLI::App* sub) { sub->add_option("FILE", c.input, "presentation file")->required(); };
  auto kb_opts = [&](CLI::App* sub) {
    sub->add_option("--max-rule-length", c.max_rule_length, "set aside longer equations (0: longest relator + 4)");
    sub->add_option("--max-rules", c.max_rules)->capture_default_str();
  };
  auto verify_opts = [&](CLI::App* sub) {
    sub->add_option("--max-iter", c.max_iter)->capture_default_str();
    sub->add_option("--cex-cap", c.cex_cap)->capture_default_str();
  };
  auto thin_opts = [&](CLI::App* sub) {
    sub->add_option("--samples", c.samples)->capture_default_str();
    sub->add_option("--sample-len", c.sample_len)->capture_default_str();
    sub->add_option("--seed", c.seed)->capture_default_str();
    sub->add_option("--max-rounds", c.max_rounds)->capture_default_str();
    sub->add_option("--mem-cap-gib", c.mem_cap_gib)->capture_default_str();
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "output directory");
    sub->add_flag("--force", c.force);
    sub->add_flag("--quiet", c.quiet);
  };

  auto* kb = app.add_subcommand("kb", "bounded Knuth-Bendix completion");
  input(kb), kb_opts(kb), common(kb);
  auto* as = app.add_subcommand("autstruct", "short-lex automatic structure");
  input(as), kb_opts(as), common(as);
  auto* ver = app.add_subcommand("verify", "hyperbolicity check and geodesic word acceptor");
  input(ver), kb_opts(ver), verify_opts(ver), common(ver);
  auto* th = app.add_subcommand("thinness", "triangle thinness constant");
  input(th), kb_opts(th), verify_opts(th), thin_opts(th), common(th);
  auto* pipe = app.add_subcommand("pipeline", "kb, autstruct, verify and thinness with a resumable manifest");
  input(pipe), kb_opts(pipe), verify_opts(pipe), thin_opts(pipe), common(pipe);
  pipe->add_flag("--timings", c.timings, "record stage timings in the manifest");
  std::vector<std::string> stages;
  pipe->add_option("--stages", stages, "subset of kb,autstruct,verify,thinness")->delimiter(',')
      ->check(CLI::IsMember(kStages));
  auto* orc = app.add_subcommand("oracle", "brute-force checks on a ball of the Cayley graph");
  input(orc), common(orc);
  orc->add_option("--radius", c.radius)->required();
  orc->add_flag("--bigons", c.bigons);
  orc->add_flag("--triangles", c.triangles);
  orc->add_flag("--shortlex-only", c.shortlex_only);
  auto* fsa = app.add_subcommand("fsa", "automaton utilities: eq A B | min IN OUT | info FILE");
  std::string op;
  std::vector<std::string> fsa_args;
  fsa->add_option("OP", op)->required()->check(CLI::IsMember({"eq", "min", "info"}));
  fsa->add_option("FILES", fsa_args);
  fsa->add_flag("--quiet", c.quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (orc->parsed()) return run_oracle(c);
    if (fsa->parsed()) return run_fsa(op, fsa_args, c);
    std::set<std::string> sel;
    if (kb->parsed()) sel = {"kb"};
    if (as->parsed()) sel = {"autstruct"};
    if (ver->parsed()) sel = {"verify"};
    if (th->parsed()) sel = {"thinness"};
    if (pipe->parsed()) sel = stages.empty() ? std::set<std::string>(kStages.begin(), kStages.end())
                                             : std::set<std::string>(stages.begin(), stages.end());
    return Pipeline(c, sel).run();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << " (states " << e.stats().states << ")\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
