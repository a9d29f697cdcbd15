#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog/checks.hpp"

namespace homog {

namespace cli_detail {

inline nlohmann::ordered_json space_to_json(const Space& s) {
  nlohmann::ordered_json out;
  out["monoid"] = monoid_kind_name(s.monoid.kind);
  out["points"] = s.points;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (PointId i = 0; i < s.size(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (PointId j = 0; j < s.size(); ++j) row.push_back(s.d(i, j).str());
    rows.push_back(row);
  }
  out["dist"] = rows;
  return out;
}

inline nlohmann::ordered_json embedding_to_json(const Embedding& e) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [x, y] : e.explored_pairs()) pairs.push_back({x, y});
  out["pairs"] = pairs;
  out["rule"] = e.rule();
  return out;
}

inline void write_file(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream f(path);
  require(f.good(), Errc::UsageError, "cannot write " + path);
  f << j.dump(2) << "\n";
}

inline OligoStructure structure_from_flags(const std::string& kind, int q, int n) {
  if (kind == "pure_set") return OligoStructure::pure_set();
  if (kind == "dense_order") return OligoStructure::dense_order();
  if (kind == "vec_fq") return OligoStructure::vec_fq(q);
  if (kind == "affine_fq") return OligoStructure::affine_fq(q);
  if (kind == "copies_kn") return OligoStructure::copies_kn(n);
  if (kind == "random_graph") return OligoStructure::random_graph();
  if (kind == "random_bipartite") return OligoStructure::random_bipartite();
  fail(Errc::UsageError, "unknown structure kind '" + kind + "'");
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    if (next > pos) out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests. Returns the process exit
/// code: 0 all ok, 1 any violation, 2 inconclusive only, 64 usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  using nlohmann::ordered_json;
  CLI::App app{"finite-scale toolkit for generalized Urysohn spaces and oligomorphic structures"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "grow a Urysohn-space prefix with the fair scheduler");
  std::string gen_monoid = "q_nonneg", gen_out = "space.json";
  std::uint64_t gen_steps = 50;
  gen->add_option("--monoid", gen_monoid, "q_nonneg|q_unit_trunc|q_lex2|q_ultra");
  gen->add_option("--steps", gen_steps, "scheduler steps");
  gen->add_option("--out", gen_out, "output space JSON");

  // pinch / spread
  std::string pp_monoid = "q_nonneg", pp_eps = "1", pp_out = "pair.json";
  int pp_advances = 10;
  auto* pinch = app.add_subcommand("pinch", "build a pinching pair at the seed point");
  auto* spread = app.add_subcommand("spread", "build a spreading pair at the seed point");
  for (auto* cmd : {pinch, spread}) {
    cmd->add_option("--monoid", pp_monoid, "monoid kind");
    cmd->add_option("--eps", pp_eps, "radius, as p/q");
    cmd->add_option("--advances", pp_advances, "advances per side");
    cmd->add_option("--out", pp_out, "output pair JSON");
  }

  // zariski
  auto* zar = app.add_subcommand("zariski", "membership and containment reports");
  zar->require_subcommand(1);
  std::string z_monoid = "q_nonneg", z_report = "report.json";
  std::size_t z_samples = 50;
  int z_depth = 20;
  std::uint64_t z_seed = 7;
  std::string z_eps = "1", z_zeta = "1/4", z_eta = "1/4";
  auto* zo = zar->add_subcommand("ocheck", "image-meets-ball vs pinching disagreement");
  auto* zc = zar->add_subcommand("containments", "W inside Z inside W");
  for (auto* cmd : {zo, zc}) {
    cmd->add_option("--monoid", z_monoid, "monoid kind");
    cmd->add_option("--samples", z_samples, "sampled embeddings");
    cmd->add_option("--depth", z_depth, "exploration depth");
    cmd->add_option("--seed", z_seed, "PRNG seed");
    cmd->add_option("--report", z_report, "output report JSON");
  }
  zo->add_option("--eps", z_eps, "ball radius");
  zc->add_option("--eps", z_eps, "outer radius");
  zc->add_option("--zeta", z_zeta, "inner radius");
  zc->add_option("--eta", z_eta, "middle radius");

  // oligo
  auto* oligo = app.add_subcommand("oligo", "concrete homogeneous structures");
  oligo->require_subcommand(1);
  auto* oacl = oligo->add_subcommand("acl", "algebraic closure of a finite set");
  std::string o_kind = "vec_fq", o_set;
  int o_q = 2, o_n = 3;
  oacl->add_option("--kind", o_kind, "structure kind");
  oacl->add_option("--q", o_q, "field size (vector kinds)");
  oacl->add_option("--n", o_n, "clique size (copies_kn)");
  oacl->add_option("--set", o_set, "comma-separated elements")->required();

  // chains
  auto* chains_cmd = app.add_subcommand("chains", "chain-stabilizer checks");
  chains_cmd->require_subcommand(1);
  auto* reach = chains_cmd->add_subcommand("reach", "reachability of base stabilizer elements");
  std::string ch_kind = "vec_fq", ch_file;
  int ch_q = 2, ch_n = 3;
  std::size_t ch_samples = 10;
  long ch_budget = 500000;
  std::uint64_t ch_seed = 7;
  std::string ch_report;
  reach->add_option("--kind", ch_kind, "structure kind");
  reach->add_option("--q", ch_q, "field size");
  reach->add_option("--n", ch_n, "clique size");
  reach->add_option("--chain", ch_file, "chain JSON file")->required();
  reach->add_option("--samples", ch_samples, "sampled stabilizer elements");
  reach->add_option("--budget", ch_budget, "search budget");
  reach->add_option("--seed", ch_seed, "PRNG seed");
  reach->add_option("--report", ch_report, "output report JSON");

  // indep
  auto* indep_cmd = app.add_subcommand("indep", "independence relations and sinks");
  indep_cmd->require_subcommand(1);
  auto* ax = indep_cmd->add_subcommand("axioms", "axiom suite for algebraic independence");
  std::string ax_kind = "vec_fq";
  int ax_q = 2, ax_n = 3;
  std::size_t ax_samples = 200;
  std::uint64_t ax_seed = 7;
  std::string ax_report;
  ax->add_option("--kind", ax_kind, "structure kind");
  ax->add_option("--q", ax_q, "field size");
  ax->add_option("--n", ax_n, "clique size");
  ax->add_option("--samples", ax_samples, "sample count");
  ax->add_option("--seed", ax_seed, "PRNG seed");
  ax->add_option("--report", ax_report, "output report JSON");
  auto* sink = indep_cmd->add_subcommand("sink", "sink conditions for a shipped subuniverse");
  std::string sk_omega = "even_span";
  std::size_t sk_k = 1;
  int sk_depth = 12;
  std::uint64_t sk_seed = 7;
  std::string sk_report;
  sink->add_option("--omega", sk_omega, "even_span|dense_codense");
  sink->add_option("--k", sk_k, "chain length");
  sink->add_option("--depth", sk_depth, "prefix depth");
  sink->add_option("--seed", sk_seed, "PRNG seed");
  sink->add_option("--report", sk_report, "output report JSON");

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run the full acceptance suite");
  bool v_quick = false, v_timings = false;
  std::uint64_t v_seed = 7;
  std::string v_out, v_fault;
  verify->add_flag("--quick", v_quick, "reduced sample counts");
  verify->add_flag("--timings", v_timings, "include runtimes in the report (non-canonical)");
  verify->add_option("--seed", v_seed, "PRNG seed");
  verify->add_option("--out", v_out, "output report JSON");
  verify->add_option("--inject-fault", v_fault, "test fixture: corrupt a named check")
      ->group("");  // hidden

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help() << "\n";
      return 0;
    }
    err << e.what() << "\n";
    return 64;
  }

  try {
    if (*gen) {
      auto g = make_generator(make_monoid(monoid_kind_from_name(gen_monoid)));
      g->run(gen_steps);
      ordered_json j = cli_detail::space_to_json(g->snapshot(std::min<std::size_t>(g->size(), 64)));
      j["cursor"] = g->cursor();
      ordered_json log = ordered_json::array();
      for (const auto& e : g->log()) {
        if (e.outcome != Generator::LogEntry::Outcome::Realized &&
            e.outcome != Generator::LogEntry::Outcome::Seed)
          continue;
        ordered_json le;
        le["cursor"] = e.cursor;
        le["base"] = e.base;
        std::vector<std::string> f;
        for (const Dist& d : e.f) f.push_back(d.str());
        le["f"] = f;
        le["point"] = e.point;
        log.push_back(le);
      }
      j["log"] = log;
      cli_detail::write_file(gen_out, j);
      out << "wrote " << gen_out << " with " << g->size() << " points\n";
      return 0;
    }
    if (*pinch || *spread) {
      auto g = make_generator(make_monoid(monoid_kind_from_name(pp_monoid)));
      g->run(24);
      Dist eps = dist_parse(g->monoid(), pp_eps);
      auto pair = *pinch ? pinching_pair(g, 0, eps) : spreading_pair(g, 0, eps);
      for (int i = 0; i < pp_advances; ++i) {
        pair.first.advance();
        pair.second.advance();
      }
      ordered_json j;
      j["monoid"] = monoid_kind_name(g->monoid().kind);
      j["eps"] = eps.str();
      j["first"] = cli_detail::embedding_to_json(pair.first);
      j["second"] = cli_detail::embedding_to_json(pair.second);
      cli_detail::write_file(pp_out, j);
      out << "wrote " << pp_out << "\n";
      return 0;
    }
    if (*zo || *zc) {
      auto g = make_generator(make_monoid(monoid_kind_from_name(z_monoid)));
      g->run(30);
      Report rep;
      rep.seed = z_seed;
      Check c;
      if (*zo) {
        rep.command = "zariski ocheck";
        OCharReport r =
            check_O_characterization(g, 0, dist_parse(g->monoid(), z_eps), z_samples, z_depth,
                                     z_seed);
        c.name = "o_characterization";
        c.params = "samples=" + std::to_string(z_samples) + " depth=" + std::to_string(z_depth);
        c.status = r.ok() ? "ok" : "violation";
        c.witness = r.ok() ? std::to_string(r.points_checked) + " points checked"
                           : r.violation_notes.front();
      } else {
        rep.command = "zariski containments";
        Dist zeta = dist_parse(g->monoid(), z_zeta);
        Dist eta = dist_parse(g->monoid(), z_eta);
        Dist eps = dist_parse(g->monoid(), z_eps);
        PointId b = g->realize_type({{0}, {plus(g->monoid(), eps, eps)}});
        ContainmentReport r =
            check_containments(g, 0, b, zeta, eta, eps, z_samples, z_depth, z_seed);
        c.name = "containment_chain";
        c.params = "zeta=" + zeta.str() + " eta=" + eta.str() + " eps=" + eps.str();
        c.status = r.ok() ? "ok" : "violation";
        c.witness = r.ok() ? std::to_string(r.z_members_decided) + " decided Z-members"
                           : r.notes.front();
      }
      rep.checks.push_back(c);
      cli_detail::write_file(z_report, rep.to_json());
      out << c.name << ": " << c.status << "\n";
      return rep.exit_code();
    }
    if (*oacl) {
      OligoStructure S = cli_detail::structure_from_flags(o_kind, o_q, o_n);
      FinSet A;
      for (const std::string& name : cli_detail::split_list(o_set))
        A.push_back(S.elem_parse(name));
      A = as_set(std::move(A));
      FinSet closure = S.acl(A);
      ordered_json j = ordered_json::array();
      for (Elem e : closure) j.push_back(S.elem_name(e));
      out << j.dump() << "\n";
      return 0;
    }
    if (*reach) {
      OligoStructure S = cli_detail::structure_from_flags(ch_kind, ch_q, ch_n);
      std::ifstream f(ch_file);
      require(f.good(), Errc::UsageError, "cannot read " + ch_file);
      ordered_json j = ordered_json::parse(f);
      Chain C;
      C.acl_closed = j.value("acl_closed", false);
      for (const auto& tup : j.at("tuples")) {
        FinTuple t;
        for (const auto& name : tup) t.push_back(S.elem_parse(name.get<std::string>()));
        C.tuples.push_back(t);
      }
      require(!C.tuples.empty(), Errc::UsageError, "chain has no links");
      FinSet A = link_set(C, 0);
      for (std::size_t i = 0; i + 1 < C.tuples.size(); ++i)
        A = set_intersect(A, set_intersect(link_set(C, i), link_set(C, i + 1)));
      ReachabilityReport r = reachability_check(S, A, C, ch_samples, ch_budget, ch_seed);
      Report rep;
      rep.command = "chains reach";
      rep.seed = ch_seed;
      Check c;
      c.name = "reachability";
      c.params = "samples=" + std::to_string(ch_samples);
      c.status = r.ok() ? "ok" : (r.witnessed + r.inconclusive == r.samples ? "inconclusive"
                                                                            : "violation");
      c.witness = std::to_string(r.witnessed) + "/" + std::to_string(r.samples) + " witnessed";
      rep.checks.push_back(c);
      if (!ch_report.empty()) cli_detail::write_file(ch_report, rep.to_json());
      out << c.name << ": " << c.status << " (" << c.witness << ")\n";
      return rep.exit_code();
    }
    if (*ax) {
      OligoStructure S = cli_detail::structure_from_flags(ax_kind, ax_q, ax_n);
      AxiomReport r = axiom_suite(S, algebraic_independence(), ax_samples, ax_seed);
      Report rep;
      rep.command = "indep axioms";
      rep.seed = ax_seed;
      for (const AxiomStat& st : r.stats) {
        Check c;
        c.name = "axiom_" + st.name;
        c.params = "checked=" + std::to_string(st.checked);
        c.status = st.violations > 0 ? "violation"
                                     : (st.checked == 0 && st.inconclusive > 0 ? "inconclusive"
                                                                               : "ok");
        c.witness = st.violations > 0 ? st.witness
                                      : (st.inconclusive > 0 ? std::to_string(st.inconclusive) +
                                                                   " inconclusive"
                                                             : "");
        rep.checks.push_back(c);
      }
      if (!ax_report.empty()) cli_detail::write_file(ax_report, rep.to_json());
      for (const Check& c : rep.checks) out << c.name << ": " << c.status << "\n";
      return rep.exit_code();
    }
    if (*sink) {
      OligoStructure S = sk_omega == "dense_codense" ? OligoStructure::dense_order()
                                                     : OligoStructure::vec_fq(2, 6);
      SubuniverseOracle omega =
          sk_omega == "dense_codense" ? dense_codense_oracle() : even_span_oracle();
      auto delta = [&S](Elem e) { return S.kind() == OligoKind::VecFq ? e == 0 : false; };
      SinkReport r = sink_check(S, omega, delta, sk_k, sk_depth, 3, sk_seed);
      Report rep;
      rep.command = "indep sink";
      rep.seed = sk_seed;
      Check c;
      c.name = "sink_conditions";
      c.params = "omega=" + sk_omega + " k=" + std::to_string(sk_k);
      c.status = r.ok() ? "ok" : "violation";
      c.witness = std::to_string(r.chains_witnessed) + "/" + std::to_string(r.chains_sampled) +
                  " chains";
      rep.checks.push_back(c);
      if (!sk_report.empty()) cli_detail::write_file(sk_report, rep.to_json());
      out << c.name << ": " << c.status << "\n";
      return rep.exit_code();
    }
    if (*verify) {
      checks::Options opt;
      opt.quick = v_quick;
      opt.seed = v_seed;
      opt.inject_fault = v_fault;
      Report rep;
      rep.command = std::string("verify-all") + (v_quick ? " --quick" : "");
      rep.seed = v_seed;
      rep.checks = checks::run_all(opt);
      // determinism self-check: one cheap sampled check rerun bit for bit
      {
        checks::Options small = opt;
        small.quick = true;
        Check once = checks::c5_ocharacterization(small);
        Check twice = checks::c5_ocharacterization(small);
        Check det;
        det.name = "c13_determinism";
        det.params = "repeated quick sampled check";
        bool same = once.status == twice.status && once.witness == twice.witness &&
                    once.params == twice.params;
        det.status = same ? "ok" : "violation";
        if (!same) det.witness = "rerun diverged";
        rep.checks.push_back(det);
      }
      for (const Check& c : rep.checks)
        out << c.name << ": " << c.status << (c.witness.empty() ? "" : " (" + c.witness + ")")
            << "\n";
      if (!v_out.empty()) cli_detail::write_file(v_out, rep.to_json(v_timings));
      return rep.exit_code();
    }
  } catch (const Error& e) {
    if (e.code() == Errc::UsageError) {
      err << e.what() << "\n";
      return 64;
    }
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 64;
}

}  // namespace homog
