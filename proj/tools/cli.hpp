#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgmorse/corpus.hpp"
#include "dgmorse/report.hpp"

namespace dgm::cli {

enum Exit : int { Ok = 0, Usage = 1, Parse = 2, Validation = 3, Refusal = 4, Breach = 5 };

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnsupportedRing:
    case ErrorCode::FieldRequired: return Refusal;
    case ErrorCode::DSquaredNonzero:
    case ErrorCode::NotAChainMap:
    case ErrorCode::NotAHomotopy:
    case ErrorCode::NotModuleMorphism:
    case ErrorCode::PairingMismatch:
    case ErrorCode::DegreeMismatch: return Breach;
    case ErrorCode::SyntaxError:
    case ErrorCode::UnresolvedName: return Parse;
    default: return Validation;
  }
}

using json = nlohmann::json;

/// "example:NAME" reads the embedded corpus; anything else is a path.
inline Bundle load_source(const std::string& src) {
  if (src.rfind("example:", 0) == 0) return load_example(src.substr(8));
  return load_bundle_file(src);
}

inline json homology_json(const CoeffResult& r) {
  json degs = json::array();
  for (int k = r.lo(); k <= r.hi(); ++k) {
    const auto& g = r.H.at(r.cohomological ? -k : k);
    json tors = json::array();
    for (const auto& t : g.torsion) tors.push_back(t.to_string(r.H.ctx.var));
    degs.push_back({{"degree", k}, {"group", r.describe(k)}, {"free_rank", g.free_rank}, {"torsion", tors}});
  }
  return degs;
}

inline std::string matrix_text(const Matrix& M, const std::string& var) {
  std::string out = "[";
  for (std::size_t i = 0; i < M.rows(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < M.cols(); ++j) out += (j ? " " : "") + M(i, j).to_string(var);
  }
  return out + "]";
}

struct Options {
  std::string file, coeff, scalars, field = "Q", map, kind, pairing, format = "text", example;
  int rmax = 3;
};

inline int cmd_validate(const Bundle& b, std::ostream& out, bool structured) {
  ValidationReport rep = validate_bundle(b);
  if (structured) {
    out << json{{"bundle", b.name}, {"ok", rep.ok()}, {"issues", rep.issues}}.dump(2) << "\n";
  } else {
    out << "bundle " << b.name << ": " << (rep.ok() ? "valid" : "invalid") << "\n";
    for (const auto& s : rep.issues) out << "  " << s << "\n";
  }
  return rep.ok() ? Ok : Validation;
}

inline int cmd_homology(const Bundle& b, const Options& o, std::ostream& out, bool structured) {
  std::vector<std::string> tags;
  if (!o.coeff.empty())
    tags.push_back(o.coeff);
  else
    for (const auto& [t, c] : b.coeffs) tags.push_back(t);
  json all = json::array();
  bool mismatch = false;
  for (const auto& tag : tags) {
    std::optional<ScalarContext> sc;
    if (!o.scalars.empty()) sc = parse_scalars(o.scalars);
    CoeffResult r = compute_coeff(b, tag, sc);
    auto expected = sc ? std::map<int, std::string>{} : expected_homology(b, tag);
    const char* H = r.cohomological ? "H^" : "H_";
    if (structured) {
      all.push_back({{"coeff", tag}, {"route", route_name(r.route)}, {"ring", r.H.ctx.name()}, {"cohomological", r.cohomological},
                     {"degrees", homology_json(r)}});
    } else {
      out << "bundle " << b.name << ", coefficients " << tag << " (" << route_name(r.route) << ", " << r.H.ctx.name() << ")\n";
      for (int k = r.lo(); k <= r.hi(); ++k) {
        out << "  " << H << k << " = " << r.describe(k);
        auto it = expected.find(k);
        if (it != expected.end()) {
          bool ok = it->second == r.describe(k);
          mismatch |= !ok;
          out << (ok ? "  [matches expectation]" : "  [EXPECTED " + it->second + "]");
        }
        out << "\n";
      }
    }
    for (const auto& [k, v] : expected) {
      bool in_range = k >= r.lo() && k <= r.hi();
      if (!in_range && v != "0") mismatch = true;
      if (in_range && v != r.describe(k)) mismatch = true;
    }
  }
  if (structured) out << json{{"bundle", b.name}, {"results", all}}.dump(2) << "\n";
  return mismatch ? Breach : Ok;
}

inline int cmd_ss(const Bundle& b, const Options& o, std::ostream& out, bool structured) {
  if (o.coeff.empty()) fail(ErrorCode::UnknownTag, "ss needs --coeff");
  ScalarContext field = parse_scalars(o.field);
  SpectralSequence ss = compute_coeff_pages(b, o.coeff, o.rmax, field);
  auto page_json = [&](const SpectralPage& P) {
    json dims = json::array();
    for (const auto& [pq, d] : P.dims) dims.push_back({{"p", pq.first}, {"q", pq.second}, {"dim", d}});
    json ds = json::array();
    for (const auto& [pq, D] : P.differentials) {
      long rk = P.rank_of_d(pq.first, pq.second);
      if (rk) ds.push_back({{"p", pq.first}, {"q", pq.second}, {"rank", rk}});
    }
    return json{{"r", P.r}, {"dims", dims}, {"differentials", ds}};
  };
  if (structured) {
    json pages = json::array();
    for (const auto& P : ss.pages) pages.push_back(page_json(P));
    out << json{{"bundle", b.name}, {"coeff", o.coeff}, {"field", field.name()}, {"pages", pages}, {"infinity", page_json(ss.infinity)},
                {"stable_from", ss.stable_from}, {"certificate_failures", ss.certificate_failures}}
               .dump(2)
        << "\n";
  } else {
    out << "bundle " << b.name << ", coefficients " << o.coeff << " over " << field.name() << ", index filtration\n";
    auto show = [&](const SpectralPage& P, const std::string& label) {
      out << "  " << label << ":";
      if (P.dims.empty()) out << " 0";
      for (const auto& [pq, d] : P.dims) out << " (" << pq.first << "," << pq.second << ")=" << d;
      out << "\n";
      for (const auto& [pq, D] : P.differentials) {
        long rk = P.rank_of_d(pq.first, pq.second);
        if (rk)
          out << "    d^" << P.r << " (" << pq.first << "," << pq.second << ") -> (" << pq.first - P.r << "," << pq.second + P.r - 1
              << ") rank " << rk << "\n";
      }
    };
    for (const auto& P : ss.pages) show(P, "E^" + std::to_string(P.r));
    show(ss.infinity, "E^inf");
    out << "  degenerates at E^" << ss.stable_from << "\n";
  }
  bool mismatch = false;
  for (const auto& e : b.page_expects) {
    if (e.tag != o.coeff || e.r >= static_cast<int>(ss.pages.size())) continue;
    long got = ss.pages[e.r].dim(e.p, e.q);
    if (got != e.dim) {
      mismatch = true;
      if (!structured) out << "  EXPECTED dim E^" << e.r << "(" << e.p << "," << e.q << ") = " << e.dim << ", got " << got << "\n";
    }
  }
  for (const auto& f : ss.certificate_failures)
    if (!structured) out << "  certificate failure: " << f << "\n";
  return (mismatch || !ss.certificate_failures.empty()) ? Breach : Ok;
}

inline int cmd_map_check(const Bundle& b, const Options& o, std::ostream& out, bool structured) {
  std::vector<std::string> names;
  if (!o.map.empty())
    names.push_back(o.map);
  else
    for (const auto& [n, m] : b.maps) names.push_back(n);
  json all = json::array();
  int code = Ok;
  for (const auto& n : names) {
    MapResult r = build_map(b, n);
    if (!o.kind.empty() && o.kind != r.kind) {
      out << "map " << n << " has kind " << r.kind << ", not " << o.kind << "\n";
      code = Validation;
      continue;
    }
    const std::string var = r.Hs.ctx.var;
    if (structured) {
      json ind = json::array();
      for (const auto& [k, M] : r.induced) ind.push_back({{"degree", k}, {"matrix", matrix_text(M, var)}});
      json j{{"map", n}, {"kind", r.kind}, {"chain_map", true}, {"induced", ind}, {"iso", r.iso}};
      if (r.homotopy) j["homotopy"] = true;
      if (r.lifted_invertible) j["lifted_invertible"] = *r.lifted_invertible;
      all.push_back(j);
    } else {
      out << "map " << n << " (" << r.kind << "): chain map certified";
      if (r.homotopy) out << ", homotopy certified";
      out << "\n";
      for (const auto& [k, M] : r.induced)
        out << "  H_" << k << ": " << r.Hs.describe(k) << " -> " << r.Ht.describe(k) << "  " << matrix_text(M, var) << "\n";
      out << "  isomorphism on homology: " << (r.iso ? "yes" : "no") << "\n";
      if (r.lifted_invertible) out << "  lifted map invertible: " << (*r.lifted_invertible ? "yes" : "no") << "\n";
    }
  }
  if (structured) out << json{{"bundle", b.name}, {"maps", all}}.dump(2) << "\n";
  return code;
}

inline int cmd_duality(const Bundle& b, const Options& o, std::ostream& out, bool structured) {
  std::vector<std::string> names;
  if (!o.pairing.empty())
    names.push_back(o.pairing);
  else
    for (const auto& [n, p] : b.pairings) names.push_back(n);
  json all = json::array();
  int code = Ok;
  for (const auto& n : names) {
    DualityResult r = compute_pairing(b, n);
    const int dim = b.critical(b.cocycle(b.pairings.at(n).cochain).rows).ambient_dim;
    if (!r.iso) code = Breach;
    if (structured) {
      json degs = json::array();
      for (int k = r.homological->min_degree(); k <= r.homological->max_degree(); ++k)
        degs.push_back({{"degree", k}, {"homology", r.h_homological.describe(k)}, {"cohomology_degree", dim - k},
                        {"cohomology", r.h_cochain.describe(k)}});
      all.push_back({{"pairing", n}, {"chain_map", true}, {"iso", r.iso}, {"degrees", degs}});
    } else {
      out << "pairing " << n << ": d∘PD = PD∘∂ certified\n";
      for (int k = r.homological->min_degree(); k <= r.homological->max_degree(); ++k)
        out << "  H_" << k << " = " << r.h_homological.describe(k) << "  <->  H^" << dim - k << " = " << r.h_cochain.describe(k) << "\n";
      out << "  isomorphism: " << (r.iso ? "yes" : "no") << "\n";
    }
  }
  if (structured) out << json{{"bundle", b.name}, {"pairings", all}}.dump(2) << "\n";
  return code;
}

inline int cmd_examples(const Options& o, std::ostream& out, bool structured) {
  if (!o.example.empty()) {
    out << example_text(o.example);
    return Ok;
  }
  json all = json::array();
  for (const auto& n : example_names()) {
    Bundle b = load_example(n);
    std::string note = b.notes.empty() ? "" : b.notes.front();
    if (structured)
      all.push_back({{"name", n}, {"note", note}});
    else
      out << n << "  " << note << "\n";
  }
  if (structured) out << all.dump(2) << "\n";
  return Ok;
}

/// Runs one command line; never throws.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dgmorse: exact Morse homology with DG local coefficients"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  auto* v = app.add_subcommand("validate", "check every axiom and cocycle equation in a bundle");
  v->add_option("file", o.file, "bundle path or example:NAME")->required();
  auto* h = app.add_subcommand("homology", "homology of the declared coefficient systems");
  h->add_option("file", o.file)->required();
  h->add_option("--coeff", o.coeff, "coefficient tag (default: all)");
  h->add_option("--scalars", o.scalars, "override scalars: Z, Q or F<p>");
  auto* s = app.add_subcommand("ss", "pages of the index-filtration spectral sequence");
  s->add_option("file", o.file)->required();
  s->add_option("--coeff", o.coeff)->required();
  s->add_option("--rmax", o.rmax, "last page to print")->check(CLI::NonNegativeNumber);
  s->add_option("--field", o.field, "Q or F<p>");
  auto* m = app.add_subcommand("map-check", "certify declared maps and report their effect on homology");
  m->add_option("file", o.file)->required();
  m->add_option("--map", o.map, "map name (default: all)");
  m->add_option("--kind", o.kind, "expected kind")->check(CLI::IsMember({"continuation", "shriek", "homotopy", "module", "composite"}));
  auto* d = app.add_subcommand("duality", "certify Poincaré duality pairings");
  d->add_option("file", o.file)->required();
  d->add_option("--pairing", o.pairing);
  auto* e = app.add_subcommand("examples", "list the built-in corpus or print one bundle");
  e->add_option("name", o.example);
  auto* f = app.add_subcommand("fmt", "print the canonical rendering of a bundle");
  f->add_option("file", o.file)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return Usage;
  }
  const bool structured = o.format == "structured";

  if (e->parsed()) {
    try {
      return cmd_examples(o, out, structured);
    } catch (const Error& ex) {
      err << ex.what() << "\n";
      return Validation;
    }
  }

  std::optional<Bundle> b;
  try {
    b.emplace(load_source(o.file));
  } catch (const Error& ex) {
    err << ex.what() << "\n";
    return ex.code() == ErrorCode::UnknownExample ? Validation : Parse;
  }
  try {
    if (f->parsed()) {
      out << render_bundle(*b);
      return Ok;
    }
    if (v->parsed()) return cmd_validate(*b, out, structured);
    if (h->parsed()) return cmd_homology(*b, o, out, structured);
    if (s->parsed()) return cmd_ss(*b, o, out, structured);
    if (m->parsed()) return cmd_map_check(*b, o, out, structured);
    if (d->parsed()) return cmd_duality(*b, o, out, structured);
  } catch (const Error& ex) {
    err << ex.what() << "\n";
    return exit_code_for(ex.code());
  }
  return Usage;
}

}  // namespace dgm::cli
