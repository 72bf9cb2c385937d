#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "combi/random_gen.hpp"
#include "combi/selftest.hpp"
#include "combi/separate.hpp"
#include "combi/spectra.hpp"

namespace {

using namespace combi;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileError", "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    if (field.empty()) continue;
    auto eq = field.find('=');
    if (eq == std::string::npos) fail("FormatError", "expected key=value, got '" + field + "'");
    out[field.substr(0, eq)] = field.substr(eq + 1);
  }
  return out;
}

// Builds the signature from --sig / --rel flags, falling back to symbols
// inferred from the formula text itself.
Signature assemble_signature(const std::string& sig_file, const std::vector<std::string>& rel_flags,
                             const std::string& formula_text) {
  if (!sig_file.empty()) return parse_signature(slurp(sig_file));
  if (!rel_flags.empty()) {
    Signature sig;
    for (const std::string& decl : rel_flags) {
      auto slash = decl.find('/');
      if (slash == std::string::npos) fail("FormatError", "expected Name/arity, got '" + decl + "'");
      sig.add(decl.substr(0, slash), std::stoi(decl.substr(slash + 1)));
    }
    return sig;
  }
  return parse_formula_lenient(formula_text).second;
}

NamedFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileError", "cannot open " + path);
  return read_family(in);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail("FileError", "cannot write " + out_path);
  out << content;
}

Assignment parse_assignment(const std::string& text) {
  Assignment out;
  for (const auto& [key, value] : parse_params(text)) {
    if (key.size() < 2 || key[0] != 'x') fail("FormatError", "assignment keys look like x1, got '" + key + "'");
    out[Variable{std::stoi(key.substr(1))}] = std::stoi(value);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-structure combination workbench"};
  app.require_subcommand(1);

  std::string formula_text, sig_file, structures_file, family_file, out_path;
  std::string structure_name, assign_text, mode = "p", e_symbol = "E", sigma_text = "x1 = x1";
  std::string target_tag, block_tag, kind, params_text, format = "text";
  std::vector<std::string> rel_flags;
  int element = -1;
  std::uint64_t seed = 0;

  auto* parse_cmd = app.add_subcommand("parse", "parse a formula and print its canonical form");
  parse_cmd->add_option("formula", formula_text)->required();
  parse_cmd->add_option("--sig", sig_file, "signature file of `rel Name/arity` lines");
  parse_cmd->add_option("--rel", rel_flags, "inline declaration Name/arity (repeatable)");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a structure");
  eval_cmd->add_option("formula", formula_text)->required();
  eval_cmd->add_option("--structures", structures_file, "structure file")->required();
  eval_cmd->add_option("--name", structure_name, "structure to use (default: the only one)");
  eval_cmd->add_option("--assign", assign_text, "free-variable values, e.g. x1=0,x2=2");

  auto* combine_cmd = app.add_subcommand("combine", "combine a family file into one structure");
  combine_cmd->add_option("family", family_file)->required();
  combine_cmd->add_option("--mode", mode, "p or e")->check(CLI::IsMember({"p", "e"}));
  combine_cmd->add_option("--e-symbol", e_symbol, "equivalence symbol name (e mode)");
  combine_cmd->add_option("-o,--out", out_path, "output structure file (default stdout)");

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict a combination to one block");
  restrict_cmd->add_option("family", family_file)->required();
  restrict_cmd->add_option("--mode", mode, "p or e")->check(CLI::IsMember({"p", "e"}));
  restrict_cmd->add_option("--e-symbol", e_symbol, "equivalence symbol name (e mode)");
  restrict_cmd->add_option("--tag", block_tag, "block tag (p mode)");
  restrict_cmd->add_option("--element", element, "element whose class to keep (e mode)");
  restrict_cmd->add_option("-o,--out", out_path, "output structure file (default stdout)");

  auto* rel_cmd = app.add_subcommand("relativize", "relativize a formula to one equivalence class");
  rel_cmd->add_option("formula", formula_text)->required();
  rel_cmd->add_option("--e-symbol", e_symbol, "equivalence symbol name");
  rel_cmd->add_option("--sigma", sigma_text, "formula with one free variable");
  rel_cmd->add_option("--sig", sig_file, "signature file");
  rel_cmd->add_option("--rel", rel_flags, "inline declaration Name/arity (repeatable)");

  auto* sep_cmd = app.add_subcommand("separate", "emit separating sentences for one family member");
  sep_cmd->add_option("family", family_file)->required();
  sep_cmd->add_option("--target", target_tag)->required();

  auto* spec_cmd = app.add_subcommand("spectrum", "evaluate a named spectrum formula");
  spec_cmd->add_option("name", kind)->required();
  spec_cmd->add_option("--params", params_text, "comma-separated key=value pairs");
  spec_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "tsv"}));

  auto* gen_cmd = app.add_subcommand("gen", "write one of the named example families");
  gen_cmd->add_option("--kind", kind)->required();
  gen_cmd->add_option("--params", params_text, "comma-separated key=value pairs");
  gen_cmd->add_option("-o,--out", out_path, "output family file (default stdout)");

  auto* self_cmd = app.add_subcommand("selftest", "run the oracle-vs-closed-form suite");
  self_cmd->add_option("--seed", seed, "seed for the randomized sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" || e.get_name() == "CallForVersion")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (parse_cmd->parsed()) {
      Signature sig = assemble_signature(sig_file, rel_flags, formula_text);
      std::cout << render(parse_formula(formula_text, sig)) << "\n";
      return 0;
    }
    if (eval_cmd->parsed()) {
      std::istringstream in(slurp(structures_file));
      auto structures = read_structures(in);
      if (structures.empty()) fail("FormatError", "no structures in " + structures_file);
      const FiniteStructure* chosen = nullptr;
      if (structure_name.empty()) {
        if (structures.size() > 1) fail("FormatError", "several structures in file; pass --name");
        chosen = &structures.front().structure;
      } else {
        for (const auto& s : structures)
          if (s.name == structure_name) chosen = &s.structure;
        if (!chosen) fail("UnknownTag", "no structure named " + structure_name);
      }
      Formula f = parse_formula(formula_text, chosen->sig());
      bool value = evaluate(*chosen, f, assign_text.empty() ? Assignment{} : parse_assignment(assign_text));
      std::cout << (value ? "true" : "false") << "\n";
      return 0;
    }
    if (combine_cmd->parsed()) {
      NamedFamily fam = load_family(family_file);
      CombinedStructure c = mode == "p" ? p_combine(fam.family) : e_combine(fam.family, e_symbol);
      std::ostringstream out;
      write_structure(out, fam.name + (mode == "p" ? "_P" : "_E"), c.base());
      emit(out_path, out.str());
      return 0;
    }
    if (restrict_cmd->parsed()) {
      NamedFamily fam = load_family(family_file);
      std::ostringstream out;
      if (mode == "p") {
        if (block_tag.empty()) fail("UnknownTag", "p mode needs --tag");
        write_structure(out, block_tag, restrict_to_predicate(p_combine(fam.family), block_tag));
      } else {
        if (element < 0) fail("ElementOutOfRange", "e mode needs --element");
        write_structure(out, "class_" + std::to_string(element),
                        restrict_to_class(e_combine(fam.family, e_symbol), element));
      }
      emit(out_path, out.str());
      return 0;
    }
    if (rel_cmd->parsed()) {
      Signature sig = assemble_signature(sig_file, rel_flags, formula_text);
      if (!sig.has(e_symbol)) sig.add(e_symbol, 2);
      Formula f = parse_formula(formula_text, sig);
      auto [sigma, sigma_sig] = parse_formula_lenient(sigma_text);
      for (const auto& r : sigma_sig.relations())
        if (!sig.has(r.name)) sig.add(r.name, r.arity);
      std::cout << render(relativize(f, sig, e_symbol, sigma)) << "\n";
      return 0;
    }
    if (sep_cmd->parsed()) {
      NamedFamily fam = load_family(family_file);
      for (const auto& cert : e_separating_set(target_tag, fam.family)) {
        std::cout << render(cert.sentence) << "\n";
        std::cout << "# rank=" << cert.rank << " true=" << cert.witness_true << " false=" << cert.witness_false
                  << "\n";
      }
      return 0;
    }
    if (spec_cmd->parsed()) {
      SpectrumReport report = spectrum_report(kind, parse_params(params_text));
      std::string oracle = report.oracle_value ? std::to_string(*report.oracle_value) : "n/a";
      std::string agrees = report.agrees ? "true" : "false";
      if (format == "text") {
        std::cout << "closed_form=" << to_string(report.closed_form) << " oracle=" << oracle
                  << " agrees=" << agrees << "\n";
      } else {
        std::cout << "closed_form\toracle\tagrees\n"
                  << to_string(report.closed_form) << "\t" << oracle << "\t" << agrees << "\n";
      }
      return 0;
    }
    if (gen_cmd->parsed()) {
      FamilySpec fam = gen_family(kind, parse_params(params_text));
      std::ostringstream out;
      write_family(out, {kind, fam});
      emit(out_path, out.str());
      return 0;
    }
    if (self_cmd->parsed()) return run_selftest(std::cout, seed) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "combi: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
