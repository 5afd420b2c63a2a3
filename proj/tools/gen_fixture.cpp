// SPDX-License-Identifier: Apache-2.0
//
// Generates the bundled molecule fixture: deterministic pseudo-random
// drug-like SMILES (scaffold + substituent assembly, deduplicated by their
// radius-2 fingerprint) with a smooth synthetic objective drawn from the
// Tanimoto-kernel Gaussian family the toolkit models. Run once; the output
// CSV is committed under data/fixtures/.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "molgp/fingerprint.hpp"
#include "molgp/gp.hpp"
#include "molgp/kernel.hpp"
#include "molgp/rng.hpp"
#include "molgp/smiles.hpp"

namespace {

// Ring cores with '*' substitution sites (always after carbon atoms).
const std::vector<std::string> kCores = {
    "c1*c*c*c*c*c1*",         // benzene
    "c1*c*c*nc*c1*",          // pyridine
    "c1*c*nc*c*n1",           // pyrimidine
    "c1*c*c*sc1*",            // thiophene
    "c1*c*c*oc1*",            // furan
    "c1*c*c*c*n1C",           // N-methylpyrrole
    "c1*c*c*c2c*c*c*c*c2c1",  // naphthalene
    "C1*C*C*C*C*C1*",         // cyclohexane
    "C1*C*C*NC*C1",           // piperidine
    "C1*C*OC*C*N1C",          // N-methylmorpholine
    "C1*C*C*OC1*",            // tetrahydrofuran
    "C1*C*C*C*C1*",           // cyclopentane
    "C1*CN(C*C1)C(=O)C",      // acetylpyrrolidine
};

const std::vector<std::string> kSubstituents = {
    "F",  "Cl",      "Br",     "C",       "CC",         "CCC",     "C(C)C",  "O",
    "OC", "OCC",     "N",      "NC",      "N(C)C",      "C#N",     "C(=O)O", "C(=O)N",
    "CO", "CN",      "C(F)(F)F", "S",     "SC",         "S(=O)(=O)C", "[N+](=O)[O-]",
    "CCO", "CCN",    "C(=O)C", "NC(=O)C", "C(=O)OC",    "OC(F)F",  "C=C",
};

const std::vector<std::string> kLinkers = {
    "", "C", "CC", "CCC", "O", "OC", "N", "NC", "C(=O)", "C(=O)N", "C=C", "S", "CNC", "COC",
};

std::string expand_core(const std::string& tmpl, molgp::Rng& rng, double site_prob,
                        bool forbid_last_site) {
  const std::size_t last_star = tmpl.rfind('*');
  std::string out;
  out.reserve(tmpl.size() * 2);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '*') {
      out += tmpl[i];
      continue;
    }
    if (forbid_last_site && i == last_star) {
      continue;
    }
    if (rng.uniform01() < site_prob) {
      out += '(';
      out += kSubstituents[rng.below(kSubstituents.size())];
      out += ')';
    }
  }
  return out;
}

std::string random_molecule(molgp::Rng& rng) {
  const bool two_units = rng.uniform01() < 0.35;
  const std::string& core1 = kCores[rng.below(kCores.size())];
  std::string smiles = expand_core(core1, rng, 0.3, two_units);
  if (two_units) {
    smiles += kLinkers[rng.below(kLinkers.size())];
    smiles += expand_core(kCores[rng.below(kCores.size())], rng, 0.3, false);
  }
  return smiles;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the bundled molecule fixture"};
  std::string output = "data/fixtures/synthetic_5k.csv";
  int count = 5000;
  std::uint64_t seed = 20250809;
  double amplitude_sq = 2.25;
  double noise_fraction = 0.01;
  double mean = -8.0;
  int radius = 2;
  app.add_option("--output", output);
  app.add_option("--count", count);
  app.add_option("--seed", seed);
  app.add_option("--amplitude", amplitude_sq);
  app.add_option("--noise-fraction", noise_fraction);
  app.add_option("--mean", mean);
  app.add_option("--radius", radius);
  CLI11_PARSE(app, argc, argv);

  molgp::Rng rng(seed);
  std::vector<std::string> smiles_list;
  std::vector<molgp::SparseFingerprint> fps;
  std::set<std::vector<molgp::SparseFingerprint::Entry>> seen;
  smiles_list.reserve(count);

  long attempts = 0;
  while (static_cast<int>(smiles_list.size()) < count) {
    ++attempts;
    if (attempts > 200L * count) {
      std::cerr << "generator stalled after " << attempts << " attempts\n";
      return 1;
    }
    const std::string smiles = random_molecule(rng);
    molgp::SparseFingerprint fp;
    try {
      const molgp::MolGraph mol = molgp::parse_smiles(smiles);
      if (mol.atom_count() > 60) {
        continue;
      }
      fp = molgp::morgan_sparse(mol, radius);
    } catch (const molgp::SmilesError& error) {
      std::cerr << "template produced invalid SMILES '" << smiles << "': " << error.what()
                << "\n";
      return 1;
    }
    if (!seen.insert(fp.entries()).second) {
      continue;  // duplicate structure
    }
    smiles_list.push_back(smiles);
    fps.push_back(std::move(fp));
  }
  std::cerr << "generated " << smiles_list.size() << " molecules in " << attempts
            << " attempts\n";

  // smooth objective: one draw from N(mean, a^2 T + s^2 I)
  molgp::GpHyperparams h;
  h.amplitude_sq = amplitude_sq;
  h.noise_sq = noise_fraction * amplitude_sq;
  h.mean_const = mean;
  const Eigen::MatrixXd gram = molgp::tanimoto_matrix(
      std::span<const molgp::SparseFingerprint>(fps), std::span<const molgp::SparseFingerprint>(fps));
  std::cerr << "factorizing " << count << "x" << count << " kernel...\n";
  const molgp::detail::KernelFactor factor = molgp::detail::factor_kernel(gram, h);

  Eigen::VectorXd z(count);
  for (int i = 0; i < count; ++i) {
    z[i] = rng.gaussian();
  }
  const Eigen::VectorXd y =
      (factor.chol_lower.triangularView<Eigen::Lower>() * z).array() + mean;

  std::ofstream out(output);
  if (!out) {
    std::cerr << "cannot write " << output << "\n";
    return 1;
  }
  out << "id,smiles,score\n";
  char buffer[64];
  for (int i = 0; i < count; ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", y[i]);
    out << "mol" << i << "," << smiles_list[i] << "," << buffer << "\n";
  }
  std::cerr << "wrote " << output << "\n";
  return 0;
}
