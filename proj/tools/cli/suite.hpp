// Property checks shared by the individual subcommands and `verify all`.
#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cli/report.hpp"
#include "ncspace/algebra.hpp"
#include "ncspace/diffspace.hpp"
#include "ncspace/vonneumann.hpp"

namespace ncspace::cli {

using Rng = std::mt19937_64;

struct Settings {
  double tol = 1e-12;
  double norm_tol = 1e-9;
  std::uint64_t seed = 1;
  int samples = 20;
};

enum class PartitionKind { Hausdorff, Total, Discrete };

Partition make_partition(const DiffSpace& space, PartitionKind kind);

/// Entries uniform in [-1, 1] + i[-1, 1], jets included when requested.
AlgebraElement random_element(Rng& rng, const GroupoidPtr& g, bool jets);

/// Small integer-coefficient polynomial in `symbols`, as expression text.
std::string random_polynomial(Rng& rng, const std::vector<std::string>& symbols, int degree, int terms);

void check_space(Report& r, const DiffSpace& space, const std::string& prefix);
void check_groupoid(Report& r, const Groupoid& g, const std::string& prefix);
void check_algebra_laws(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix);
void check_representation(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix);
void check_calculus(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix);
/// Runs the commutant solver on the represented arrow indicators; nullopt
/// (and a skip record) when the direct sum is too large.
std::optional<BicommutantReport> check_bicommutant(Report& r, const GroupoidPtr& g, const Settings& s,
                                                   const std::string& prefix);
void check_states(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix);
void check_deformation(Report& r, const DiffSpace& space, const Settings& s, Rng& rng, const std::string& prefix);

/// point_id, class
Table classes_table(const DiffSpace& space, const Partition& p);
/// id, weight, coordinates of the quotient points
Table quotient_table(const Quotient& q);
/// src, dst, orbit
Table arrows_table(const Groupoid& g);
/// orbit, size, members
Table orbits_table(const Groupoid& g);
/// k, blocks, block_sizes, arrows, homomorphism_defect
Table deform_table(const DiffSpace& space, const Settings& s, Rng& rng);
/// element, row, col, re, im for a list of operators
Table matrices_table(std::string name, const std::vector<Matrix>& ms);

}  // namespace ncspace::cli
